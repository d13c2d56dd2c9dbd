#include "btsel/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "btsel/corpus.hpp"
#include "btsel/diversity.hpp"
#include "btsel/errors.hpp"
#include "btsel/fda.hpp"
#include "btsel/ngram.hpp"
#include "btsel/quality.hpp"
#include "btsel/report.hpp"
#include "btsel/rescoring.hpp"
#include "btsel/strategies.hpp"
#include "btsel/version.hpp"

namespace btsel::cli {

namespace {

namespace fs = std::filesystem;

bool log_enabled() {
  const char* level = std::getenv("BTSEL_LOG");
  return level == nullptr || std::string_view(level) != "quiet";
}

double round4(double v) { return std::round(v * 10000.0) / 10000.0; }

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open file for writing: " + path);
  out << content;
  if (!out) throw DataError("I/O error while writing: " + path);
}

Corpus load_seed(const std::string& path, bool lowercase) {
  Corpus seed = load_corpus(path, EmptyLinePolicy::kSkip);
  if (seed.empty()) throw DataError("seed corpus " + path + " has no non-empty lines");
  if (lowercase) lowercase_corpus(seed);
  return seed;
}

struct SelectOptions {
  std::string strategy;
  std::string seed_path;
  std::string pool_path;
  std::string out_dir;
  std::string factors_path;
  std::uint64_t budget = 0;
  bool budget_set = false;
  int order = 3;
  std::uint64_t rng_seed = 0;
  bool lowercase = false;
  bool count_distinct = false;
  int threads = 1;
};

int cmd_select(const SelectOptions& opt, std::ostream& /*out*/, std::ostream& err) {
  const StrategyKind kind = parse_strategy(opt.strategy);
  if (kind == StrategyKind::kFromAll && !opt.budget_set) {
    throw ConfigError("--budget is required for the from-all strategy");
  }
  if (kind != StrategyKind::kFromAll && opt.budget_set) {
    throw ConfigError("--budget is only valid with the from-all strategy; " +
                      strategy_name(kind) + " selects one pair per target");
  }
  if (kind == StrategyKind::kEachFromAllRescored && opt.factors_path.empty()) {
    throw ConfigError("--factors is required for the each-from-all-rs strategy");
  }
  if (kind != StrategyKind::kEachFromAllRescored && !opt.factors_path.empty()) {
    throw ConfigError("--factors is only valid with the each-from-all-rs strategy");
  }

  const auto t0 = std::chrono::steady_clock::now();
  const Corpus seed_corpus = load_seed(opt.seed_path, opt.lowercase);
  const MultiSourcePool pool = load_pool(opt.pool_path, opt.lowercase);
  const SeedNGramSet seed(seed_corpus, opt.order);
  if (log_enabled()) {
    err << "btsel: pool of " << pool.num_targets() << " targets x " << pool.num_systems()
        << " systems, seed of " << seed.num_grams() << " n-grams (order " << opt.order << ")\n";
  }

  StrategyOptions sopt;
  sopt.distinct_grams = opt.count_distinct;
  sopt.threads = opt.threads;

  SelectionResult result;
  switch (kind) {
    case StrategyKind::kFromAll:
      result = run_from_all(pool, seed, opt.budget, sopt);
      break;
    case StrategyKind::kEachFromAll:
      result = run_each_from_all(pool, seed, opt.rng_seed, sopt);
      break;
    case StrategyKind::kEachFromAllX4:
      result = run_each_from_all_x4(pool, seed, opt.rng_seed, sopt);
      break;
    case StrategyKind::kEachFromAllRescored: {
      const SystemFactorTable table = load_factor_table(opt.factors_path);
      result = run_rescored(pool, seed, table, opt.rng_seed, sopt);
      break;
    }
  }
  const auto t1 = std::chrono::steady_clock::now();
  const auto wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();

  fs::create_directories(opt.out_dir);
  {
    std::ostringstream tsv;
    write_selection_tsv(tsv, result, pool);
    write_file((fs::path(opt.out_dir) / "selection.tsv").string(), tsv.str());
  }

  nlohmann::json per_system = nlohmann::json::object();
  for (std::size_t s = 0; s < pool.num_systems(); ++s) {
    per_system[pool.system_name(s)] = result.per_system_counts[s];
  }
  nlohmann::json config{{"strategy", strategy_name(kind)},
                        {"seed", opt.seed_path},
                        {"pool", opt.pool_path},
                        {"order", opt.order},
                        {"rng_seed", opt.rng_seed},
                        {"lowercase", opt.lowercase},
                        {"count_distinct", opt.count_distinct},
                        {"threads", opt.threads}};
  if (opt.budget_set) config["budget"] = opt.budget;
  if (!opt.factors_path.empty()) config["factors"] = opt.factors_path;
  nlohmann::json summary{{"command", "select"},
                         {"config", config},
                         {"per_system_counts", per_system},
                         {"selected", result.records.size()},
                         {"shortfall", result.shortfall},
                         {"unassigned_targets", result.unassigned_targets.size()},
                         {"tool", "btsel"},
                         {"version", kVersion},
                         {"wall_time_ms", wall_ms}};
  write_file((fs::path(opt.out_dir) / "summary.json").string(), summary.dump(2) + "\n");

  if (log_enabled()) {
    err << "btsel: selected " << result.records.size() << " pairs in " << wall_ms << " ms";
    if (result.shortfall > 0) err << " (shortfall " << result.shortfall << ")";
    err << "\n";
  }
  return 0;
}

struct EvaluateOptions {
  std::string hyp_path;
  std::string ref_path;
  bool smooth_bleu = false;
  bool lowercase = false;
};

int cmd_evaluate(const EvaluateOptions& opt, std::ostream& out, std::ostream& /*err*/) {
  Corpus hyp = load_corpus(opt.hyp_path, EmptyLinePolicy::kKeep);
  Corpus ref = load_corpus(opt.ref_path, EmptyLinePolicy::kKeep);
  if (opt.lowercase) {
    lowercase_corpus(hyp);
    lowercase_corpus(ref);
  }
  const auto pairs = make_eval_pairs(hyp, ref);
  const QualityScores scores = evaluate_corpus(pairs, opt.smooth_bleu);
  nlohmann::json result{{"bleu", round4(scores.bleu)},
                        {"ter", round4(scores.ter)},
                        {"chrf3", round4(scores.chrf3)}};
  out << result.dump() << "\n";
  return 0;
}

struct DiversityOptions {
  std::string input_path;
  double threshold = 0.72;
  bool lowercase = false;
};

int cmd_diversity(const DiversityOptions& opt, std::ostream& out, std::ostream& /*err*/) {
  Corpus doc = load_corpus(opt.input_path, EmptyLinePolicy::kSkip);
  if (opt.lowercase) lowercase_corpus(doc);
  if (doc.empty()) throw DataError("corpus " + opt.input_path + " has no non-empty lines");
  const DiversityScores scores = compute_diversity(doc, opt.threshold);
  nlohmann::json result;
  result["ttr"] = round4(scores.ttr);
  if (scores.yules_i) {
    result["yules_i"] = round4(*scores.yules_i);
  } else {
    result["yules_i"] = nullptr;
    result["yules_i_reason"] = "every type occurs exactly once (M2 == M1)";
  }
  if (scores.mtld) {
    result["mtld"] = round4(*scores.mtld);
  } else {
    result["mtld"] = nullptr;
    result["mtld_reason"] = "running TTR never crossed the threshold; zero factors";
  }
  out << result.dump() << "\n";
  return 0;
}

struct RescoreFactorsOptions {
  std::string measurements_path;
  std::string out_path;
  bool lowercase = false;
};

int cmd_rescore_factors(const RescoreFactorsOptions& opt, std::ostream& out, std::ostream& err) {
  std::ifstream in(opt.measurements_path, std::ios::binary);
  if (!in) throw DataError("cannot open measurements manifest: " + opt.measurements_path);
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed measurements manifest " + opt.measurements_path + ": " + e.what());
  }
  if (!manifest.is_object() || !manifest.contains("systems") || !manifest["systems"].is_array()) {
    throw DataError("measurements manifest must be {\"systems\": [...], (\"reference\": path)}");
  }
  const auto base = fs::path(opt.measurements_path).parent_path();
  auto resolve = [&base](const std::string& p) {
    fs::path fp(p);
    return fp.is_absolute() ? fp.string() : (base / fp).string();
  };
  std::string default_reference;
  if (manifest.contains("reference")) default_reference = manifest["reference"].get<std::string>();

  std::vector<std::pair<std::string, SystemMeasurement>> measurements;
  for (const auto& sys : manifest["systems"]) {
    if (!sys.is_object() || !sys.contains("name") || !sys["name"].is_string()) {
      throw DataError("each measurements entry needs a string field \"name\"");
    }
    const std::string name = sys["name"].get<std::string>();
    if (sys.contains("bleu") || sys.contains("ter") || sys.contains("mtld")) {
      if (!(sys.contains("bleu") && sys.contains("ter") && sys.contains("mtld"))) {
        throw DataError("system \"" + name + "\": supplied values need all of bleu, ter, mtld");
      }
      MeasurementValues values;
      values.bleu = sys["bleu"].get<double>();
      values.ter = sys["ter"].get<double>();
      values.mtld = sys["mtld"].get<double>();
      measurements.emplace_back(name, values);
    } else {
      if (!sys.contains("hypothesis") || !sys.contains("backtranslation")) {
        throw DataError("system \"" + name +
                        "\": needs hypothesis+backtranslation files or bleu/ter/mtld values");
      }
      MeasurementFiles files;
      files.hypothesis_path = resolve(sys["hypothesis"].get<std::string>());
      files.backtranslation_path = resolve(sys["backtranslation"].get<std::string>());
      std::string ref = sys.contains("reference") ? sys["reference"].get<std::string>()
                                                  : default_reference;
      if (ref.empty()) {
        throw DataError("system \"" + name +
                        "\": no reference file (set per-system or top-level \"reference\")");
      }
      files.reference_path = resolve(ref);
      measurements.emplace_back(name, files);
    }
  }

  const SystemFactorTable table = build_factor_table(measurements, opt.lowercase);
  if (opt.out_path.empty()) {
    out << table.to_json_string();
  } else {
    write_file(opt.out_path, table.to_json_string());
    if (log_enabled()) {
      err << "btsel: wrote factor table for " << table.entries().size() << " systems to "
          << opt.out_path << "\n";
    }
  }
  return 0;
}

struct ReportOptions {
  std::string selection_path;
  std::string pool_path;
  std::string seed_path;
  std::string out_dir;
  std::uint64_t bin_size = kDefaultBinSize;
  bool csv = false;
  bool lowercase = false;
};

int cmd_report(const ReportOptions& opt, std::ostream& /*out*/, std::ostream& err) {
  const std::vector<SelectionRow> rows = read_selection_tsv(opt.selection_path);
  const MultiSourcePool pool = load_pool(opt.pool_path, opt.lowercase);

  Corpus selection_source, selection_target;
  selection_source.reserve(rows.size());
  selection_target.reserve(rows.size());
  for (const SelectionRow& row : rows) {
    selection_source.push_back(Sentence{row.source_tokens, row.target_line_no});
    selection_target.push_back(Sentence{row.target_tokens, row.target_line_no});
  }

  std::optional<Corpus> seed;
  if (!opt.seed_path.empty()) seed = load_seed(opt.seed_path, opt.lowercase);

  const BinHistogram histogram = selection_histogram(rows, opt.bin_size);

  std::vector<std::pair<std::string, const Corpus*>> length_corpora;
  for (std::size_t s = 0; s < pool.num_systems(); ++s) {
    length_corpora.emplace_back(pool.system_name(s) + "_bt", &pool.source(s));
  }
  length_corpora.emplace_back("targets", &pool.targets());
  if (!selection_source.empty()) {
    length_corpora.emplace_back("selection_source", &selection_source);
    length_corpora.emplace_back("selection_target", &selection_target);
  }
  if (seed) length_corpora.emplace_back("seed", &*seed);
  const std::vector<LengthRow> lengths = length_table(length_corpora);

  std::vector<std::pair<std::string, const Corpus*>> diversity_corpora;
  for (std::size_t s = 0; s < pool.num_systems(); ++s) {
    diversity_corpora.emplace_back(pool.system_name(s) + "_bt", &pool.source(s));
  }
  if (!selection_source.empty()) {
    diversity_corpora.emplace_back("selection_source", &selection_source);
  }
  if (seed) diversity_corpora.emplace_back("seed", &*seed);
  const std::vector<DiversityRow> diversity = diversity_table(diversity_corpora);

  fs::create_directories(opt.out_dir);
  auto emit = [&](const char* name, auto writer) {
    std::ostringstream buf;
    writer(buf);
    write_file((fs::path(opt.out_dir) / name).string(), buf.str());
  };
  emit("histogram.tsv", [&](std::ostream& o) { write_histogram_tsv(o, histogram); });
  emit("lengths.tsv", [&](std::ostream& o) { write_lengths_tsv(o, lengths); });
  emit("diversity.tsv", [&](std::ostream& o) { write_diversity_tsv(o, diversity); });
  write_file((fs::path(opt.out_dir) / "report.json").string(),
             report_json(histogram, lengths, diversity));
  if (opt.csv) {
    emit("histogram.csv", [&](std::ostream& o) { write_histogram_csv(o, histogram); });
  }
  if (log_enabled()) {
    err << "btsel: report over " << rows.size() << " selections written to " << opt.out_dir
        << "\n";
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"data selection and analysis for multi-system backtranslated corpora", "btsel"};
  app.set_version_flag("--version", std::string("btsel ") + kVersion);
  app.require_subcommand(1);

  SelectOptions sel;
  CLI::App* select = app.add_subcommand("select", "run a selection strategy over a pool");
  select->add_option("--strategy", sel.strategy,
                     "from-all | each-from-all | each-from-all-x4 | each-from-all-rs")
      ->required();
  select->add_option("--seed", sel.seed_path, "seed corpus (in-domain devset side)")->required();
  select->add_option("--pool", sel.pool_path, "pool manifest JSON")->required();
  select->add_option("--out", sel.out_dir, "output directory")->required();
  select->add_option("--budget", sel.budget, "number of pairs to select (from-all only)");
  select->add_option("--factors", sel.factors_path, "factor table JSON (each-from-all-rs only)");
  select->add_option("--order", sel.order, "maximum n-gram order")
      ->default_val(3)
      ->check(CLI::Range(1, kMaxNgramOrder));
  select->add_option("--rng-seed", sel.rng_seed, "seed for the zero-overlap fallback draws")
      ->default_val(0);
  select->add_flag("--lowercase", sel.lowercase, "ASCII-lowercase all corpora after loading");
  select->add_flag("--count-distinct", sel.count_distinct,
                   "count each distinct shared n-gram once per candidate");
  select->add_option("--threads", sel.threads, "thread cap for candidate encoding")
      ->default_val(1)
      ->check(CLI::Range(1, 64));

  EvaluateOptions ev;
  CLI::App* evaluate = app.add_subcommand("evaluate", "BLEU, TER and chrF3 for a hypothesis file");
  evaluate->add_option("--hyp", ev.hyp_path, "hypothesis corpus")->required();
  evaluate->add_option("--ref", ev.ref_path, "reference corpus")->required();
  evaluate->add_flag("--smooth-bleu", ev.smooth_bleu, "add-one smoothing for n>=2 precisions");
  evaluate->add_flag("--lowercase", ev.lowercase, "ASCII-lowercase before scoring");

  DiversityOptions div;
  CLI::App* diversity = app.add_subcommand("diversity", "TTR, Yule's I and MTLD for a corpus");
  diversity->add_option("--input", div.input_path, "corpus file")->required();
  diversity->add_option("--threshold", div.threshold, "MTLD factor threshold")->default_val(0.72);
  diversity->add_flag("--lowercase", div.lowercase, "ASCII-lowercase before scoring");

  RescoreFactorsOptions rf;
  CLI::App* rescore =
      app.add_subcommand("rescore-factors", "build the per-system phi factor table");
  rescore->add_option("--measurements", rf.measurements_path, "measurements manifest JSON")
      ->required();
  rescore->add_option("--out", rf.out_path, "output file (stdout when omitted)");
  rescore->add_flag("--lowercase", rf.lowercase, "ASCII-lowercase corpora before measuring");

  ReportOptions rep;
  CLI::App* report = app.add_subcommand("report", "selection distribution and corpus analyses");
  report->add_option("--selection", rep.selection_path, "selection TSV")->required();
  report->add_option("--pool", rep.pool_path, "pool manifest JSON")->required();
  report->add_option("--seed", rep.seed_path, "optional seed corpus for extra table rows");
  report->add_option("--out", rep.out_dir, "output directory")->required();
  report->add_option("--bin-size", rep.bin_size, "histogram bin size")
      ->default_val(kDefaultBinSize)
      ->check(CLI::PositiveNumber);
  report->add_flag("--csv", rep.csv, "also write histogram.csv (plot-friendly long format)");
  report->add_flag("--lowercase", rep.lowercase, "ASCII-lowercase corpora after loading");

  std::vector<const char*> argv;
  argv.push_back("btsel");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    sel.budget_set = select->count("--budget") > 0;

    if (select->parsed()) return cmd_select(sel, out, err);
    if (evaluate->parsed()) return cmd_evaluate(ev, out, err);
    if (diversity->parsed()) return cmd_diversity(div, out, err);
    if (rescore->parsed()) return cmd_rescore_factors(rf, out, err);
    if (report->parsed()) return cmd_report(rep, out, err);
    err << "btsel: no subcommand given\n";
    return 2;
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    err << "btsel: configuration error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    err << "btsel: data error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "btsel: internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace btsel::cli
