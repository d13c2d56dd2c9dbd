#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "btsel/corpus.hpp"
#include "btsel/diversity.hpp"
#include "btsel/errors.hpp"
#include "btsel/fda.hpp"
#include "btsel/ngram.hpp"
#include "btsel/quality.hpp"
#include "btsel/rescoring.hpp"
#include "btsel/strategies.hpp"
#include "btsel/version.hpp"

namespace py = pybind11;

namespace {

using TokenLists = std::vector<std::vector<std::string>>;

btsel::Corpus to_corpus(const TokenLists& sentences) {
  btsel::Corpus corpus;
  corpus.reserve(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    corpus.push_back(btsel::Sentence{sentences[i], i});
  }
  return corpus;
}

btsel::EmptyLinePolicy parse_policy(const std::string& policy) {
  if (policy == "skip") return btsel::EmptyLinePolicy::kSkip;
  if (policy == "error") return btsel::EmptyLinePolicy::kError;
  if (policy == "keep") return btsel::EmptyLinePolicy::kKeep;
  throw btsel::ConfigError("empty-line policy must be skip, error or keep");
}

std::vector<btsel::EvalPair> pairs_from(const TokenLists& hyp, const TokenLists& ref) {
  return btsel::make_eval_pairs(to_corpus(hyp), to_corpus(ref));
}

btsel::MultiSourcePool make_pool(const TokenLists& targets,
                                 const std::vector<std::pair<std::string, TokenLists>>& systems) {
  std::vector<std::string> names;
  std::vector<btsel::Corpus> sources;
  for (const auto& [name, sentences] : systems) {
    names.push_back(name);
    sources.push_back(to_corpus(sentences));
  }
  return btsel::MultiSourcePool(to_corpus(targets), std::move(names), std::move(sources));
}

std::vector<double> factor_vector(const btsel::MultiSourcePool& pool,
                                  const std::optional<std::map<std::string, double>>& factors) {
  std::vector<double> out(pool.num_systems(), 1.0);
  if (factors) {
    for (std::size_t s = 0; s < pool.num_systems(); ++s) {
      auto it = factors->find(pool.system_name(s));
      if (it == factors->end()) {
        throw btsel::DataError("no factor for system \"" + pool.system_name(s) + "\"");
      }
      out[s] = it->second;
    }
  }
  return out;
}

py::dict result_to_dict(const btsel::SelectionResult& result, const btsel::MultiSourcePool& pool) {
  py::list records;
  for (const auto& rec : result.records) {
    records.append(py::make_tuple(rec.rank, pool.system_name(rec.system), rec.target_idx,
                                  rec.score, rec.fallback));
  }
  py::dict counts;
  for (std::size_t s = 0; s < pool.num_systems(); ++s) {
    counts[py::str(pool.system_name(s))] = result.per_system_counts[s];
  }
  py::dict out;
  out["records"] = std::move(records);
  out["per_system_counts"] = std::move(counts);
  out["shortfall"] = result.shortfall;
  out["unassigned_targets"] = result.unassigned_targets;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "FDA-based data selection for multi-system backtranslated corpora";
  m.attr("__version__") = btsel::kVersion;

  py::register_exception<btsel::ConfigError>(m, "BtselConfigError", PyExc_ValueError);
  py::register_exception<btsel::DataError>(m, "BtselDataError", PyExc_ValueError);

  py::class_<btsel::Sentence>(m, "Sentence")
      .def_readonly("tokens", &btsel::Sentence::tokens)
      .def_readonly("line_no", &btsel::Sentence::line_no)
      .def("__len__", [](const btsel::Sentence& s) { return s.size(); })
      .def("__repr__", [](const btsel::Sentence& s) {
        return "Sentence(line " + std::to_string(s.line_no) + ", \"" + btsel::join_tokens(s) +
               "\")";
      });

  py::class_<btsel::MultiSourcePool>(m, "Pool")
      .def(py::init(&make_pool), py::arg("targets"), py::arg("systems"),
           "Builds a pool from target sentences and an ordered list of\n"
           "(system_name, source_sentences) pairs; all token lists are\n"
           "line-aligned with the targets.")
      .def_property_readonly("num_targets", &btsel::MultiSourcePool::num_targets)
      .def_property_readonly("system_names", &btsel::MultiSourcePool::system_names);

  m.def("load_corpus",
        [](const std::string& path, const std::string& policy) {
          return btsel::load_corpus(path, parse_policy(policy));
        },
        py::arg("path"), py::arg("policy") = "skip");
  m.def("load_pool", &btsel::load_pool, py::arg("manifest_path"), py::arg("lowercase") = false);

  m.def("bleu",
        [](const TokenLists& hyp, const TokenLists& ref, bool smooth) {
          return btsel::corpus_bleu(pairs_from(hyp, ref), smooth);
        },
        py::arg("hypotheses"), py::arg("references"), py::arg("smooth") = false);
  m.def("ter", [](const TokenLists& hyp, const TokenLists& ref) {
    return btsel::corpus_ter(pairs_from(hyp, ref));
  });
  m.def("chrf3", [](const TokenLists& hyp, const TokenLists& ref) {
    return btsel::corpus_chrf3(pairs_from(hyp, ref));
  });

  m.def("ttr", [](const TokenLists& doc) { return btsel::ttr(to_corpus(doc)); });
  m.def("yules_i", [](const TokenLists& doc) { return btsel::yules_i(to_corpus(doc)); });
  m.def("mtld",
        [](const TokenLists& doc, double threshold) {
          return btsel::mtld(to_corpus(doc), threshold);
        },
        py::arg("doc"), py::arg("threshold") = 0.72);

  m.def("compute_phi", &btsel::compute_phi, py::arg("bleu"), py::arg("ter"), py::arg("mtld"));

  m.def("fda_score",
        [](const std::vector<std::string>& tokens, const TokenLists& seed,
           const TokenLists& selected, int order) {
          const btsel::SeedNGramSet seed_set(to_corpus(seed), order);
          btsel::SelectedCounts counts(seed_set);
          for (const auto& s : selected) counts.add_sentence(btsel::Sentence{s, 0});
          return btsel::fda_score(btsel::Sentence{tokens, 0}, seed_set, counts);
        },
        py::arg("tokens"), py::arg("seed"), py::arg("selected") = TokenLists{},
        py::arg("order") = 3);

  m.def("select_from_all",
        [](const btsel::MultiSourcePool& pool, const TokenLists& seed, std::uint64_t budget,
           int order, int threads) {
          const btsel::SeedNGramSet seed_set(to_corpus(seed), order);
          btsel::StrategyOptions opts;
          opts.threads = threads;
          return result_to_dict(btsel::run_from_all(pool, seed_set, budget, opts), pool);
        },
        py::arg("pool"), py::arg("seed"), py::arg("budget"), py::arg("order") = 3,
        py::arg("threads") = 1);

  m.def("select_each_from_all",
        [](const btsel::MultiSourcePool& pool, const TokenLists& seed,
           const std::optional<std::map<std::string, double>>& factors, std::uint64_t rng_seed,
           int order, int threads) {
          const btsel::SeedNGramSet seed_set(to_corpus(seed), order);
          btsel::StrategyOptions opts;
          opts.threads = threads;
          return result_to_dict(
              btsel::run_each_from_all(pool, seed_set, factor_vector(pool, factors), rng_seed,
                                       opts),
              pool);
        },
        py::arg("pool"), py::arg("seed"), py::arg("factors") = py::none(),
        py::arg("rng_seed") = 0, py::arg("order") = 3, py::arg("threads") = 1);

  m.def("select_each_from_all_x4",
        [](const btsel::MultiSourcePool& pool, const TokenLists& seed, std::uint64_t rng_seed,
           int order, int threads) {
          const btsel::SeedNGramSet seed_set(to_corpus(seed), order);
          btsel::StrategyOptions opts;
          opts.threads = threads;
          return result_to_dict(btsel::run_each_from_all_x4(pool, seed_set, rng_seed, opts),
                                pool);
        },
        py::arg("pool"), py::arg("seed"), py::arg("rng_seed") = 0, py::arg("order") = 3,
        py::arg("threads") = 1);
}
