#include "btsel/rescoring.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "btsel/diversity.hpp"
#include "btsel/errors.hpp"
#include "btsel/quality.hpp"

namespace btsel {

double compute_phi(double bleu, double ter, double mtld) {
  if (!std::isfinite(bleu) || !(bleu > 0.0)) {
    throw DataError("phi: BLEU must be > 0, got " + std::to_string(bleu));
  }
  if (!std::isfinite(ter) || !(ter < 100.0)) {
    throw DataError("phi: TER must be < 100, got " + std::to_string(ter));
  }
  if (!std::isfinite(mtld) || !(mtld > 0.0)) {
    throw DataError("phi: MTLD must be > 0, got " + std::to_string(mtld));
  }
  const double product = bleu * (100.0 - ter) * mtld;
  if (!(product > 1.0)) {
    throw DataError("phi: BLEU*(100-TER)*MTLD = " + std::to_string(product) +
                    " must exceed 1 for a positive factor");
  }
  return std::log(product);
}

void SystemFactorTable::insert(const std::string& system, FactorEntry entry) {
  if (system.empty()) throw DataError("factor table: system name must be non-empty");
  if (!entries_.emplace(system, std::move(entry)).second) {
    throw DataError("factor table: duplicate system \"" + system + "\"");
  }
}

double SystemFactorTable::phi_for(const std::string& system) const {
  return entry(system).phi;
}

const FactorEntry& SystemFactorTable::entry(const std::string& system) const {
  auto it = entries_.find(system);
  if (it == entries_.end()) {
    throw DataError("factor table has no entry for system \"" + system + "\"");
  }
  return it->second;
}

std::string SystemFactorTable::to_json_string() const {
  nlohmann::json systems = nlohmann::json::object();
  for (const auto& [name, e] : entries_) {
    nlohmann::json entry = nlohmann::json::object();
    if (e.bleu) entry["bleu"] = *e.bleu;
    if (e.ter) entry["ter"] = *e.ter;
    if (e.mtld) entry["mtld"] = *e.mtld;
    entry["phi"] = e.phi;
    entry["provenance"] = e.provenance == FactorProvenance::kComputed ? "computed" : "supplied";
    systems[name] = std::move(entry);
  }
  nlohmann::json root;
  root["systems"] = std::move(systems);
  return root.dump(2) + "\n";
}

SystemFactorTable SystemFactorTable::from_json_string(const std::string& text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed factor table JSON: ") + e.what());
  }
  if (!root.is_object() || !root.contains("systems") || !root["systems"].is_object()) {
    throw DataError("factor table JSON must be {\"systems\": {name: {...}}}");
  }
  SystemFactorTable table;
  for (const auto& [name, entry] : root["systems"].items()) {
    if (!entry.is_object()) throw DataError("factor entry for \"" + name + "\" must be an object");
    FactorEntry fe;
    const bool has_triple =
        entry.contains("bleu") && entry.contains("ter") && entry.contains("mtld");
    if (has_triple) {
      fe.bleu = entry["bleu"].get<double>();
      fe.ter = entry["ter"].get<double>();
      fe.mtld = entry["mtld"].get<double>();
      double phi;
      try {
        phi = compute_phi(*fe.bleu, *fe.ter, *fe.mtld);
      } catch (const DataError& e) {
        throw DataError("system \"" + name + "\": " + e.what());
      }
      if (entry.contains("phi")) {
        const double given = entry["phi"].get<double>();
        if (std::abs(given - phi) > 1e-6) {
          throw DataError("system \"" + name + "\": phi " + std::to_string(given) +
                          " is inconsistent with ln(BLEU*(100-TER)*MTLD) = " +
                          std::to_string(phi));
        }
        phi = given;
      }
      fe.phi = phi;
    } else if (entry.contains("phi")) {
      fe.phi = entry["phi"].get<double>();
      if (!std::isfinite(fe.phi) || !(fe.phi > 0.0)) {
        throw DataError("system \"" + name + "\": phi must be a positive finite number");
      }
    } else {
      throw DataError("system \"" + name +
                      "\": entry needs either bleu/ter/mtld or a precomputed phi");
    }
    fe.provenance = (entry.contains("provenance") && entry["provenance"] == "computed")
                        ? FactorProvenance::kComputed
                        : FactorProvenance::kSupplied;
    table.insert(name, std::move(fe));
  }
  return table;
}

SystemFactorTable build_factor_table(
    const std::vector<std::pair<std::string, SystemMeasurement>>& measurements,
    bool lowercase) {
  SystemFactorTable table;
  for (const auto& [system, measurement] : measurements) {
    FactorEntry fe;
    if (const auto* files = std::get_if<MeasurementFiles>(&measurement)) {
      Corpus hyp = load_corpus(files->hypothesis_path, EmptyLinePolicy::kKeep);
      Corpus ref = load_corpus(files->reference_path, EmptyLinePolicy::kKeep);
      Corpus bt = load_corpus(files->backtranslation_path, EmptyLinePolicy::kSkip);
      if (lowercase) {
        lowercase_corpus(hyp);
        lowercase_corpus(ref);
        lowercase_corpus(bt);
      }
      std::vector<EvalPair> pairs;
      try {
        pairs = make_eval_pairs(hyp, ref);
      } catch (const DataError& e) {
        throw DataError("system \"" + system + "\": " + e.what());
      }
      fe.bleu = corpus_bleu(pairs);
      fe.ter = corpus_ter(pairs);
      const auto m = mtld(bt);
      if (!m) {
        throw DataError("system \"" + system + "\": MTLD is undefined on " +
                        files->backtranslation_path +
                        " (running TTR never crossed the threshold)");
      }
      fe.mtld = m;
      fe.provenance = FactorProvenance::kComputed;
    } else {
      const auto& values = std::get<MeasurementValues>(measurement);
      fe.bleu = values.bleu;
      fe.ter = values.ter;
      fe.mtld = values.mtld;
      fe.provenance = FactorProvenance::kSupplied;
    }
    try {
      fe.phi = compute_phi(*fe.bleu, *fe.ter, *fe.mtld);
    } catch (const DataError& e) {
      throw DataError("system \"" + system + "\": " + e.what());
    }
    table.insert(system, std::move(fe));
  }
  return table;
}

SystemFactorTable load_factor_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open factor table: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return SystemFactorTable::from_json_string(buf.str());
}

void save_factor_table(const std::string& path, const SystemFactorTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open file for writing: " + path);
  out << table.to_json_string();
  if (!out) throw DataError("I/O error while writing: " + path);
}

}  // namespace btsel
