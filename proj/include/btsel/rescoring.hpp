#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace btsel {

// phi = ln(BLEU x (100 - TER) x MTLD), the per-system multiplier applied to
// FDA scores by the rescored strategy. The product must exceed 1 so that phi
// is positive: a zero or negative factor would erase or invert the ranking,
// so out-of-range inputs are rejected rather than clamped.
double compute_phi(double bleu, double ter, double mtld);

enum class FactorProvenance { kComputed, kSupplied };

struct FactorEntry {
  // Metric triple; absent for entries loaded from JSON that carry only a
  // phi value (externally computed, possibly from other metrics).
  std::optional<double> bleu, ter, mtld;
  double phi = 0.0;
  FactorProvenance provenance = FactorProvenance::kComputed;
};

class SystemFactorTable {
 public:
  void insert(const std::string& system, FactorEntry entry);

  const std::map<std::string, FactorEntry>& entries() const { return entries_; }
  bool has(const std::string& system) const { return entries_.count(system) > 0; }
  // Throws DataError if the system is absent.
  double phi_for(const std::string& system) const;
  const FactorEntry& entry(const std::string& system) const;

  std::string to_json_string() const;
  static SystemFactorTable from_json_string(const std::string& text);

 private:
  std::map<std::string, FactorEntry> entries_;
};

// Per-system inputs for building a factor table. Computed mode measures
// BLEU and TER on the devset hypothesis/reference pair and MTLD on the full
// backtranslated corpus; supplied mode takes the raw values and validates
// the same ranges.
struct MeasurementFiles {
  std::string hypothesis_path;       // devset translated by the reverse system
  std::string reference_path;        // shared devset reference
  std::string backtranslation_path;  // full synthetic source corpus
};

struct MeasurementValues {
  double bleu = 0.0;
  double ter = 0.0;
  double mtld = 0.0;
};

using SystemMeasurement = std::variant<MeasurementFiles, MeasurementValues>;

SystemFactorTable build_factor_table(
    const std::vector<std::pair<std::string, SystemMeasurement>>& measurements,
    bool lowercase = false);

SystemFactorTable load_factor_table(const std::string& path);
void save_factor_table(const std::string& path, const SystemFactorTable& table);

}  // namespace btsel
