#ifndef HDM_IO_HPP_
#define HDM_IO_HPP_

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hdm/fanova.hpp"
#include "hdm/harness.hpp"
#include "hdm/types.hpp"

namespace hdm {

// --- CSV ingestion ---------------------------------------------------------

// A labeled dataset: first CSV column is the group label, remaining columns
// are the observation coordinates. Labels map to group indices in order of
// first appearance.
struct LabeledDataset {
  Dataset data;
  std::vector<std::string> labels;
};

LabeledDataset read_dataset_csv(std::istream& in);
LabeledDataset read_dataset_csv_file(const std::string& path);

// Curves CSV has the same layout with one column per grid point. The grid is
// either supplied (strictly increasing, one value per column) or assumed
// equally spaced on [0,1].
struct LabeledCurves {
  CurveSet curves;
  std::vector<std::string> labels;
};

LabeledCurves read_curves_csv(std::istream& in, const std::optional<VectorXd>& grid);
LabeledCurves read_curves_csv_file(const std::string& path, const std::optional<VectorXd>& grid);

// All numeric tokens of a whitespace/comma/newline separated file.
VectorXd read_grid_file(const std::string& path);

// --- JSON emission ---------------------------------------------------------

// Minimal ordered JSON value. Doubles print with 17 significant digits so
// output is byte-stable and round-trips exactly; non-finite values print as
// null.
class JsonValue {
 public:
  static JsonValue object();
  static JsonValue array();
  static JsonValue str(std::string s);
  static JsonValue num(double v);
  static JsonValue integer(long long v);
  static JsonValue boolean(bool v);
  static JsonValue null();

  JsonValue& set(const std::string& key, JsonValue v);  // object members, insertion order
  JsonValue& push(JsonValue v);                         // array elements

  std::string dump() const;

 private:
  enum class Kind { object, array, string, number, integer, boolean, null };
  Kind kind_ = Kind::null;
  std::string string_;
  double number_ = 0;
  long long integer_ = 0;
  bool bool_ = false;
  std::vector<std::pair<std::string, JsonValue>> members_;
  std::vector<JsonValue> elements_;

  void dump_to(std::string& out) const;
};

constexpr int kSchemaVersion = 1;

// TestResult as the CLI emits it.
JsonValue test_result_json(const TestResult& result, const TestConfig& config,
                           const std::vector<std::string>& labels, const PairSet& pairs,
                           const std::optional<BasisSpec>& basis);

// Simulation summary; excludes wall-clock timing so output depends only on
// (request, seed).
JsonValue experiment_json(const ExperimentResult& result, const RunBudget& budget, double theta);

JsonValue table_json(const std::string& table, const std::vector<TableRow>& rows,
                     const RunBudget& budget);

// One JSON object per line: {scenario, rep_index, reject, p_value, tau}.
std::string replicate_log_lines(const std::string& scenario,
                                const std::vector<ReplicateRecord>& records);

}  // namespace hdm

#endif  // HDM_IO_HPP_
