#include "hdm/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace hdm {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(field);
  return fields;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& token, std::size_t line_no) {
  const std::string t = trim(token);
  double value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size())
    fail(errc::io_error, "line " + std::to_string(line_no) + ": cannot parse number '" + t + "'");
  return value;
}

// Parses rows of (label, values...) into per-label blocks in first-appearance
// order.
struct RawGroups {
  std::vector<std::string> labels;
  std::vector<std::vector<std::vector<double>>> rows;
};

RawGroups read_grouped_rows(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) fail(errc::io_error, std::string(what) + ": empty input");
  const auto header = split_csv_line(line);
  if (header.empty() || trim(header[0]) != "group")
    fail(errc::io_error, std::string(what) + ": first header column must be 'group'");
  const std::size_t width = header.size() - 1;
  if (width == 0) fail(errc::io_error, std::string(what) + ": no value columns");

  RawGroups out;
  std::map<std::string, std::size_t> index;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != width + 1)
      fail(errc::io_error, "line " + std::to_string(line_no) + ": expected " +
                               std::to_string(width + 1) + " fields, got " +
                               std::to_string(fields.size()));
    const std::string label = trim(fields[0]);
    auto [it, inserted] = index.try_emplace(label, out.labels.size());
    if (inserted) {
      out.labels.push_back(label);
      out.rows.emplace_back();
    }
    std::vector<double> values(width);
    for (std::size_t j = 0; j < width; ++j) values[j] = parse_double(fields[j + 1], line_no);
    out.rows[it->second].push_back(std::move(values));
  }
  if (out.labels.empty()) fail(errc::io_error, std::string(what) + ": no data rows");
  return out;
}

std::vector<MatrixXd> to_matrices(const RawGroups& raw) {
  std::vector<MatrixXd> groups;
  groups.reserve(raw.labels.size());
  for (const auto& rows : raw.rows) {
    MatrixXd g(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < rows[i].size(); ++j)
        g(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    groups.push_back(std::move(g));
  }
  return groups;
}

std::ifstream open_or_fail(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io_error, "cannot open " + path);
  return in;
}

void append_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void append_number(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

JsonValue pair_json(const Pair& p) {
  JsonValue a = JsonValue::array();
  a.push(JsonValue::integer(p.k));
  a.push(JsonValue::integer(p.l));
  return a;
}

JsonValue triple_json(const Triple& t) {
  JsonValue a = JsonValue::array();
  a.push(JsonValue::integer(t.k));
  a.push(JsonValue::integer(t.l));
  a.push(JsonValue::integer(t.j));
  return a;
}

}  // namespace

LabeledDataset read_dataset_csv(std::istream& in) {
  const RawGroups raw = read_grouped_rows(in, "dataset csv");
  LabeledDataset out;
  out.labels = raw.labels;
  out.data.groups = to_matrices(raw);
  return out;
}

LabeledDataset read_dataset_csv_file(const std::string& path) {
  auto in = open_or_fail(path);
  return read_dataset_csv(in);
}

LabeledCurves read_curves_csv(std::istream& in, const std::optional<VectorXd>& grid) {
  const RawGroups raw = read_grouped_rows(in, "curves csv");
  LabeledCurves out;
  out.labels = raw.labels;
  out.curves.groups = to_matrices(raw);
  const Index m = out.curves.groups.front().cols();
  if (grid) {
    if (grid->size() != m)
      fail(errc::io_error, "grid has " + std::to_string(grid->size()) + " points but curves have " +
                               std::to_string(m) + " columns");
    out.curves.grid = *grid;
  } else {
    out.curves.grid = VectorXd::LinSpaced(m, 0.0, 1.0);
  }
  return out;
}

LabeledCurves read_curves_csv_file(const std::string& path, const std::optional<VectorXd>& grid) {
  auto in = open_or_fail(path);
  return read_curves_csv(in, grid);
}

VectorXd read_grid_file(const std::string& path) {
  auto in = open_or_fail(path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  for (char& c : text)
    if (c == ',' || c == '\t' || c == '\r' || c == '\n') c = ' ';
  std::istringstream stream(text);
  std::vector<double> values;
  std::string token;
  while (stream >> token) values.push_back(parse_double(token, values.size() + 1));
  if (values.empty()) fail(errc::io_error, "grid file " + path + " has no values");
  return Eigen::Map<VectorXd>(values.data(), static_cast<Index>(values.size()));
}

JsonValue JsonValue::object() {
  JsonValue v;
  v.kind_ = Kind::object;
  return v;
}
JsonValue JsonValue::array() {
  JsonValue v;
  v.kind_ = Kind::array;
  return v;
}
JsonValue JsonValue::str(std::string s) {
  JsonValue v;
  v.kind_ = Kind::string;
  v.string_ = std::move(s);
  return v;
}
JsonValue JsonValue::num(double d) {
  JsonValue v;
  v.kind_ = Kind::number;
  v.number_ = d;
  return v;
}
JsonValue JsonValue::integer(long long i) {
  JsonValue v;
  v.kind_ = Kind::integer;
  v.integer_ = i;
  return v;
}
JsonValue JsonValue::boolean(bool b) {
  JsonValue v;
  v.kind_ = Kind::boolean;
  v.bool_ = b;
  return v;
}
JsonValue JsonValue::null() { return {}; }

JsonValue& JsonValue::set(const std::string& key, JsonValue v) {
  members_.emplace_back(key, std::move(v));
  return *this;
}

JsonValue& JsonValue::push(JsonValue v) {
  elements_.push_back(std::move(v));
  return *this;
}

void JsonValue::dump_to(std::string& out) const {
  switch (kind_) {
    case Kind::object: {
      out += '{';
      bool first = true;
      for (const auto& [key, value] : members_) {
        if (!first) out += ',';
        first = false;
        append_escaped(out, key);
        out += ':';
        value.dump_to(out);
      }
      out += '}';
      break;
    }
    case Kind::array: {
      out += '[';
      bool first = true;
      for (const JsonValue& value : elements_) {
        if (!first) out += ',';
        first = false;
        value.dump_to(out);
      }
      out += ']';
      break;
    }
    case Kind::string: append_escaped(out, string_); break;
    case Kind::number: append_number(out, number_); break;
    case Kind::integer: out += std::to_string(integer_); break;
    case Kind::boolean: out += bool_ ? "true" : "false"; break;
    case Kind::null: out += "null"; break;
  }
}

std::string JsonValue::dump() const {
  std::string out;
  dump_to(out);
  return out;
}

JsonValue test_result_json(const TestResult& result, const TestConfig& config,
                           const std::vector<std::string>& labels, const PairSet& pairs,
                           const std::optional<BasisSpec>& basis) {
  JsonValue root = JsonValue::object();
  root.set("schema_version", JsonValue::integer(kSchemaVersion));
  root.set("kind", JsonValue::str(basis ? "fanova" : "test"));
  root.set("rho", JsonValue::num(config.rho));
  root.set("side", JsonValue::str(side_name(config.side)));
  root.set("B", JsonValue::integer(config.B));
  root.set("seed", JsonValue::integer(static_cast<long long>(config.seed)));
  root.set("tau_policy", JsonValue::str(config.tau.automatic ? "auto" : "fixed"));
  root.set("tau_used", JsonValue::num(result.tau_used));

  JsonValue group_list = JsonValue::array();
  for (const std::string& label : labels) group_list.push(JsonValue::str(label));
  root.set("groups", std::move(group_list));

  JsonValue pair_list = JsonValue::array();
  for (const Pair& p : pairs.pairs) pair_list.push(pair_json(p));
  root.set("pairs", std::move(pair_list));

  root.set("p_value", JsonValue::num(result.p_value));
  root.set("reject", JsonValue::boolean(result.reject));

  JsonValue sig = JsonValue::array();
  for (const Triple& t : result.significant) sig.push(triple_json(t));
  root.set("significant", std::move(sig));

  JsonValue scr = JsonValue::array();
  for (const ScrEntry& e : result.scr) {
    JsonValue entry = JsonValue::object();
    entry.set("k", JsonValue::integer(e.k));
    entry.set("l", JsonValue::integer(e.l));
    entry.set("j", JsonValue::integer(e.j));
    entry.set("lower", JsonValue::num(e.lower));
    entry.set("upper", JsonValue::num(e.upper));
    entry.set("excludes_zero", JsonValue::boolean(e.excludes_zero));
    scr.push(std::move(entry));
  }
  root.set("scr", std::move(scr));

  JsonValue diags = JsonValue::array();
  for (const TauDiagnostic& d : result.tau_diagnostics) {
    JsonValue entry = JsonValue::object();
    entry.set("tau", JsonValue::num(d.tau));
    entry.set("size", JsonValue::num(d.size));
    entry.set("p_value", JsonValue::num(d.p_value));
    entry.set("retained", JsonValue::boolean(d.retained));
    diags.push(std::move(entry));
  }
  root.set("tau_diagnostics", std::move(diags));
  root.set("tau_fallback", JsonValue::boolean(result.tau_fallback));

  if (basis) {
    JsonValue b = JsonValue::object();
    b.set("family", JsonValue::str(basis_family_name(basis->family)));
    b.set("p", JsonValue::integer(basis->p));
    root.set("basis", std::move(b));
  }
  return root;
}

JsonValue experiment_json(const ExperimentResult& result, const RunBudget& budget, double theta) {
  JsonValue root = JsonValue::object();
  root.set("schema_version", JsonValue::integer(kSchemaVersion));
  root.set("kind", JsonValue::str("simulate"));
  root.set("scenario", JsonValue::str(result.scenario));
  root.set("reps", JsonValue::integer(budget.reps));
  root.set("B", JsonValue::integer(budget.test.B));
  root.set("rho", JsonValue::num(budget.test.rho));
  root.set("seed", JsonValue::integer(static_cast<long long>(budget.seed)));
  root.set("tau_policy", JsonValue::str(budget.test.tau.automatic ? "auto" : "fixed"));
  if (!budget.test.tau.automatic) root.set("tau", JsonValue::num(budget.test.tau.fixed));
  root.set("theta", JsonValue::num(theta));
  root.set("rejection_rate", JsonValue::num(result.rejection_rate));
  root.set("mc_se", JsonValue::num(result.mc_se));
  root.set("tau_mean", JsonValue::num(result.tau_mean));
  root.set("tau_sd", JsonValue::num(result.tau_sd));
  if (!result.power.empty()) {
    JsonValue curve = JsonValue::array();
    for (const PowerPoint& pt : result.power) {
      JsonValue entry = JsonValue::object();
      entry.set("theta", JsonValue::num(pt.theta));
      entry.set("rate", JsonValue::num(pt.rate));
      entry.set("se", JsonValue::num(pt.se));
      curve.push(std::move(entry));
    }
    root.set("power_curve", std::move(curve));
  }
  return root;
}

JsonValue table_json(const std::string& table, const std::vector<TableRow>& rows,
                     const RunBudget& budget) {
  JsonValue root = JsonValue::object();
  root.set("schema_version", JsonValue::integer(kSchemaVersion));
  root.set("kind", JsonValue::str("table"));
  root.set("table", JsonValue::str(table));
  root.set("reps", JsonValue::integer(budget.reps));
  root.set("B", JsonValue::integer(budget.test.B));
  root.set("rho", JsonValue::num(budget.test.rho));
  root.set("seed", JsonValue::integer(static_cast<long long>(budget.seed)));
  JsonValue list = JsonValue::array();
  for (const TableRow& row : rows) {
    JsonValue entry = JsonValue::object();
    entry.set("scenario", JsonValue::str(row.scenario));
    entry.set("rate", JsonValue::num(row.rate));
    entry.set("se", JsonValue::num(row.se));
    entry.set("tau_mean", JsonValue::num(row.tau_mean));
    entry.set("reps", JsonValue::integer(row.reps));
    list.push(std::move(entry));
  }
  root.set("rows", std::move(list));
  return root;
}

std::string replicate_log_lines(const std::string& scenario,
                                const std::vector<ReplicateRecord>& records) {
  std::string out;
  for (const ReplicateRecord& r : records) {
    JsonValue line = JsonValue::object();
    line.set("scenario", JsonValue::str(scenario));
    line.set("rep_index", JsonValue::integer(r.rep));
    line.set("reject", JsonValue::boolean(r.reject));
    line.set("p_value", JsonValue::num(r.p_value));
    line.set("tau", JsonValue::num(r.tau));
    out += line.dump();
    out += '\n';
  }
  return out;
}

}  // namespace hdm
