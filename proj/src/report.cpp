#include "rpz/report.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace rpz {

Gate make_gate(std::string name, double value, std::string comparison, double threshold) {
  bool ok = false;
  if (comparison == "<=") ok = value <= threshold;
  else if (comparison == ">=") ok = value >= threshold;
  else if (comparison == "<") ok = value < threshold;
  else if (comparison == ">") ok = value > threshold;
  else throw std::invalid_argument("make_gate: unknown comparison " + comparison);
  return {std::move(name), value, std::move(comparison), threshold, ok};
}

bool ExperimentReport::passed() const {
  for (const Gate& g : gates)
    if (!g.passed) return false;
  return true;
}

std::string format_double(double v) {
  if (std::isnan(v)) throw std::logic_error("format_double: NaN");
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

ojson sanitize(ojson j) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::isnan(v)) throw std::logic_error("sanitize: NaN in report");
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return j;
  }
  if (j.is_array() || j.is_object())
    for (auto& el : j) el = sanitize(el);
  return j;
}

namespace {

// Compact JSON writer; floats use the shortest round-trip form.
void write(const ojson& j, std::string& out, int indent, int depth) {
  auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case ojson::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += ojson(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        write(it.value(), out, indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case ojson::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& el : j) flat = flat && !el.is_structured();
      out += '[';
      bool first = true;
      for (const auto& el : j) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        write(el, out, indent, depth + 1);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case ojson::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += ojson(format_double(v)).dump();
        return;
      }
      std::string s = format_double(v);
      // keep a float marker so the value reads back as floating point
      if (s.find_first_of(".eE") == std::string::npos) s += ".0";
      out += s;
      return;
    }
    default:
      out += j.dump();
  }
}

std::string csv_cell(const ojson& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + '"';
  }
  if (v.is_null()) return "";
  std::string out;
  write(v, out, -1, 0);
  return out;
}

ojson gates_json(const ExperimentReport& r) {
  ojson g = ojson::array();
  for (const Gate& gate : r.gates)
    g.push_back({{"name", gate.name},
                 {"value", gate.value},
                 {"comparison", gate.comparison},
                 {"threshold", gate.threshold},
                 {"passed", gate.passed}});
  return g;
}

}  // namespace

std::string to_json_string(const ExperimentReport& r) {
  ojson j;
  j["experiment"] = r.experiment;
  j["version"] = software_version();
  j["config"] = r.config;
  j["summary"] = r.summary;
  j["gates"] = gates_json(r);
  j["passed"] = r.passed();
  j["warnings"] = r.warnings;
  j["columns"] = r.columns;
  ojson rows = ojson::array();
  for (const ojson& row : r.rows) rows.push_back(row);
  j["rows"] = std::move(rows);
  std::string out;
  write(j, out, 2, 0);
  out += '\n';
  return out;
}

std::string to_csv(const ExperimentReport& r) {
  std::string out;
  auto comment = [&](const char* key, const ojson& v) {
    std::string s;
    write(v, s, -1, 0);
    out += "# ";
    out += key;
    out += ": ";
    out += s;
    out += '\n';
  };
  comment("experiment", r.experiment);
  comment("version", software_version());
  comment("config", r.config);
  comment("summary", r.summary);
  comment("gates", gates_json(r));
  comment("passed", r.passed());
  if (!r.warnings.empty()) comment("warnings", r.warnings);
  for (std::size_t i = 0; i < r.columns.size(); ++i) {
    if (i) out += ',';
    out += r.columns[i];
  }
  out += '\n';
  for (const ojson& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_cell(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string software_version() {
#ifdef RPZ_VERSION
  return RPZ_VERSION;
#else
  return "unknown";
#endif
}

}  // namespace rpz
