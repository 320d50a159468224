#include "modquad/formats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace modquad {

ParseError::ParseError(std::string source, int line, std::string field, const std::string& message)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) +
                         ": field '" + field + "': " + message),
      line_(line),
      field_(std::move(field)) {}

std::string format_real(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

struct Entry {
  std::string value;
  int line = 0;
};

struct RawRow {
  std::vector<std::string> tokens;
  int line = 0;
};

// Key/value header plus at most one row section.
struct RawFile {
  std::string source;
  std::map<std::string, Entry> keys;
  std::string section;
  int section_line = 0;
  std::vector<RawRow> rows;

  [[noreturn]] void fail(int line, const std::string& field, const std::string& msg) const {
    throw ParseError(source, line, field, msg);
  }

  bool has(const std::string& key) const { return keys.count(key) != 0; }
};

RawFile read_raw(std::istream& in, const std::string& source) {
  RawFile f;
  f.source = source;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string text = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (text.empty()) continue;
    if (!f.section.empty()) {
      f.rows.push_back({split_ws(text), lineno});
      continue;
    }
    const auto eq = text.find('=');
    if (eq != std::string::npos) {
      const std::string key = trim(text.substr(0, eq));
      const std::string value = trim(text.substr(eq + 1));
      if (key.empty()) f.fail(lineno, "<key>", "empty key");
      if (f.keys.count(key)) f.fail(lineno, key, "duplicate key");
      f.keys[key] = {value, lineno};
    } else if (text.back() == ':') {
      f.section = trim(text.substr(0, text.size() - 1));
      f.section_line = lineno;
    } else {
      f.fail(lineno, text, "expected 'key = value' or a 'name:' section header");
    }
  }
  return f;
}

double parse_double(const RawFile& f, const std::string& token, int line,
                    const std::string& field) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (token.empty() || res.ec != std::errc() || res.ptr != last) {
    f.fail(line, field, "malformed number '" + token + "'");
  }
  if (!std::isfinite(v)) f.fail(line, field, "number must be finite");
  return v;
}

long long parse_integer(const RawFile& f, const std::string& token, int line,
                        const std::string& field) {
  long long v = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto res = std::from_chars(first, last, v);
  if (token.empty() || res.ec != std::errc() || res.ptr != last) {
    f.fail(line, field, "malformed integer '" + token + "'");
  }
  return v;
}

// Accepts a plain number or [-]pi[/k].
double parse_angle(const RawFile& f, const std::string& token, int line, const std::string& field) {
  std::string s = token;
  double sign = 1.0;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    if (s.rfind("pi", 1) == 1) {
      sign = s[0] == '-' ? -1.0 : 1.0;
      s = s.substr(1);
    }
  }
  if (s.rfind("pi", 0) == 0) {
    if (s == "pi") return sign * std::numbers::pi;
    if (s.size() > 3 && s[2] == '/') {
      const double div = parse_double(f, s.substr(3), line, field);
      if (div == 0.0) f.fail(line, field, "division by zero in angle");
      return sign * std::numbers::pi / div;
    }
    f.fail(line, field, "malformed angle '" + token + "'");
  }
  return parse_double(f, token, line, field);
}

double required(const RawFile& f, const std::string& key) {
  const auto it = f.keys.find(key);
  if (it == f.keys.end()) f.fail(0, key, "missing required key");
  return parse_double(f, it->second.value, it->second.line, key);
}

double optional(const RawFile& f, const std::string& key, double fallback) {
  const auto it = f.keys.find(key);
  if (it == f.keys.end()) return fallback;
  return parse_double(f, it->second.value, it->second.line, key);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "<file>", "cannot open file");
  return in;
}

const std::vector<std::string> kStructureKeys = {"eta", "side_length", "arm_length", "c_tau",
                                                 "f_max"};
// Present in search results; a result file doubles as a structure file.
const std::vector<std::string> kResultKeys = {"method",       "checker",     "satisfied",
                                              "modules_total", "evaluations", "com_shift",
                                              "n_max"};

template <typename T>
bool contains(const std::vector<T>& v, const T& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

void write_params(std::ostream& out, const ModuleParams& p) {
  out << "eta = " << format_real(p.eta) << '\n'
      << "side_length = " << format_real(p.side_length) << '\n'
      << "arm_length = " << format_real(p.arm_length) << '\n'
      << "c_tau = " << format_real(p.c_tau) << '\n'
      << "f_max = " << format_real(p.f_max) << '\n';
}

void write_vector(std::ostream& out, const Vector6& v) {
  for (int k = 0; k < 6; ++k) out << (k ? " " : "") << format_real(v[k]);
  out << '\n';
}

}  // namespace

StructureFile parse_structure(std::istream& in, const std::string& source) {
  const RawFile f = read_raw(in, source);
  for (const auto& [key, entry] : f.keys) {
    if (!contains(kStructureKeys, key) && !contains(kResultKeys, key)) {
      f.fail(entry.line, key, "unknown key");
    }
  }

  StructureFile out;
  {
    const auto it = f.keys.find("eta");
    if (it == f.keys.end()) f.fail(0, "eta", "missing required key");
    out.params.eta = parse_angle(f, it->second.value, it->second.line, "eta");
  }
  out.params.side_length = required(f, "side_length");
  out.params.f_max = required(f, "f_max");
  out.params.arm_length = optional(f, "arm_length", ModuleParams{}.arm_length);
  out.params.c_tau = optional(f, "c_tau", ModuleParams{}.c_tau);
  try {
    out.params.validate();
  } catch (const ValidationError& e) {
    f.fail(0, "params", e.what());
  }

  if (f.section != "cells") f.fail(f.section_line, "cells", "missing 'cells:' section");
  for (const auto& row : f.rows) {
    if (row.tokens.size() != 2) f.fail(row.line, "cells", "expected 2 integers per row");
    const auto ix = parse_integer(f, row.tokens[0], row.line, "cells");
    const auto iy = parse_integer(f, row.tokens[1], row.line, "cells");
    constexpr long long kLimit = 1'000'000;
    if (std::llabs(ix) > kLimit || std::llabs(iy) > kLimit) {
      f.fail(row.line, "cells", "cell coordinate out of range");
    }
    out.cells.push_back({static_cast<int>(ix), static_cast<int>(iy)});
  }
  return out;
}

StructureFile read_structure_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_structure(in, path.string());
}

void write_structure(std::ostream& out, const StructureConfig& config) {
  out << "# modquad structure\n";
  write_params(out, config.params());
  out << "cells:\n";
  for (const auto& c : config.cells()) out << c.ix << ' ' << c.iy << '\n';
}

TaskRequirement parse_task(std::istream& in, const std::string& source) {
  const RawFile f = read_raw(in, source);
  if (!f.keys.empty()) {
    const auto& [key, entry] = *f.keys.begin();
    f.fail(entry.line, key, "task files take no keys");
  }
  if (f.section != "wrenches") f.fail(f.section_line, "wrenches", "missing 'wrenches:' section");
  TaskRequirement task;
  for (const auto& row : f.rows) {
    if (row.tokens.size() != 6) {
      f.fail(row.line, "wrenches",
             "expected 6 numbers per row, got " + std::to_string(row.tokens.size()));
    }
    Vector6 w;
    for (int k = 0; k < 6; ++k) w[k] = parse_double(f, row.tokens[k], row.line, "wrenches");
    task.wrenches.emplace_back(w);
  }
  return task;
}

TaskRequirement read_task_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_task(in, path.string());
}

void write_task(std::ostream& out, const TaskRequirement& task) {
  out << "# modquad task: fx fy fz tx ty tz\nwrenches:\n";
  for (const auto& w : task.wrenches) write_vector(out, w.stacked());
}

void write_search_result(std::ostream& out, const SearchResult& result, const SearchOptions& opts) {
  out << "# modquad search result\n"
      << "method = " << to_string(opts.method) << '\n'
      << "checker = " << to_string(opts.checker) << '\n'
      << "n_max = " << opts.n_max << '\n'
      << "satisfied = " << (result.satisfied ? "true" : "false") << '\n'
      << "modules_total = " << result.modules_total << '\n'
      << "evaluations = " << result.evaluations << '\n'
      << "com_shift = " << format_real(result.com_shift.x()) << ' '
      << format_real(result.com_shift.y()) << ' ' << format_real(result.com_shift.z()) << '\n';
  write_params(out, result.config.params());
  out << "cells:\n";
  for (const auto& c : result.config.cells()) out << c.ix << ' ' << c.iy << '\n';
}

void write_vertices(std::ostream& out, const WrenchHull& hull, const StructureConfig& config) {
  out << "# modquad wrench hull: fx fy fz tx ty tz per vertex\n"
      << "modules = " << config.module_count() << '\n'
      << "f_max = " << format_real(config.params().f_max) << '\n'
      << "eta = " << format_real(config.params().eta) << '\n'
      << "dimension = " << hull.dimension() << '\n'
      << "vertex_count = " << hull.size() << '\n'
      << "vertices:\n";
  for (const auto& v : sorted_vertices(hull)) write_vector(out, v);
}

VertexFile parse_vertices(std::istream& in, const std::string& source) {
  const RawFile f = read_raw(in, source);
  VertexFile out;
  auto integer = [&](const std::string& key) {
    const auto it = f.keys.find(key);
    if (it == f.keys.end()) f.fail(0, key, "missing required key");
    return parse_integer(f, it->second.value, it->second.line, key);
  };
  out.modules = static_cast<std::size_t>(integer("modules"));
  out.dimension = static_cast<int>(integer("dimension"));
  out.f_max = required(f, "f_max");
  out.eta = required(f, "eta");
  const auto expected = integer("vertex_count");
  if (f.section != "vertices") f.fail(f.section_line, "vertices", "missing 'vertices:' section");
  for (const auto& row : f.rows) {
    if (row.tokens.size() != 6) f.fail(row.line, "vertices", "expected 6 numbers per row");
    Vector6 v;
    for (int k = 0; k < 6; ++k) v[k] = parse_double(f, row.tokens[k], row.line, "vertices");
    out.vertices.push_back(v);
  }
  if (static_cast<long long>(out.vertices.size()) != expected) {
    f.fail(0, "vertex_count", "header says " + std::to_string(expected) + " but file has " +
                                  std::to_string(out.vertices.size()) + " rows");
  }
  return out;
}

void write_allocation_report(std::ostream& out, const AllocationReport& report,
                             AllocationMode mode) {
  out << "# modquad allocation report\n"
      << "mode = " << (mode == AllocationMode::PseudoInverse ? "pseudoinverse" : "feasibility")
      << '\n'
      << "rows = " << report.rows.size() << '\n'
      << "max_error = " << format_real(report.max_error) << '\n'
      << "any_saturated = " << (report.any_saturated ? "true" : "false") << '\n'
      << "# fx fy fz tx ty tz saturated error u_1 .. u_4n\n"
      << "rows:\n";
  for (const auto& row : report.rows) {
    const Vector6 w = row.desired.stacked();
    for (int k = 0; k < 6; ++k) out << format_real(w[k]) << ' ';
    out << (row.saturated ? 1 : 0) << ' ' << format_real(row.error);
    for (Eigen::Index k = 0; k < row.input.size(); ++k) out << ' ' << format_real(row.input[k]);
    out << '\n';
  }
}

}  // namespace modquad
