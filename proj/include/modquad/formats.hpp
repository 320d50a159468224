#pragma once

#include "modquad/allocation.hpp"
#include "modquad/config_search.hpp"
#include "modquad/lp_check.hpp"
#include "modquad/structure.hpp"
#include "modquad/wrench_hull.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

// Plain-text file formats. Every file is line oriented: '#' starts a
// comment, `key = value` lines carry scalars, and a `name:` line opens a
// row list that runs to the end of the file.
//
//   structure:  eta, side_length, f_max (required), arm_length, c_tau
//               (optional), then `cells:` with one "ix iy" row per module.
//               eta also accepts "pi", "pi/4", "-pi/6" etc.
//   task:       `wrenches:` followed by "fx fy fz tx ty tz" rows.
//   result:     search summary keys followed by a complete structure.
//   vertices:   hull metadata keys, then `vertices:` with 6-vector rows.
namespace modquad {

/// A malformed file. Carries the 1-based line (0 when not line specific)
/// and the offending field name.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string source, int line, std::string field, const std::string& message);

  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

/// Parameters and raw cells as read from disk, before connectivity checks.
struct StructureFile {
  ModuleParams params;
  std::vector<GridCell> cells;

  /// Throws ValidationError when the cells do not form a valid structure.
  StructureConfig to_config() const { return StructureConfig(cells, params); }
};

/// Shortest decimal that round-trips to the same double.
std::string format_real(double v);

StructureFile parse_structure(std::istream& in, const std::string& source = "<structure>");
StructureFile read_structure_file(const std::filesystem::path& path);
void write_structure(std::ostream& out, const StructureConfig& config);

TaskRequirement parse_task(std::istream& in, const std::string& source = "<task>");
TaskRequirement read_task_file(const std::filesystem::path& path);
void write_task(std::ostream& out, const TaskRequirement& task);

void write_search_result(std::ostream& out, const SearchResult& result, const SearchOptions& opts);

struct VertexFile {
  std::size_t modules = 0;
  double f_max = 0.0;
  double eta = 0.0;
  int dimension = 0;
  std::vector<Vector6> vertices;
};

void write_vertices(std::ostream& out, const WrenchHull& hull, const StructureConfig& config);
VertexFile parse_vertices(std::istream& in, const std::string& source = "<vertices>");

void write_allocation_report(std::ostream& out, const AllocationReport& report,
                             AllocationMode mode);

}  // namespace modquad
