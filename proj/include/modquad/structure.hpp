#pragma once

#include "modquad/core_types.hpp"

#include <array>
#include <compare>
#include <numbers>
#include <set>
#include <string>
#include <vector>

namespace modquad {

/// Physical parameters shared by every T-module of a homogeneous structure.
struct ModuleParams {
  double eta = std::numbers::pi / 4.0;  // rotor tilt about the arm axis (rad)
  double side_length = 0.4;             // cuboid side l (m)
  double arm_length = 0.14;             // module center to rotor (m)
  double c_tau = 0.01;                  // drag-torque coefficient (N m / N)
  double f_max = 1.0;                   // per-rotor thrust limit (N)

  /// Throws ValidationError naming the first violated constraint.
  void validate() const;

  bool operator==(const ModuleParams&) const = default;
};

/// Lattice coordinates of a docking cell. The cell center sits at
/// (ix * l, iy * l, 0) in meters.
struct GridCell {
  int ix = 0;
  int iy = 0;

  auto operator<=>(const GridCell&) const = default;
};

enum class Direction { PosX, NegX, PosY, NegY };

inline constexpr std::array<Direction, 4> kDirections = {Direction::PosX, Direction::NegX,
                                                        Direction::PosY, Direction::NegY};

GridCell neighbor(GridCell c, Direction d);
Direction opposite(Direction d);
std::string to_string(Direction d);

/// A free face of an occupied cell where a new module can dock.
struct Surface {
  GridCell cell;
  Direction direction;

  GridCell free_cell() const { return neighbor(cell, direction); }
  auto operator<=>(const Surface&) const = default;
};

using CellSet = std::set<GridCell>;

bool is_connected(const CellSet& cells);

/// Cells translated so the minimum coordinates are zero, sorted
/// lexicographically. Two sets share a canonical form iff they are
/// translates of each other.
std::vector<GridCell> canonical_form(const CellSet& cells);

/// A connected, nonempty set of occupied cells plus the module parameters.
class StructureConfig {
 public:
  /// Throws ValidationError for empty or disconnected cell sets, duplicate
  /// cells, or invalid parameters.
  StructureConfig(std::vector<GridCell> cells, ModuleParams params);
  StructureConfig(CellSet cells, ModuleParams params);

  static StructureConfig single(ModuleParams params = {});

  const CellSet& cells() const { return cells_; }
  const ModuleParams& params() const { return params_; }
  std::size_t module_count() const { return cells_.size(); }
  std::vector<GridCell> canonical() const { return canonical_form(cells_); }

  bool contains(GridCell c) const { return cells_.count(c) != 0; }
  StructureConfig with_added(std::initializer_list<GridCell> extra) const;

  bool operator==(const StructureConfig&) const = default;

 private:
  CellSet cells_;
  ModuleParams params_;
};

struct RotorSpec {
  Vec3 position = Vec3::Zero();  // relative to the structure COM, z = 0
  RotationMatrix orientation;
  int spin_sign = 1;             // +1 or -1

  /// Unit thrust direction R e3.
  Vec3 thrust_direction() const { return orientation * e3(); }
};

struct RotorConfiguration {
  std::vector<RotorSpec> rotors;

  std::size_t size() const { return rotors.size(); }
};

/// 6 x 4n map from rotor thrusts to body wrench; columns in rotor order.
struct ConfigurationMatrix {
  Matrix6X entries;

  Eigen::Index columns() const { return entries.cols(); }
  Vector6 column(Eigen::Index k) const { return entries.col(k); }
  Vector6 apply(const Eigen::VectorXd& u) const { return entries * u; }
};

/// Unit diagonal arm directions d_1..d_4 in module-local order.
const std::array<Vec3, 4>& arm_directions();

/// Four rotors of one T-module in module-local coordinates. Rotor j sits at
/// arm_length * d_j and is tilted by eta_j about d_j, with
/// eta_1 = eta_3 = eta, eta_2 = eta_4 = -eta, spin signs (+, -, +, -).
std::array<RotorSpec, 4> module_rotor_layout(const ModuleParams& params);

/// Variant with explicit per-rotor tilts; used to build non-T-module
/// mutants for torque-balance tests.
std::array<RotorSpec, 4> module_rotor_layout(const ModuleParams& params,
                                             const std::array<double, 4>& tilts);

Vec3 cell_center(GridCell c, double side_length);
Vec3 center_of_mass(const StructureConfig& config);
Vec3 center_of_mass(const CellSet& cells, double side_length);

/// Rotors of every module in canonical cell order, positions relative to
/// the COM. All module frames share the structure orientation.
RotorConfiguration rotor_configuration(const StructureConfig& config);

ConfigurationMatrix build_configuration_matrix(const RotorConfiguration& rotors, double c_tau);

/// Shorthand for build_configuration_matrix(rotor_configuration(config), c_tau).
ConfigurationMatrix configuration_matrix(const StructureConfig& config);

/// True iff the torque rows of A * 1 have norm <= tol.
bool is_torque_balanced(const ConfigurationMatrix& a, double tol = 1e-10);

/// Every (cell, direction) whose neighbor is free, sorted by cell then
/// direction order (+x, -x, +y, -y).
std::vector<Surface> attachable_surfaces(const StructureConfig& config);
std::vector<Surface> attachable_surfaces(const CellSet& cells);

/// Numeric rank with an absolute singular-value threshold.
Eigen::Index numeric_rank(const Matrix6X& m, double threshold = 1e-9);

}  // namespace modquad
