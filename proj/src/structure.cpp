#include "modquad/structure.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace modquad {

void ModuleParams::validate() const {
  auto fail = [](const std::string& what) { throw ValidationError("invalid module params: " + what); };
  if (!std::isfinite(eta) || !std::isfinite(side_length) || !std::isfinite(arm_length) ||
      !std::isfinite(c_tau) || !std::isfinite(f_max)) {
    fail("all parameters must be finite");
  }
  if (side_length <= 0.0) fail("side_length must be positive");
  if (arm_length <= 0.0) fail("arm_length must be positive");
  if (arm_length * std::numbers::sqrt2 >= side_length) {
    fail("arm_length * sqrt(2) must be smaller than side_length");
  }
  if (f_max <= 0.0) fail("f_max must be positive");
  if (c_tau < 0.0) fail("c_tau must be non-negative");
  if (std::abs(eta) >= std::numbers::pi / 2.0) fail("|eta| must be below pi/2");
}

GridCell neighbor(GridCell c, Direction d) {
  switch (d) {
    case Direction::PosX: return {c.ix + 1, c.iy};
    case Direction::NegX: return {c.ix - 1, c.iy};
    case Direction::PosY: return {c.ix, c.iy + 1};
    case Direction::NegY: return {c.ix, c.iy - 1};
  }
  return c;
}

Direction opposite(Direction d) {
  switch (d) {
    case Direction::PosX: return Direction::NegX;
    case Direction::NegX: return Direction::PosX;
    case Direction::PosY: return Direction::NegY;
    case Direction::NegY: return Direction::PosY;
  }
  return d;
}

std::string to_string(Direction d) {
  switch (d) {
    case Direction::PosX: return "+x";
    case Direction::NegX: return "-x";
    case Direction::PosY: return "+y";
    case Direction::NegY: return "-y";
  }
  return "?";
}

bool is_connected(const CellSet& cells) {
  if (cells.empty()) return false;
  CellSet seen{*cells.begin()};
  std::deque<GridCell> frontier{*cells.begin()};
  while (!frontier.empty()) {
    const GridCell c = frontier.front();
    frontier.pop_front();
    for (Direction d : kDirections) {
      const GridCell n = neighbor(c, d);
      if (cells.count(n) && seen.insert(n).second) frontier.push_back(n);
    }
  }
  return seen.size() == cells.size();
}

std::vector<GridCell> canonical_form(const CellSet& cells) {
  if (cells.empty()) return {};
  int min_x = std::numeric_limits<int>::max();
  int min_y = std::numeric_limits<int>::max();
  for (const auto& c : cells) {
    min_x = std::min(min_x, c.ix);
    min_y = std::min(min_y, c.iy);
  }
  std::vector<GridCell> out;
  out.reserve(cells.size());
  for (const auto& c : cells) out.push_back({c.ix - min_x, c.iy - min_y});
  std::sort(out.begin(), out.end());
  return out;
}

StructureConfig::StructureConfig(std::vector<GridCell> cells, ModuleParams params)
    : params_(params) {
  for (const auto& c : cells) {
    if (!cells_.insert(c).second) {
      throw ValidationError("duplicate cell (" + std::to_string(c.ix) + ", " +
                            std::to_string(c.iy) + ")");
    }
  }
  params_.validate();
  if (cells_.empty()) throw ValidationError("structure has no modules");
  if (!is_connected(cells_)) throw ValidationError("structure cells are not 4-connected");
}

StructureConfig::StructureConfig(CellSet cells, ModuleParams params)
    : cells_(std::move(cells)), params_(params) {
  params_.validate();
  if (cells_.empty()) throw ValidationError("structure has no modules");
  if (!is_connected(cells_)) throw ValidationError("structure cells are not 4-connected");
}

StructureConfig StructureConfig::single(ModuleParams params) {
  return StructureConfig(CellSet{GridCell{0, 0}}, params);
}

StructureConfig StructureConfig::with_added(std::initializer_list<GridCell> extra) const {
  std::vector<GridCell> all(cells_.begin(), cells_.end());
  all.insert(all.end(), extra.begin(), extra.end());
  return StructureConfig(std::move(all), params_);
}

const std::array<Vec3, 4>& arm_directions() {
  static const std::array<Vec3, 4> dirs = [] {
    const double h = 1.0 / std::numbers::sqrt2;
    return std::array<Vec3, 4>{Vec3(h, h, 0.0), Vec3(-h, h, 0.0), Vec3(-h, -h, 0.0),
                               Vec3(h, -h, 0.0)};
  }();
  return dirs;
}

std::array<RotorSpec, 4> module_rotor_layout(const ModuleParams& params,
                                             const std::array<double, 4>& tilts) {
  params.validate();
  std::array<RotorSpec, 4> rotors;
  const auto& dirs = arm_directions();
  for (std::size_t j = 0; j < 4; ++j) {
    rotors[j].position = params.arm_length * dirs[j];
    rotors[j].orientation = rotation_about_axis(dirs[j], tilts[j]);
    rotors[j].spin_sign = (j % 2 == 0) ? 1 : -1;
  }
  return rotors;
}

std::array<RotorSpec, 4> module_rotor_layout(const ModuleParams& params) {
  return module_rotor_layout(params, {params.eta, -params.eta, params.eta, -params.eta});
}

Vec3 cell_center(GridCell c, double side_length) {
  return Vec3(c.ix * side_length, c.iy * side_length, 0.0);
}

Vec3 center_of_mass(const CellSet& cells, double side_length) {
  if (cells.empty()) throw ValidationError("center of mass of an empty cell set");
  // Integer sums keep the centroid exact up to one final division.
  long long sx = 0;
  long long sy = 0;
  for (const auto& c : cells) {
    sx += c.ix;
    sy += c.iy;
  }
  const double n = static_cast<double>(cells.size());
  return Vec3(static_cast<double>(sx) * side_length / n, static_cast<double>(sy) * side_length / n,
              0.0);
}

Vec3 center_of_mass(const StructureConfig& config) {
  return center_of_mass(config.cells(), config.params().side_length);
}

RotorConfiguration rotor_configuration(const StructureConfig& config) {
  const auto& params = config.params();
  const auto layout = module_rotor_layout(params);
  const Vec3 com = center_of_mass(config);

  RotorConfiguration out;
  out.rotors.reserve(4 * config.module_count());
  // std::set iterates in lexicographic order, which is the canonical order.
  for (const auto& cell : config.cells()) {
    const Vec3 offset = cell_center(cell, params.side_length) - com;
    for (const auto& r : layout) {
      RotorSpec spec = r;
      spec.position += offset;
      spec.position.z() = 0.0;
      out.rotors.push_back(spec);
    }
  }
  return out;
}

ConfigurationMatrix build_configuration_matrix(const RotorConfiguration& rotors, double c_tau) {
  ConfigurationMatrix a;
  a.entries.resize(6, static_cast<Eigen::Index>(rotors.size()));
  for (std::size_t k = 0; k < rotors.size(); ++k) {
    const auto& r = rotors.rotors[k];
    const Vec3 thrust = r.thrust_direction();
    const Vec3 torque = cross(r.position, thrust) + r.spin_sign * c_tau * thrust;
    a.entries.col(static_cast<Eigen::Index>(k)) << thrust, torque;
  }
  return a;
}

ConfigurationMatrix configuration_matrix(const StructureConfig& config) {
  return build_configuration_matrix(rotor_configuration(config), config.params().c_tau);
}

bool is_torque_balanced(const ConfigurationMatrix& a, double tol) {
  const Vector6 w = a.entries.rowwise().sum();
  return w.tail<3>().norm() <= tol;
}

std::vector<Surface> attachable_surfaces(const CellSet& cells) {
  std::vector<Surface> out;
  for (const auto& c : cells) {
    for (Direction d : kDirections) {
      if (!cells.count(neighbor(c, d))) out.push_back({c, d});
    }
  }
  return out;
}

std::vector<Surface> attachable_surfaces(const StructureConfig& config) {
  return attachable_surfaces(config.cells());
}

Eigen::Index numeric_rank(const Matrix6X& m, double threshold) {
  if (m.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > threshold) ++r;
  }
  return r;
}

}  // namespace modquad
