#include "modquad/structure.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace modquad;

namespace {

constexpr double kPi = std::numbers::pi;

bool near(const Vec3& a, const Vec3& b, double tol = 1e-12) { return (a - b).norm() <= tol; }

ModuleParams params_eta(double eta) {
  ModuleParams p;
  p.eta = eta;
  return p;
}

StructureConfig make(std::vector<GridCell> cells, ModuleParams p = {}) {
  return StructureConfig(std::move(cells), p);
}

oracle::Shape shape_of(const StructureConfig& c) {
  std::set<oracle::Cell> s;
  for (auto g : c.cells()) s.insert({g.ix, g.iy});
  return oracle::normalize(s);
}

}  // namespace

TEST_CASE("ModuleParams validation") {
  CHECK_NOTHROW(ModuleParams{}.validate());
  ModuleParams p;
  p.arm_length = 0.3;  // 0.3 * sqrt 2 > 0.4
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = {};
  p.f_max = 0.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = {};
  p.c_tau = -0.1;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = {};
  p.eta = kPi / 2;
  CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("module_rotor_layout") {
  SUBCASE("untilted module degenerates to a flat quadrotor") {
    for (const auto& r : module_rotor_layout(params_eta(0.0))) {
      CHECK(r.orientation.matrix().isApprox(Eigen::Matrix3d::Identity(), 0.0));
    }
  }
  SUBCASE("eta = pi/4 thrust directions") {
    const auto rotors = module_rotor_layout(params_eta(kPi / 4));
    const double h = 1.0 / std::sqrt(2.0);
    const Vec3 d1(h, h, 0), d2(-h, h, 0);
    CHECK(near(rotors[0].thrust_direction(), oracle::tilted_thrust(d1, kPi / 4)));
    CHECK(near(rotors[0].thrust_direction(), Vec3(0.5, -0.5, std::sqrt(2.0) / 2)));
    CHECK(near(rotors[1].thrust_direction(), oracle::tilted_thrust(d2, -kPi / 4)));
    CHECK(near(rotors[1].thrust_direction(), Vec3(-0.5, -0.5, std::sqrt(2.0) / 2)));
  }
  SUBCASE("positions and spins") {
    const ModuleParams p;
    const auto rotors = module_rotor_layout(p);
    const int spins[4] = {1, -1, 1, -1};
    for (int j = 0; j < 4; ++j) {
      CHECK(near(rotors[j].position, p.arm_length * arm_directions()[j]));
      CHECK(rotors[j].spin_sign == spins[j]);
    }
  }
}

TEST_CASE("center_of_mass") {
  const double l = 0.4;
  CHECK(near(center_of_mass(make({{0, 0}})), Vec3::Zero()));
  CHECK(near(center_of_mass(make({{0, 0}, {1, 0}})), Vec3(0.2, 0, 0)));
  CHECK(near(center_of_mass(make({{0, 0}, {1, 0}, {0, 1}, {1, 1}})), Vec3(0.2, 0.2, 0)));
  CHECK_THROWS_AS(center_of_mass(CellSet{}, l), ValidationError);
}

TEST_CASE("StructureConfig rejects empty, duplicate and disconnected cell sets") {
  CHECK_THROWS_AS(make({}), ValidationError);
  CHECK_THROWS_AS(make({{0, 0}, {0, 0}}), ValidationError);
  CHECK_THROWS_AS(make({{0, 0}, {2, 0}}), ValidationError);
}

TEST_CASE("rotor_configuration") {
  const ModuleParams p;
  SUBCASE("single module: rotors at arm_length * d_j") {
    const auto rc = rotor_configuration(make({{0, 0}}));
    REQUIRE(rc.size() == 4);
    for (int j = 0; j < 4; ++j) {
      CHECK(near(rc.rotors[j].position, p.arm_length * arm_directions()[j]));
      CHECK(rc.rotors[j].position.z() == 0.0);
    }
  }
  SUBCASE("two modules: first cell shifted by half a cell") {
    const auto rc = rotor_configuration(make({{0, 0}, {1, 0}}));
    REQUIRE(rc.size() == 8);
    for (int j = 0; j < 4; ++j) {
      CHECK(near(rc.rotors[j].position, p.arm_length * arm_directions()[j] + Vec3(-0.2, 0, 0)));
    }
  }
  SUBCASE("property: rotor positions average to the COM") {
    for (int n = 1; n <= 5; ++n) {
      for (const auto& shape : oracle::fixed_polyominoes(n)) {
        std::vector<GridCell> cells;
        for (auto [x, y] : shape) cells.push_back({x, y});
        const auto rc = rotor_configuration(make(cells));
        Vec3 mean = Vec3::Zero();
        for (const auto& r : rc.rotors) mean += r.position;
        CHECK(near(mean / rc.size(), Vec3::Zero(), 1e-14));
      }
    }
  }
}

TEST_CASE("build_configuration_matrix column formula") {
  RotorConfiguration rc;
  rc.rotors.push_back({Vec3(1, 0, 0), RotationMatrix::identity(), 1});
  rc.rotors.push_back({Vec3(0, 0, 0), RotationMatrix::identity(), -1});
  const auto a = build_configuration_matrix(rc, 0.01);
  Vector6 c0, c1;
  c0 << 0, 0, 1, 0, -1, 0.01;
  c1 << 0, 0, 1, 0, 0, -0.01;
  CHECK((a.column(0) - c0).norm() <= 1e-15);
  CHECK((a.column(1) - c1).norm() <= 1e-15);
}

TEST_CASE("configuration matrix agrees with the closed-form oracle") {
  std::mt19937_64 rng(3);
  for (int n = 1; n <= 4; ++n) {
    for (const auto& shape : oracle::fixed_polyominoes(n)) {
      ModuleParams p;
      p.eta = oracle::uniform(rng, -1.2, 1.2);
      p.c_tau = oracle::uniform(rng, 0.0, 0.05);
      std::vector<GridCell> cells;
      for (auto [x, y] : shape) cells.push_back({x, y});
      const auto a = configuration_matrix(make(cells, p));
      const auto expected =
          oracle::t_module_matrix(shape, p.eta, p.side_length, p.arm_length, p.c_tau);
      CHECK((a.entries - expected).cwiseAbs().maxCoeff() <= 1e-14);
    }
  }
}

TEST_CASE("single T-module at pi/4: torque half-columns cancel") {
  const auto a = configuration_matrix(StructureConfig::single(params_eta(kPi / 4)));
  const Vec3 torque_sum = a.entries.bottomRows<3>().rowwise().sum();
  CHECK(torque_sum.norm() <= 1e-15);
}

TEST_CASE("force part of every column has z-component cos(eta) and unit norm") {
  for (double eta : {0.0, 0.3, kPi / 4, -1.0}) {
    const auto a = configuration_matrix(make({{0, 0}, {1, 0}, {1, 1}}, params_eta(eta)));
    for (Eigen::Index k = 0; k < a.columns(); ++k) {
      CHECK(std::abs(a.entries(2, k) - std::cos(eta)) <= 1e-12);
      CHECK(std::abs(a.entries.col(k).head<3>().norm() - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("single T-module at pi/4 has rank 4") {
  const auto a = configuration_matrix(StructureConfig::single(params_eta(kPi / 4)));
  // independent rank: full-pivoting LU with the same threshold
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a.entries);
  lu.setThreshold(1e-9);
  CHECK(lu.rank() == 4);
  CHECK(numeric_rank(a.entries) == 4);
}

TEST_CASE("property: translating all cells leaves A unchanged") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> shift(-20, 20);
  for (const auto& shape : oracle::fixed_polyominoes(4)) {
    std::vector<GridCell> cells, moved;
    const int dx = shift(rng), dy = shift(rng);
    for (auto [x, y] : shape) {
      cells.push_back({x, y});
      moved.push_back({x + dx, y + dy});
    }
    const auto a = configuration_matrix(make(cells));
    const auto b = configuration_matrix(make(moved));
    CHECK((a.entries - b.entries).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("is_torque_balanced") {
  const auto oracle_balanced = [](const Eigen::Matrix<double, 6, Eigen::Dynamic>& a) {
    Eigen::Vector3d t = Eigen::Vector3d::Zero();
    for (Eigen::Index k = 0; k < a.cols(); ++k) t += a.col(k).tail<3>();
    return t.norm() <= 1e-10;
  };
  SUBCASE("single module, any eta") {
    for (double eta : {0.0, 0.2, kPi / 4, 1.3, -0.7}) {
      const auto a = configuration_matrix(StructureConfig::single(params_eta(eta)));
      CHECK(is_torque_balanced(a));
    }
  }
  SUBCASE("2x2 block") {
    const oracle::Shape block{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    const auto expected = oracle::t_module_matrix(block, kPi / 4, 0.4, 0.14, 0.01);
    CHECK(oracle_balanced(expected));
    CHECK(is_torque_balanced(configuration_matrix(make({{0, 0}, {1, 0}, {0, 1}, {1, 1}}))));
  }
  SUBCASE("all rotors tilted the same way is not balanced") {
    const ModuleParams p = params_eta(kPi / 4);
    const auto layout = module_rotor_layout(p, {p.eta, p.eta, p.eta, p.eta});
    RotorConfiguration rc{{layout.begin(), layout.end()}};
    const auto a = build_configuration_matrix(rc, p.c_tau);
    const auto expected = oracle::t_module_matrix({{0, 0}}, kPi / 4, 0.4, 0.14, 0.01, {1, 1, 1, 1});
    CHECK((a.entries - expected).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK_FALSE(oracle_balanced(expected));
    CHECK_FALSE(is_torque_balanced(a));
    // the arm terms leave a yaw torque of -4 * arm * sin(eta)
    const Vec3 t = a.entries.bottomRows<3>().rowwise().sum();
    CHECK(std::abs(t.z() + 4.0 * p.arm_length * std::sin(p.eta)) <= 1e-14);
  }
}

TEST_CASE("attachable_surfaces") {
  CHECK(attachable_surfaces(make({{0, 0}})).size() == 4);
  CHECK(attachable_surfaces(make({{0, 0}, {1, 0}})).size() == 6);
  CHECK(attachable_surfaces(make({{0, 0}, {1, 0}, {0, 1}, {1, 1}})).size() == 8);
  for (const auto& s : attachable_surfaces(make({{0, 0}, {1, 0}, {1, 1}}))) {
    CHECK_FALSE(make({{0, 0}, {1, 0}, {1, 1}}).contains(s.free_cell()));
  }
  const auto surfaces = attachable_surfaces(make({{0, 0}, {1, 0}}));
  CHECK(std::is_sorted(surfaces.begin(), surfaces.end()));
}

TEST_CASE("is_connected") {
  CHECK(is_connected({{0, 0}, {1, 0}}));
  CHECK_FALSE(is_connected({{0, 0}, {2, 0}}));
  CHECK_FALSE(is_connected({{0, 0}, {1, 1}}));
  CHECK_FALSE(is_connected({}));
}

TEST_CASE("canonical_form") {
  CHECK(canonical_form({{5, 5}, {6, 5}}) == std::vector<GridCell>{{0, 0}, {1, 0}});
  CHECK(canonical_form({{0, 0}, {1, 0}}) == canonical_form({{3, -2}, {4, -2}}));
  CHECK(canonical_form({{0, 0}, {0, 1}}) != canonical_form({{0, 0}, {1, 0}}));
}

TEST_CASE("property: canonical forms match the oracle's translation classes") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> shift(-50, 50);
  for (const auto& shape : oracle::fixed_polyominoes(5)) {
    CellSet cells;
    const int dx = shift(rng), dy = shift(rng);
    for (auto [x, y] : shape) cells.insert({x + dx, y + dy});
    const auto canon = canonical_form(cells);
    REQUIRE(canon.size() == shape.size());
    for (std::size_t i = 0; i < canon.size(); ++i) {
      CHECK(canon[i].ix == shape[i].first);
      CHECK(canon[i].iy == shape[i].second);
    }
    CHECK(shape_of(StructureConfig(cells, {})) == shape);
  }
}
