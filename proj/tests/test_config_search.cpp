#include "modquad/config_search.hpp"
#include "modquad/lp_check.hpp"
#include "modquad/structure.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

using namespace modquad;

namespace {

oracle::Shape shape_of(const StructureConfig& c) {
  std::set<oracle::Cell> cells;
  for (const auto& g : c.cells()) cells.emplace(g.ix, g.iy);
  return oracle::normalize(cells);
}

oracle::Shape shape_of(std::initializer_list<oracle::Cell> cells) {
  return oracle::normalize(std::set<oracle::Cell>(cells));
}

std::set<oracle::Shape> shapes(const std::vector<StructureConfig>& configs) {
  std::set<oracle::Shape> out;
  for (const auto& c : configs) out.insert(shape_of(c));
  return out;
}

// Children of a cell set computed from raw neighbor coordinates.
std::set<oracle::Shape> children_oracle(const std::set<oracle::Cell>& cells) {
  std::set<oracle::Shape> out;
  for (auto [x, y] : cells) {
    for (auto [dx, dy] : {oracle::Cell{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
      const oracle::Cell n{x + dx, y + dy};
      if (cells.count(n)) continue;
      auto grown = cells;
      grown.insert(n);
      out.insert(oracle::normalize(grown));
    }
  }
  return out;
}

TaskRequirement lift(double fz) { return TaskRequirement{{Wrench(0, 0, fz, 0, 0, 0)}}; }

SearchOptions options(SearchMethod m, int n_max, unsigned threads = 1) {
  SearchOptions o;
  o.method = m;
  o.n_max = n_max;
  o.threads = threads;
  return o;
}

// Smallest module count whose vertical capacity 4 m cos(eta) f_max reaches fz.
std::size_t modules_for_lift(double fz, double eta = std::numbers::pi / 4) {
  return static_cast<std::size_t>(std::ceil(fz / (4.0 * std::cos(eta))));
}

}  // namespace

TEST_CASE("expand_one: single module gives the two dominoes") {
  const auto children = expand_one(StructureConfig::single());
  CHECK(children.size() == 2);
  CHECK(shapes(children) == std::set<oracle::Shape>{shape_of({{0, 0}, {1, 0}}), shape_of({{0, 0}, {0, 1}})});
}

TEST_CASE("expand_one: domino children match the canonicalized oracle") {
  const StructureConfig domino(std::vector<GridCell>{{0, 0}, {1, 0}}, ModuleParams{});
  const auto children = expand_one(domino);
  const auto expected = children_oracle({{0, 0}, {1, 0}});
  CHECK(expected.size() == 5);
  CHECK(children.size() == expected.size());
  CHECK(shapes(children) == expected);
  for (const auto& c : children) {
    CHECK(c.module_count() == 3);
    CHECK(c.contains({0, 0}));
    CHECK(c.contains({1, 0}));
  }
  for (std::size_t i = 1; i < children.size(); ++i) CHECK(children[i - 1].canonical() < children[i].canonical());
}

TEST_CASE("expand_one: a ring gains its hole") {
  std::vector<GridCell> ring;
  for (int x = 0; x < 3; ++x) {
    for (int y = 0; y < 3; ++y) {
      if (x != 1 || y != 1) ring.push_back({x, y});
    }
  }
  const auto children = expand_one(StructureConfig(ring, ModuleParams{}));
  bool filled = false;
  for (const auto& c : children) filled = filled || c.contains({1, 1});
  CHECK(filled);
}

TEST_CASE("property: expand_one matches the oracle on random polyominoes") {
  std::mt19937_64 rng(41);
  for (int n = 1; n <= 5; ++n) {
    for (const auto& s : oracle::fixed_polyominoes(n)) {
      if (oracle::uniform(rng, 0, 1) > 0.4) continue;
      std::vector<GridCell> cells;
      for (auto [x, y] : s) cells.push_back({x, y});
      const auto children = expand_one(StructureConfig(cells, ModuleParams{}));
      CHECK(shapes(children) == children_oracle(std::set<oracle::Cell>(s.begin(), s.end())));
      for (const auto& c : children) CHECK(is_connected(c.cells()));
    }
  }
}

TEST_CASE("exhaustive_search: zero task returns the initial design") {
  const auto r = exhaustive_search(StructureConfig::single(), TaskRequirement{{Wrench{}}},
                                   options(SearchMethod::Exhaustive, 7));
  CHECK(r.satisfied);
  CHECK(r.evaluations == 1);
  CHECK(r.modules_total == 1);
  CHECK(r.config == StructureConfig::single());
  CHECK(r.com_shift.norm() == 0.0);
}

TEST_CASE("exhaustive_search: lift of 3 needs two modules") {
  const auto r = exhaustive_search(StructureConfig::single(), lift(3.0), options(SearchMethod::Exhaustive, 7));
  CHECK(r.satisfied);
  CHECK(r.modules_total == 2);
  CHECK(r.modules_total == r.config.cells().size());
  // evaluated: the seed, then the first domino in canonical order
  CHECK(r.evaluations == 2);
  CHECK(satisfies_task(configuration_matrix(r.config), lift(3.0), 1.0).satisfied);
}

TEST_CASE("exhaustive_search: unreachable wrench exhausts every polyomino") {
  const int n_max = 4;
  // no design with 5 modules lifts more than 20 * f_max
  const auto r = exhaustive_search(StructureConfig::single(), lift((1 + n_max) * 4.0 + 1.0),
                                   options(SearchMethod::Exhaustive, n_max));
  CHECK_FALSE(r.satisfied);
  std::size_t polyominoes = 0;
  for (int m = 1; m <= 1 + n_max; ++m) polyominoes += oracle::fixed_polyominoes(m).size();
  CHECK(polyominoes == 1 + 2 + 6 + 19 + 63);
  CHECK(r.evaluations == polyominoes);
  CHECK(r.config == StructureConfig::single());
}

TEST_CASE("exhaustive_search: n_max = 0 only evaluates the seed") {
  const auto r = exhaustive_search(StructureConfig::single(), lift(3.0), options(SearchMethod::Exhaustive, 0));
  CHECK_FALSE(r.satisfied);
  CHECK(r.evaluations == 1);
}

TEST_CASE("property: exhaustive module count matches the lift-capacity oracle") {
  for (double fz : {1.0, 2.5, 3.0, 5.0, 6.0, 8.0, 11.0}) {
    CAPTURE(fz);
    const auto r = exhaustive_search(StructureConfig::single(), lift(fz), options(SearchMethod::Exhaustive, 4));
    REQUIRE(r.satisfied);
    CHECK(r.modules_total == modules_for_lift(fz));
    CHECK(is_connected(r.config.cells()));
    CHECK(is_torque_balanced(configuration_matrix(r.config)));
  }
}

TEST_CASE("exhaustive_search: initial design cells are kept") {
  const StructureConfig bar(std::vector<GridCell>{{5, 5}, {6, 5}}, ModuleParams{});
  const auto r = exhaustive_search(bar, lift(7.0), options(SearchMethod::Exhaustive, 3));
  REQUIRE(r.satisfied);
  CHECK(r.modules_total == 3);
  CHECK(r.config.contains({5, 5}));
  CHECK(r.config.contains({6, 5}));
  const Vec3 shift = center_of_mass(r.config) - center_of_mass(bar);
  CHECK((r.com_shift - shift).norm() <= 1e-12);
}

TEST_CASE("generate_config_symmetry: single module gives the two 3-bars") {
  const auto levels = generate_config_symmetry(StructureConfig::single(), 1);
  REQUIRE(levels.size() == 1);
  CHECK(shapes(levels[0]) ==
        std::set<oracle::Shape>{shape_of({{0, 0}, {1, 0}, {2, 0}}), shape_of({{0, 0}, {0, 1}, {0, 2}})});
}

TEST_CASE("generate_config_symmetry: the 3-bar grows into the 5-bar") {
  const StructureConfig bar(std::vector<GridCell>{{-1, 0}, {0, 0}, {1, 0}}, ModuleParams{});
  const auto levels = generate_config_symmetry(bar, 1);
  REQUIRE(levels.size() == 1);
  CHECK(shapes(levels[0]).count(shape_of({{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}})) == 1);
}

TEST_CASE("property: symmetric levels keep the COM and the symmetry") {
  const auto seed = StructureConfig::single();
  const Vec3 com = center_of_mass(seed);
  const auto levels = generate_config_symmetry(seed, 3);
  REQUIRE(levels.size() == 3);
  for (std::size_t k = 0; k < levels.size(); ++k) {
    CHECK_FALSE(levels[k].empty());
    std::set<std::vector<GridCell>> seen;
    for (const auto& d : levels[k]) {
      CHECK(d.module_count() == 1 + 2 * (k + 1));
      CHECK((center_of_mass(d) - com).norm() <= 1e-12);
      CHECK(is_centrosymmetric(d.cells()));
      CHECK(is_connected(d.cells()));
      CHECK(seen.insert(d.canonical()).second);
    }
  }
}

TEST_CASE("generate_config_symmetry rejects asymmetric seeds") {
  const StructureConfig ell(std::vector<GridCell>{{0, 0}, {1, 0}, {0, 1}}, ModuleParams{});
  CHECK_FALSE(is_centrosymmetric(ell.cells()));
  CHECK_THROWS_AS(generate_config_symmetry(ell, 1), InvalidSeedError);
  CHECK(is_centrosymmetric(StructureConfig(std::vector<GridCell>{{0, 0}, {1, 0}}, ModuleParams{}).cells()));
  CHECK(is_centrosymmetric(StructureConfig(std::vector<GridCell>{{0, 0}, {1, 0}, {1, 1}, {2, 1}}, ModuleParams{})
                               .cells()));
}

TEST_CASE("heuristic_search examples") {
  const auto zero = heuristic_search(StructureConfig::single(), TaskRequirement{{Wrench{}}},
                                     options(SearchMethod::Heuristic, 7));
  CHECK(zero.satisfied);
  CHECK(zero.evaluations == 1);
  CHECK(zero.modules_total == 1);

  const auto r = heuristic_search(StructureConfig::single(), lift(3.0), options(SearchMethod::Heuristic, 7));
  CHECK(r.satisfied);
  CHECK(r.modules_total == 3);
  CHECK(r.com_shift.norm() == 0.0);
  // 3 bars lift 12 cos(eta) = 6 sqrt 2
  CHECK(std::abs(max_force_zero_torque(configuration_matrix(r.config), Vec3::UnitZ(), 1.0) -
                 6.0 * std::sqrt(2.0)) <= 1e-9);

  const StructureConfig ell(std::vector<GridCell>{{0, 0}, {1, 0}, {0, 1}}, ModuleParams{});
  CHECK_THROWS_AS(heuristic_search(ell, lift(3.0), options(SearchMethod::Heuristic, 7)), InvalidSeedError);
}

TEST_CASE("heuristic_search budget: two modules per level") {
  const auto one = heuristic_search(StructureConfig::single(), lift(3.0), options(SearchMethod::Heuristic, 1));
  CHECK_FALSE(one.satisfied);
  CHECK(one.evaluations == 1);
  const auto two = heuristic_search(StructureConfig::single(), lift(3.0), options(SearchMethod::Heuristic, 2));
  CHECK(two.satisfied);
}

TEST_CASE("property: exhaustive never needs more modules than the heuristic") {
  // Straight bars have rank-5 matrices, so the seeds include shapes whose
  // symmetric successors reach full rank within the budget.
  const std::vector<StructureConfig> seeds{
      StructureConfig::single(), StructureConfig(std::vector<GridCell>{{0, 0}, {1, 0}}, ModuleParams{}),
      StructureConfig(std::vector<GridCell>{{0, 0}, {1, 0}, {0, 1}, {1, 1}}, ModuleParams{})};
  std::mt19937_64 rng(77);
  int both = 0;
  for (int trial = 0; trial < 12; ++trial) {
    TaskRequirement task;
    for (int i = 0; i < 6; ++i) {
      task.wrenches.emplace_back(oracle::uniform(rng, -0.3, 0.3), oracle::uniform(rng, -0.3, 0.3),
                                 oracle::uniform(rng, 0.5, 8.0), oracle::uniform(rng, -0.1, 0.1),
                                 oracle::uniform(rng, -0.1, 0.1), oracle::uniform(rng, -0.05, 0.05));
    }
    const auto& seed = seeds[trial % seeds.size()];
    const auto ex = search(seed, task, options(SearchMethod::Exhaustive, 3));
    const auto he = search(seed, task, options(SearchMethod::Heuristic, 3));
    if (he.satisfied) CHECK(ex.satisfied);
    if (ex.satisfied && he.satisfied) {
      CHECK(ex.modules_total <= he.modules_total);
      ++both;
    }
    CHECK(he.com_shift.norm() <= 1e-12);
    for (const auto* r : {&ex, &he}) {
      CHECK(is_connected(r->config.cells()));
      CHECK(is_torque_balanced(configuration_matrix(r->config)));
      CHECK(r->modules_total == r->config.cells().size());
      if (r->satisfied) CHECK(satisfies_task(configuration_matrix(r->config), task, 1.0).satisfied);
    }
  }
  CHECK(both > 3);
}

TEST_CASE("search results do not depend on thread count or checker") {
  std::mt19937_64 rng(5);
  TaskRequirement task;
  for (int i = 0; i < 10; ++i) {
    task.wrenches.emplace_back(oracle::uniform(rng, -0.4, 0.4), oracle::uniform(rng, -0.4, 0.4),
                               oracle::uniform(rng, 1.0, 7.0), oracle::uniform(rng, -0.1, 0.1),
                               oracle::uniform(rng, -0.1, 0.1), 0.0);
  }
  for (auto method : {SearchMethod::Exhaustive, SearchMethod::Heuristic}) {
    const auto base = search(StructureConfig::single(), task, options(method, 4, 1));
    const auto par = search(StructureConfig::single(), task, options(method, 4, 4));
    CHECK(base.config == par.config);
    CHECK(base.evaluations == par.evaluations);
    CHECK(base.satisfied == par.satisfied);
    auto hull_opts = options(method, 2, 1);
    hull_opts.checker = Checker::Hull;
    auto lp_opts = options(method, 2, 1);
    const auto h = search(StructureConfig::single(), task, hull_opts);
    const auto l = search(StructureConfig::single(), task, lp_opts);
    CHECK(h.config == l.config);
    CHECK(h.satisfied == l.satisfied);
  }
}

TEST_CASE("search option names") {
  CHECK(to_string(SearchMethod::Exhaustive) == "exhaustive");
  CHECK(to_string(SearchMethod::Heuristic) == "heuristic");
  CHECK(to_string(Checker::Lp) == "lp");
  CHECK(to_string(Checker::Hull) == "hull");
  auto bad = options(SearchMethod::Exhaustive, -1);
  CHECK_THROWS_AS(search(StructureConfig::single(), lift(1.0), bad), ValidationError);
}
