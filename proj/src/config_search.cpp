#include "modquad/config_search.hpp"

#include "modquad/wrench_hull.hpp"

#include <algorithm>
#include <map>

namespace modquad {

std::string to_string(SearchMethod m) {
  return m == SearchMethod::Exhaustive ? "exhaustive" : "heuristic";
}

std::string to_string(Checker c) { return c == Checker::Lp ? "lp" : "hull"; }

namespace {

using Level = std::map<std::vector<GridCell>, CellSet>;

std::vector<StructureConfig> to_configs(const Level& level, const ModuleParams& params) {
  std::vector<StructureConfig> out;
  out.reserve(level.size());
  for (const auto& [key, cells] : level) out.emplace_back(cells, params);
  return out;
}

// Doubled reflection center (integer): reflect(c) = center2 - c.
GridCell doubled_center(const CellSet& cells) {
  auto [min_x, max_x] = std::minmax_element(cells.begin(), cells.end(),
                                            [](auto& a, auto& b) { return a.ix < b.ix; });
  auto [min_y, max_y] = std::minmax_element(cells.begin(), cells.end(),
                                            [](auto& a, auto& b) { return a.iy < b.iy; });
  return {min_x->ix + max_x->ix, min_y->iy + max_y->iy};
}

GridCell reflect(GridCell c, GridCell center2) { return {center2.ix - c.ix, center2.iy - c.iy}; }

class Evaluator {
 public:
  Evaluator(const TaskRequirement& task, const SearchOptions& opts) : task_(task), opts_(opts) {}

  bool balanced(const StructureConfig& config) const {
    return is_torque_balanced(configuration_matrix(config), opts_.torque_balance_tol);
  }

  bool satisfied(const StructureConfig& config) {
    ++evaluations_;
    const auto a = configuration_matrix(config);
    const double f_max = config.params().f_max;
    return opts_.checker == Checker::Lp
               ? satisfies_task(a, task_, f_max, opts_.threads).satisfied
               : satisfies_task_hull(a, task_, f_max, opts_.threads).satisfied;
  }

  std::size_t evaluations() const { return evaluations_; }

 private:
  const TaskRequirement& task_;
  const SearchOptions& opts_;
  std::size_t evaluations_ = 0;
};

SearchResult make_result(const StructureConfig& initial, const StructureConfig& found,
                         bool satisfied, std::size_t evaluations) {
  SearchResult r{found, found.module_count(), evaluations, satisfied,
                 center_of_mass(found) - center_of_mass(initial)};
  return r;
}

void check_budget(const SearchOptions& opts) {
  if (opts.n_max < 0) throw ValidationError("n_max must be non-negative");
}

}  // namespace

std::vector<StructureConfig> expand_one(const StructureConfig& config) {
  Level children;
  for (const auto& s : attachable_surfaces(config)) {
    CellSet grown = config.cells();
    grown.insert(s.free_cell());
    auto key = canonical_form(grown);
    children.emplace(std::move(key), std::move(grown));
  }
  return to_configs(children, config.params());
}

bool is_centrosymmetric(const CellSet& cells) {
  if (cells.empty()) return false;
  const GridCell c2 = doubled_center(cells);
  return std::all_of(cells.begin(), cells.end(),
                     [&](const GridCell& c) { return cells.count(reflect(c, c2)) != 0; });
}

std::vector<std::vector<StructureConfig>> generate_config_symmetry(const StructureConfig& seed,
                                                                   int levels) {
  if (!is_centrosymmetric(seed.cells())) {
    throw InvalidSeedError("seed design is not centrosymmetric about its center of mass");
  }
  if (levels < 0) throw ValidationError("level count must be non-negative");

  std::vector<std::vector<StructureConfig>> out;
  std::vector<CellSet> current{seed.cells()};
  for (int n = 0; n < levels; ++n) {
    Level next;
    for (const auto& cells : current) {
      const GridCell c2 = doubled_center(cells);
      for (const auto& s : attachable_surfaces(cells)) {
        const GridCell added = s.free_cell();
        const GridCell partner = reflect(added, c2);
        if (partner == added || cells.count(partner)) continue;
        CellSet grown = cells;
        grown.insert(added);
        grown.insert(partner);
        auto key = canonical_form(grown);
        next.emplace(std::move(key), std::move(grown));
      }
    }
    current.clear();
    for (const auto& [key, cells] : next) current.push_back(cells);
    out.push_back(to_configs(next, seed.params()));
  }
  return out;
}

SearchResult exhaustive_search(const StructureConfig& initial, const TaskRequirement& task,
                               const SearchOptions& opts) {
  check_budget(opts);
  Evaluator eval(task, opts);
  if (!eval.balanced(initial)) throw ValidationError("initial design is not torque-balanced");

  if (eval.satisfied(initial)) return make_result(initial, initial, true, eval.evaluations());

  Level level{{initial.canonical(), initial.cells()}};
  for (int added = 1; added <= opts.n_max; ++added) {
    Level next;
    for (const auto& [key, cells] : level) {
      for (const auto& s : attachable_surfaces(cells)) {
        CellSet grown = cells;
        grown.insert(s.free_cell());
        auto child_key = canonical_form(grown);
        next.emplace(std::move(child_key), std::move(grown));
      }
    }
    // Every connected design is grown further; only balanced ones are checked.
    for (const auto& [key, cells] : next) {
      const StructureConfig candidate(cells, initial.params());
      if (!eval.balanced(candidate)) continue;
      if (eval.satisfied(candidate)) {
        return make_result(initial, candidate, true, eval.evaluations());
      }
    }
    level = std::move(next);
  }
  return make_result(initial, initial, false, eval.evaluations());
}

SearchResult heuristic_search(const StructureConfig& initial, const TaskRequirement& task,
                              const SearchOptions& opts) {
  check_budget(opts);
  if (!is_centrosymmetric(initial.cells())) {
    throw InvalidSeedError("seed design is not centrosymmetric about its center of mass");
  }
  Evaluator eval(task, opts);
  if (!eval.balanced(initial)) throw InvalidSeedError("seed design is not torque-balanced");

  if (eval.satisfied(initial)) return make_result(initial, initial, true, eval.evaluations());

  std::vector<StructureConfig> level{initial};
  for (int n = 0; 2 * (n + 1) <= opts.n_max; ++n) {
    // Expand the whole current level by one symmetric step.
    Level next;
    for (const auto& design : level) {
      const auto children = generate_config_symmetry(design, 1);
      for (const auto& child : children.front()) next.emplace(child.canonical(), child.cells());
    }
    level = to_configs(next, initial.params());
    for (const auto& candidate : level) {
      if (!eval.balanced(candidate)) continue;
      if (eval.satisfied(candidate)) {
        return make_result(initial, candidate, true, eval.evaluations());
      }
    }
  }
  return make_result(initial, initial, false, eval.evaluations());
}

SearchResult search(const StructureConfig& initial, const TaskRequirement& task,
                    const SearchOptions& opts) {
  return opts.method == SearchMethod::Exhaustive ? exhaustive_search(initial, task, opts)
                                                 : heuristic_search(initial, task, opts);
}

}  // namespace modquad
