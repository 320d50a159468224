#pragma once

#include "modquad/lp_check.hpp"
#include "modquad/structure.hpp"

#include <string>
#include <vector>

namespace modquad {

enum class SearchMethod { Exhaustive, Heuristic };
enum class Checker { Lp, Hull };

std::string to_string(SearchMethod m);
std::string to_string(Checker c);

/// Raised when the heuristic search is seeded with a design that is not
/// centrosymmetric or not torque-balanced.
class InvalidSeedError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

struct SearchOptions {
  int n_max = 7;  // maximum number of modules added to the initial design
  SearchMethod method = SearchMethod::Exhaustive;
  Checker checker = Checker::Lp;
  double torque_balance_tol = 1e-10;
  unsigned threads = 1;  // workers for per-wrench checks inside one evaluation
};

struct SearchResult {
  StructureConfig config;
  std::size_t modules_total = 0;
  std::size_t evaluations = 0;  // satisfiability checks performed
  bool satisfied = false;
  Vec3 com_shift = Vec3::Zero();
};

/// One child per attachable surface, each with one module docked at the
/// free neighbor; deduplicated by canonical form and sorted by it.
std::vector<StructureConfig> expand_one(const StructureConfig& config);

/// True iff the cell set maps onto itself under point reflection through
/// its centroid.
bool is_centrosymmetric(const CellSet& cells);

/// Levels S_1..S_levels: each design in level k+1 adds a module at a free
/// surface and another at its point-reflected partner. Every design keeps
/// the seed's COM. Throws InvalidSeedError for a non-centrosymmetric seed.
std::vector<std::vector<StructureConfig>> generate_config_symmetry(const StructureConfig& seed,
                                                                   int levels);

/// Breadth-first over every design reachable by docking up to n_max
/// modules; returns the first torque-balanced design that satisfies the
/// task at the smallest module count (ties by canonical order).
SearchResult exhaustive_search(const StructureConfig& initial, const TaskRequirement& task,
                               const SearchOptions& opts);

/// Walks the centrosymmetric levels. Each level adds two modules, so at
/// most n_max / 2 levels fit the budget.
SearchResult heuristic_search(const StructureConfig& initial, const TaskRequirement& task,
                              const SearchOptions& opts);

/// Dispatches on opts.method.
SearchResult search(const StructureConfig& initial, const TaskRequirement& task,
                    const SearchOptions& opts);

}  // namespace modquad
