#include "modquad/cli.hpp"

#include "modquad/allocation.hpp"
#include "modquad/config_search.hpp"
#include "modquad/formats.hpp"
#include "modquad/lp_check.hpp"
#include "modquad/wrench_hull.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace modquad::cli {

namespace {

struct Context {
  std::ostream& out;
  std::ostream& err;
};

// Thrown to leave a command with a specific exit code after reporting.
struct Exit {
  int code;
};

StructureConfig load_structure(const std::string& path, Context& ctx) {
  StructureFile file = read_structure_file(path);
  try {
    return file.to_config();
  } catch (const ValidationError& e) {
    ctx.err << "error: " << path << ": invalid structure: " << e.what() << '\n';
    throw Exit{kInvalidStructure};
  }
}

// Writes through `emit` to `path`, or to stdout when the path is empty.
void emit_to(const std::string& path, Context& ctx, const std::function<void(std::ostream&)>& emit) {
  if (path.empty()) {
    emit(ctx.out);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    ctx.err << "error: cannot write " << path << '\n';
    throw Exit{kParseError};
  }
  emit(file);
}

std::string fmt12(double v) {
  if (v == 0.0) v = 0.0;
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

int cmd_matrix(const std::string& structure, Context& ctx) {
  const auto config = load_structure(structure, ctx);
  const auto a = configuration_matrix(config);
  for (Eigen::Index r = 0; r < 6; ++r) {
    for (Eigen::Index c = 0; c < a.columns(); ++c) {
      ctx.out << (c ? " " : "") << fmt12(a.entries(r, c));
    }
    ctx.out << '\n';
  }
  return kOk;
}

int cmd_check(const std::string& structure, const std::string& task_path, const std::string& method,
              Context& ctx) {
  const auto config = load_structure(structure, ctx);
  const auto task = read_task_file(task_path);
  const auto a = configuration_matrix(config);
  const double f_max = config.params().f_max;

  std::vector<bool> verdicts(task.size());
  if (method == "hull") {
    const auto hull = construct_hull(a, f_max);
    for (std::size_t i = 0; i < task.size(); ++i) verdicts[i] = hull_contains(hull, task.wrenches[i]);
  } else {
    for (std::size_t i = 0; i < task.size(); ++i) {
      verdicts[i] = satisfies_wrench(a, task.wrenches[i], f_max);
    }
  }
  bool all = true;
  for (std::size_t i = 0; i < task.size(); ++i) {
    ctx.out << "wrench " << i << ": " << (verdicts[i] ? "feasible" : "infeasible") << '\n';
    all = all && verdicts[i];
  }
  ctx.out << (all ? "SATISFIED" : "UNSATISFIED") << '\n';
  return all ? kOk : kUnsatisfied;
}

int cmd_search(const std::string& structure, const std::string& task_path, SearchOptions opts,
               const std::string& out_path, Context& ctx) {
  const auto config = load_structure(structure, ctx);
  const auto task = read_task_file(task_path);
  std::optional<SearchResult> found;
  try {
    found = search(config, task, opts);
  } catch (const InvalidSeedError& e) {
    ctx.err << "error: " << e.what() << '\n';
    return kInvalidSeed;
  } catch (const ValidationError& e) {
    ctx.err << "error: " << e.what() << '\n';
    return kInvalidStructure;
  }
  const SearchResult& result = *found;

  if (!out_path.empty()) {
    emit_to(out_path, ctx, [&](std::ostream& os) { write_search_result(os, result, opts); });
  }
  ctx.out << "method: " << to_string(opts.method) << " (checker " << to_string(opts.checker)
          << ", n_max " << opts.n_max << ")\n"
          << "satisfied: " << (result.satisfied ? "yes" : "no") << '\n'
          << "modules: " << result.modules_total << '\n'
          << "evaluations: " << result.evaluations << '\n'
          << "com_shift: " << format_real(result.com_shift.x()) << ' '
          << format_real(result.com_shift.y()) << ' ' << format_real(result.com_shift.z()) << '\n'
          << "cells:";
  for (const auto& c : result.config.cells()) ctx.out << " (" << c.ix << ", " << c.iy << ')';
  ctx.out << '\n';
  return result.satisfied ? kOk : kUnsatisfied;
}

int cmd_hull(const std::string& structure, const std::string& out_path, Context& ctx) {
  const auto config = load_structure(structure, ctx);
  const auto a = configuration_matrix(config);
  if (a.columns() > kHullCommandColumnLimit) {
    ctx.err << "error: hull construction limited to " << kHullCommandColumnLimit
            << " columns (" << kHullCommandColumnLimit / 4 << " modules); structure has "
            << a.columns() << '\n';
    return kCapacity;
  }
  const auto hull = construct_hull(a, config.params().f_max);
  emit_to(out_path, ctx, [&](std::ostream& os) { write_vertices(os, hull, config); });
  if (!out_path.empty()) ctx.out << "vertices: " << hull.size() << '\n';
  return kOk;
}

int cmd_gen_task(int count, double half_range, double fz_scale, std::uint64_t seed,
                 const std::string& out_path, Context& ctx) {
  TaskRequirement task;
  try {
    task = generate_random_task(count, half_range, fz_scale, seed);
  } catch (const ValidationError& e) {
    ctx.err << "error: " << e.what() << '\n';
    return kParseError;
  }
  emit_to(out_path, ctx, [&](std::ostream& os) { write_task(os, task); });
  return kOk;
}

int cmd_allocate(const std::string& structure, const std::string& task_path, bool fallback,
                 const std::string& out_path, Context& ctx) {
  const auto config = load_structure(structure, ctx);
  const auto task = read_task_file(task_path);
  const auto mode = fallback ? AllocationMode::Feasibility : AllocationMode::PseudoInverse;
  const auto report =
      evaluate_task_trace(configuration_matrix(config), task, config.params().f_max, mode);
  emit_to(out_path, ctx, [&](std::ostream& os) { write_allocation_report(os, report, mode); });
  if (!out_path.empty()) {
    ctx.out << "max_error: " << format_real(report.max_error) << '\n'
            << "saturated: " << (report.any_saturated ? "yes" : "no") << '\n';
  }
  return (!report.any_saturated && report.max_error <= 1e-6) ? kOk : kUnsatisfied;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context ctx{out, err};
  CLI::App app{"modquad: modular multi-rotor design toolkit"};
  app.require_subcommand(1);

  std::string structure;
  std::string task;
  std::string out_path;
  std::string method;
  std::string checker = "lp";
  int n_max = 7;
  unsigned threads = 1;
  int count = 80;
  double half_range = 0.5;
  double fz_scale = 30.0;
  std::uint64_t seed = 0;
  bool fallback = false;

  auto* matrix = app.add_subcommand("matrix", "print the 6 x 4n configuration matrix");
  matrix->add_option("structure", structure, "structure file")->required();

  auto* check = app.add_subcommand("check", "decide whether a structure satisfies a task");
  check->add_option("structure", structure, "structure file")->required();
  check->add_option("task", task, "task file")->required();
  check->add_option("--method", method, "lp or hull")
      ->default_val("lp")
      ->check(CLI::IsMember({"lp", "hull"}));

  auto* search_cmd = app.add_subcommand("search", "find the smallest satisfying design");
  search_cmd->add_option("structure", structure, "initial structure file")->required();
  search_cmd->add_option("task", task, "task file")->required();
  search_cmd->add_option("--method", method, "exhaustive or heuristic")
      ->default_val("exhaustive")
      ->check(CLI::IsMember({"exhaustive", "heuristic"}));
  search_cmd->add_option("--n-max", n_max, "maximum modules added")
      ->default_val(7)
      ->check(CLI::NonNegativeNumber);
  search_cmd->add_option("--checker", checker, "lp or hull")
      ->default_val("lp")
      ->check(CLI::IsMember({"lp", "hull"}));
  search_cmd->add_option("--threads", threads, "worker threads per evaluation")->default_val(1);
  search_cmd->add_option("--out", out_path, "result file");

  auto* hull = app.add_subcommand("hull", "export the feasible-wrench hull vertices");
  hull->add_option("structure", structure, "structure file")->required();
  hull->add_option("--out", out_path, "vertex file (stdout when omitted)");

  auto* gen = app.add_subcommand("gen-task", "generate a seeded random task");
  gen->add_option("--count", count, "number of wrenches")->default_val(80);
  gen->add_option("--half-range", half_range, "component half range")->default_val(0.5);
  gen->add_option("--fz-scale", fz_scale, "multiplier on f_z")->default_val(30.0);
  gen->add_option("--seed", seed, "generator seed")->default_val(0);
  gen->add_option("--out", out_path, "task file (stdout when omitted)");

  auto* alloc = app.add_subcommand("allocate", "pseudoinverse allocation with truncation");
  alloc->add_option("structure", structure, "structure file")->required();
  alloc->add_option("task", task, "task file")->required();
  alloc->add_flag("--fallback", fallback, "use an in-box LP preimage when one exists");
  alloc->add_option("--out", out_path, "report file (stdout when omitted)");

  std::vector<const char*> argv{"modquad"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParseError;
  }

  try {
    if (*matrix) return cmd_matrix(structure, ctx);
    if (*check) return cmd_check(structure, task, method, ctx);
    if (*search_cmd) {
      SearchOptions opts;
      opts.n_max = n_max;
      opts.method = method == "heuristic" ? SearchMethod::Heuristic : SearchMethod::Exhaustive;
      opts.checker = checker == "hull" ? Checker::Hull : Checker::Lp;
      opts.threads = threads;
      return cmd_search(structure, task, opts, out_path, ctx);
    }
    if (*hull) return cmd_hull(structure, out_path, ctx);
    if (*gen) return cmd_gen_task(count, half_range, fz_scale, seed, out_path, ctx);
    if (*alloc) return cmd_allocate(structure, task, fallback, out_path, ctx);
  } catch (const Exit& e) {
    return e.code;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << '\n';
    return kCapacity;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidStructure;
  }
  return kParseError;
}

}  // namespace modquad::cli
