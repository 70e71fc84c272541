#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "iface/awareness.hpp"
#include "iface/errors.hpp"
#include "iface/model.hpp"
#include "iface/powergrid.hpp"
#include "iface/solver.hpp"
#include "iface/uii.hpp"

namespace {

using iface::SensorSet;

struct CommonOpts {
  std::string instance;
  std::optional<int> k_trust;
  std::string format = "json";
  std::string out;
  int workers = 1;
  std::size_t cache_cap = iface::uii::GammaOracle::kUnboundedCache;
  bool aggressive_prune = false;
  std::size_t expand_limit = 0;
  bool include_long = false;
  bool alt_heuristic = false;
};

void emit(const CommonOpts& opts, const std::string& text) {
  if (opts.out.empty()) {
    std::cout << text << std::endl;
    return;
  }
  std::ofstream f(opts.out);
  if (!f) throw iface::DataError("cannot write output file " + opts.out);
  f << text << std::endl;
}

iface::model::Instance resolve_instance(const CommonOpts& opts) {
  if (opts.instance.empty()) {
    throw iface::InputError("--instance is required for this command");
  }
  if (opts.instance == "chain") {
    auto inst = iface::model::build_chain_example();
    if (opts.k_trust) inst.trust.k_trust = *opts.k_trust;
    return inst;
  }
  if (opts.instance.rfind("grid118:cfg", 0) == 0) {
    const std::string tail = opts.instance.substr(std::string("grid118:cfg").size());
    if (tail.size() != 1 || tail[0] < '1' || tail[0] > '4') {
      throw iface::InputError("unknown built-in instance " + opts.instance +
                              "; use grid118:cfg1 .. grid118:cfg4");
    }
    const auto pc = iface::powergrid::parse_case_file(
        iface::powergrid::locate_data_file("case118.txt"));
    auto grid = iface::powergrid::configuration(pc, {}, tail[0] - '0');
    iface::model::Instance inst;
    inst.system = std::move(grid.system);
    inst.pool = std::move(grid.pool);
    inst.task = std::move(grid.task);
    inst.trust.k_trust = opts.k_trust.value_or(1);
    return inst;
  }
  auto inst = iface::model::load_instance_file(opts.instance);
  if (opts.k_trust) inst.trust.k_trust = *opts.k_trust;
  return inst;
}

std::vector<int> parse_ids(const std::string& csv) {
  std::vector<int> ids;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      ids.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw iface::InputError("bad sensor id '" + tok + "' in --ids");
    }
  }
  return ids;
}

int run_gamma(const CommonOpts& opts, const std::string& ids_csv) {
  const auto inst = resolve_instance(opts);
  iface::uii::GammaOracle oracle(inst.system, inst.pool, {}, opts.cache_cap);
  SensorSet set;
  for (int id : parse_ids(ids_csv)) {
    if (id < 0 || id >= inst.pool.size()) {
      throw iface::InputError("sensor id " + std::to_string(id) +
                              " outside pool of size " +
                              std::to_string(inst.pool.size()));
    }
    set.set(id);
  }
  nlohmann::json j;
  j["ids"] = set.ids();
  j["gamma"] = oracle.gamma(set);
  j["gamma_union_task"] = oracle.gamma_union_task(set, inst.task);
  j["gamma_task"] = oracle.gamma(inst.task.s_task);
  if (opts.format == "csv") {
    std::string row = "gamma,gamma_union_task,gamma_task\n";
    row += std::to_string(j["gamma"].get<int>()) + "," +
           std::to_string(j["gamma_union_task"].get<int>()) + "," +
           std::to_string(j["gamma_task"].get<int>());
    emit(opts, row);
  } else {
    emit(opts, j.dump(2));
  }
  return 0;
}

int run_enumerate(const CommonOpts& opts) {
  const auto inst = resolve_instance(opts);
  iface::uii::GammaOracle oracle(inst.system, inst.pool, {}, opts.cache_cap);

  const bool long_instance = inst.pool.size() > 24;
  iface::awareness::EnumerateOptions eopts;
  eopts.aggressive_prune = opts.aggressive_prune;
  eopts.workers = opts.workers;
  const auto start = std::chrono::steady_clock::now();
  auto s_reduced = iface::awareness::compute_s_reduced(oracle, inst.task);
  if (long_instance && s_reduced.cardinality() > 20 && !opts.include_long) {
    throw iface::InputError(
        "enumeration over 2^" + std::to_string(s_reduced.cardinality()) +
        " reduced sensors is a long-running cell; rerun with --include-long");
  }
  auto family = iface::awareness::enumerate_sitaware_reduced(oracle, inst.task,
                                                             eopts);
  const std::chrono::duration<double, std::milli> elapsed =
      std::chrono::steady_clock::now() - start;

  nlohmann::json j = nlohmann::json::parse(
      iface::awareness::family_to_json(family));
  j["family_size"] = family.sitaware_reduced.size();
  j["wall_time_ms"] = elapsed.count();
  if (opts.expand_limit > 0) {
    auto expanded = iface::awareness::expand_sitaware(family, inst.pool,
                                                      opts.expand_limit);
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : expanded) arr.push_back(s.ids());
    j["expanded"] = std::move(arr);
    j["expanded_size"] = expanded.size();
  }
  emit(opts, j.dump(2));
  return 0;
}

int run_solve(const CommonOpts& opts) {
  const auto inst = resolve_instance(opts);
  if (opts.instance.rfind("grid118:", 0) == 0 && !opts.k_trust) {
    throw iface::InputError("--k-trust is required for grid instances");
  }
  iface::uii::GammaOracle oracle(inst.system, inst.pool, {}, opts.cache_cap);
  const int gamma_full = oracle.gamma_full();
  const int k = inst.trust.k_trust;
  if (k < 1 || k > gamma_full) {
    throw iface::InputError("k_trust " + std::to_string(k) +
                            " out of range; legal range is [1, " +
                            std::to_string(gamma_full) + "]");
  }

  const int gamma_task = oracle.gamma(inst.task.s_task);
  const bool needs_family = k < gamma_full;
  const bool long_instance =
      inst.pool.size() > 24;  // the 118-bus enumerations
  iface::awareness::AwarenessFamily family;
  if (needs_family) {
    auto s_reduced = iface::awareness::compute_s_reduced(oracle, inst.task);
    if (long_instance && s_reduced.cardinality() > 20 && !opts.include_long) {
      throw iface::InputError(
          "this trust level requires enumerating 2^" +
          std::to_string(s_reduced.cardinality()) +
          " subsets, a long-running cell; rerun with --include-long");
    }
    iface::awareness::EnumerateOptions eopts;
    if (k <= gamma_task) {
      eopts.cardinality_cap = inst.task.s_task.cardinality();
    }
    eopts.aggressive_prune = opts.aggressive_prune;
    eopts.workers = opts.workers;
    family = iface::awareness::enumerate_sitaware_reduced(oracle, inst.task,
                                                          eopts);
  }

  iface::solver::SolverOptions sopts;
  sopts.workers = opts.workers;
  iface::solver::Solution sol;
  if (opts.alt_heuristic) {
    if (k <= gamma_task || k >= gamma_full) {
      throw iface::InputError(
          "--alt-heuristic applies only between Γ(task) and Γ(pool)");
    }
    sol = iface::solver::alt_heuristic(oracle, inst.task, family, k);
  } else {
    sol = iface::solver::solve(oracle, inst.task, family, inst.trust, sopts);
  }

  if (opts.format == "csv") {
    emit(opts, "regime,cardinality,delta,solution_ids,time_ms\n" +
                   iface::solver::solution_to_csv_row(sol));
  } else {
    emit(opts, iface::solver::solution_to_json(sol));
  }
  return 0;
}

struct GridCell {
  int config;
  std::string trust_name;
  int k_trust;
  std::optional<std::size_t> family_size;
  iface::solver::Solution solution;
};

int run_grid(const CommonOpts& opts, std::optional<int> config_filter,
             const std::string& trust_filter) {
  const auto pc = iface::powergrid::parse_case_file(
      iface::powergrid::locate_data_file("case118.txt"));

  std::vector<GridCell> cells;
  int skipped_long = 0;
  for (int cfg = 1; cfg <= 4; ++cfg) {
    if (config_filter && cfg != *config_filter) continue;
    auto grid = iface::powergrid::configuration(pc, {}, cfg);
    iface::uii::GammaOracle oracle(grid.system, grid.pool, {},
                                   opts.cache_cap);
    const int gamma_task = oracle.gamma(grid.task.s_task);
    const int gamma_full = oracle.gamma_full();

    std::optional<iface::awareness::AwarenessFamily> family;
    std::chrono::duration<double, std::milli> family_time{0};
    auto family_for_cell = [&]() -> const iface::awareness::AwarenessFamily& {
      if (!family) {
        iface::awareness::EnumerateOptions eopts;
        eopts.workers = opts.workers;
        eopts.aggressive_prune = opts.aggressive_prune;
        const auto t0 = std::chrono::steady_clock::now();
        family = iface::awareness::enumerate_sitaware_reduced(oracle,
                                                              grid.task, eopts);
        family_time = std::chrono::steady_clock::now() - t0;
      }
      return *family;
    };

    const std::vector<std::pair<std::string, int>> levels = {
        {"high", std::max(1, gamma_task - 10)},
        {"moderate", std::min(gamma_full, gamma_task + 10)},
        {"none", gamma_full},
    };
    for (const auto& [name, k] : levels) {
      if (!trust_filter.empty() && trust_filter != name) continue;
      const bool long_cell = cfg == 4 && name != "none";
      if (long_cell && !opts.include_long) {
        ++skipped_long;
        continue;
      }
      GridCell cell;
      cell.config = cfg;
      cell.trust_name = name;
      cell.k_trust = k;
      iface::solver::SolverOptions sopts;
      sopts.workers = opts.workers;
      if (k == gamma_full) {
        cell.solution = iface::solver::solve(oracle, grid.task, {},
                                             {k}, sopts);
      } else {
        // Cell time mirrors the end-to-end benchmark convention: family
        // enumeration plus the solve itself.
        const auto& fam = family_for_cell();
        cell.family_size = fam.sitaware_reduced.size();
        cell.solution = iface::solver::solve(oracle, grid.task, fam, {k},
                                             sopts);
        cell.solution.wall_time += family_time;
      }
      cells.push_back(std::move(cell));
    }
  }
  if (skipped_long > 0) {
    std::cerr << "note: skipped " << skipped_long
              << " long-running cell(s); rerun with --include-long\n";
  }

  if (opts.format == "csv") {
    std::string text =
        "configuration,k_trust,regime,family_size,cardinality,delta,"
        "solution_ids,time_ms";
    for (const auto& c : cells) {
      const auto& s = c.solution;
      std::string ids;
      for (int id : s.selected.ids()) {
        if (!ids.empty()) ids += ' ';
        ids += std::to_string(id);
      }
      std::string delta = s.is_optimal ? "1" : "";
      if (s.bound_delta) delta = std::to_string(*s.bound_delta);
      text += "\n" + std::to_string(c.config) + "," +
              std::to_string(c.k_trust) + "," +
              iface::solver::regime_name(s.regime) + "," +
              (c.family_size ? std::to_string(*c.family_size) : "") + "," +
              std::to_string(s.selected.cardinality()) + "," + delta + "," +
              ids + "," + std::to_string(s.wall_time.count());
    }
    emit(opts, text);
  } else {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : cells) {
      nlohmann::json j = nlohmann::json::parse(
          iface::solver::solution_to_json(c.solution));
      j["configuration"] = c.config;
      j["trust"] = c.trust_name;
      j["k_trust"] = c.k_trust;
      if (c.family_size) j["family_size"] = *c.family_size;
      arr.push_back(std::move(j));
    }
    emit(opts, arr.dump(2));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum-cardinality sensor interfaces for LTI "
               "human-automation systems"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string ids_csv;
  std::optional<int> grid_config;
  std::string grid_trust;

  auto add_common = [&](CLI::App* cmd, bool with_instance) {
    if (with_instance) {
      cmd->add_option("--instance", opts.instance,
                      "instance file, or built-in: chain, grid118:cfg1..4");
    }
    cmd->add_option("--k-trust", opts.k_trust, "trust level k");
    cmd->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", opts.out, "write the report to a file");
    cmd->add_option("--workers", opts.workers, "worker threads")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--cache-cap", opts.cache_cap,
                    "max cached Γ entries");
    cmd->add_flag("--aggressive-prune", opts.aggressive_prune,
                  "register provably dead subsets during enumeration");
    cmd->add_option("--expand-limit", opts.expand_limit,
                    "materialize up to N members of the full family");
    cmd->add_flag("--include-long", opts.include_long,
                  "run cells that take hours (config 4 exact enumeration)");
    cmd->add_flag("--alt-heuristic", opts.alt_heuristic,
                  "single greedy completion from the smallest awareness core");
  };

  auto* gamma_cmd =
      app.add_subcommand("gamma", "evaluate Γ(S) and Γ(S ∪ S_task)");
  add_common(gamma_cmd, true);
  gamma_cmd->add_option("--ids", ids_csv, "comma-separated sensor ids");

  auto* enum_cmd = app.add_subcommand(
      "enumerate", "compute the reduced awareness family");
  add_common(enum_cmd, true);

  auto* solve_cmd =
      app.add_subcommand("solve", "solve the trust-constrained selection");
  add_common(solve_cmd, true);

  auto* grid_cmd = app.add_subcommand(
      "grid", "run the 118-bus benchmark matrix");
  add_common(grid_cmd, false);
  grid_cmd->add_option("--config", grid_config, "configuration 1..4")
      ->check(CLI::Range(1, 4));
  grid_cmd->add_option("--trust", grid_trust, "trust level name")
      ->check(CLI::IsMember({"high", "moderate", "none"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gamma_cmd->parsed()) return run_gamma(opts, ids_csv);
    if (enum_cmd->parsed()) return run_enumerate(opts);
    if (solve_cmd->parsed()) return run_solve(opts);
    if (grid_cmd->parsed()) return run_grid(opts, grid_config, grid_trust);
  } catch (const iface::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const iface::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const iface::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
