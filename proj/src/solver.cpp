#include "iface/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include <json.hpp>

#include "iface/errors.hpp"

namespace iface::solver {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool smaller_solution(const SensorSet& a, const SensorSet& b) {
  if (a.cardinality() != b.cardinality()) {
    return a.cardinality() < b.cardinality();
  }
  return a < b;
}

int max_block_degree(const uii::GammaOracle& oracle, const SensorSet& set) {
  int best = 0;
  for (int id : set.ids()) {
    best = std::max(best, oracle.block(id).gamma_degree);
  }
  return best;
}

}  // namespace

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::kHighTrustExact:
      return "high_trust_exact";
    case Regime::kMidTrustHybrid:
      return "mid_trust_hybrid";
    case Regime::kNoTrustGreedy:
      return "no_trust_greedy";
  }
  return "unknown";
}

double delta_gamma(const uii::GammaOracle& oracle, int k, const SensorSet& s) {
  const int gamma_full = oracle.gamma_full();
  if (k < 1 || k > gamma_full) {
    throw InputError("k must lie in [1, " + std::to_string(gamma_full) + "]");
  }
  const int gs = oracle.gamma(s);
  if (gs >= k) return kInf;
  return std::log(static_cast<double>(gamma_full) /
                  static_cast<double>(k - gs));
}

GreedyResult greedy_max(const uii::GammaOracle& oracle, const SensorSet& base,
                        const SensorSet& candidates, int k) {
  GreedyResult result;
  result.selected = base;
  result.pre_termination = base;

  const int reachable = oracle.gamma(base | candidates);
  if (reachable < k) {
    throw InputError("trust level " + std::to_string(k) +
                     " is infeasible for this candidate set; the achievable "
                     "maximum is " +
                     std::to_string(reachable));
  }

  int current = oracle.gamma(result.selected);
  const int base_gamma = current;
  int last_gain = 0;
  while (current < k) {
    int best_gain = -1;
    int best_id = -1;
    for (int id : (candidates - result.selected).ids()) {
      SensorSet trial = result.selected;
      trial.set(id);
      const int gain = oracle.gamma(trial) - current;
      ++result.evaluations;
      if (gain > best_gain) {  // ties keep the smallest id (ids ascend)
        best_gain = gain;
        best_id = id;
      }
    }
    result.pre_termination = result.selected;
    result.selected.set(best_id);
    current += best_gain;
    last_gain = best_gain;
    ++result.additions;
  }

  if (result.additions == 0) {
    result.bound = 1.0;  // nothing was added; the empty completion is exact
  } else {
    const double span = static_cast<double>(reachable - base_gamma);
    result.bound = 1.0 + std::log(span / static_cast<double>(last_gain));
  }
  return result;
}

Solution solve_high_trust(const uii::GammaOracle& oracle,
                          const model::Task& task,
                          const awareness::AwarenessFamily& family) {
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t queries_before = oracle.query_count();
  const int cap = task.s_task.cardinality();

  // The family is sorted by (cardinality, mask); the first member under the
  // cap is the minimum. The task set itself guarantees one exists.
  const SensorSet* best = nullptr;
  for (const SensorSet& p : family.sitaware_reduced) {
    if (p.cardinality() > cap) continue;
    best = &p;
    break;
  }
  if (best == nullptr) {
    throw InputError(
        "awareness family has no member within the task cardinality; "
        "was it enumerated with a tighter cap?");
  }

  Solution sol;
  sol.selected = *best;
  sol.gamma_value = oracle.gamma(*best);
  sol.regime = Regime::kHighTrustExact;
  sol.is_optimal = true;
  sol.evaluations = oracle.query_count() - queries_before;
  sol.wall_time = std::chrono::steady_clock::now() - start;
  return sol;
}

namespace {

struct PerMemberOutcome {
  SensorSet result;
  double delta_term = 0.0;
  bool aborted = false;
  std::uint64_t evaluations = 0;
};

// Greedy completion of one family member, optionally abandoning the run once
// even the most optimistic remaining additions cannot beat the incumbent.
PerMemberOutcome run_member(const uii::GammaOracle& oracle,
                            const SensorSet& p, int k,
                            std::optional<int> incumbent_card,
                            double worst_case_term) {
  PerMemberOutcome out;
  const std::uint64_t queries_before = oracle.query_count();
  const SensorSet all = oracle.pool().all();
  const SensorSet candidates = all - p;

  SensorSet selected = p;
  SensorSet pre = p;
  int current = oracle.gamma(selected);
  int additions = 0;

  while (current < k) {
    if (incumbent_card) {
      const int remaining_best = max_block_degree(oracle, candidates - selected);
      const int optimistic_adds =
          remaining_best > 0
              ? (k - current + remaining_best - 1) / remaining_best
              : std::numeric_limits<int>::max();
      if (selected.cardinality() + optimistic_adds > *incumbent_card) {
        out.aborted = true;
        out.delta_term = worst_case_term;
        out.result = selected;
        out.evaluations = oracle.query_count() - queries_before;
        return out;
      }
    }
    int best_gain = -1;
    int best_id = -1;
    for (int id : (candidates - selected).ids()) {
      SensorSet trial = selected;
      trial.set(id);
      const int gain = oracle.gamma(trial) - current;
      if (gain > best_gain) {
        best_gain = gain;
        best_id = id;
      }
    }
    pre = selected;
    selected.set(best_id);
    current += best_gain;
    ++additions;
  }

  out.result = selected;
  if (additions > 0) {
    const int pre_gamma = oracle.gamma(pre);
    out.delta_term = std::log(static_cast<double>(oracle.gamma_full()) /
                              static_cast<double>(k - pre_gamma));
  } else {
    out.delta_term = 0.0;  // the member already met the trust bound
  }
  out.evaluations = oracle.query_count() - queries_before;
  return out;
}

}  // namespace

Solution solve_mid_trust(const uii::GammaOracle& oracle,
                         [[maybe_unused]] const model::Task& task,
                         const awareness::AwarenessFamily& family, int k,
                         const SolverOptions& opts, BoundReport* report) {
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t queries_before = oracle.query_count();
  if (family.sitaware_reduced.empty()) {
    throw InputError("awareness family is empty; enumerate it first");
  }
  const int gamma_full = oracle.gamma_full();
  const double worst_case_term = std::log(static_cast<double>(gamma_full));
  const int workers = std::max(1, opts.workers);

  std::vector<PerMemberOutcome> outcomes(family.sitaware_reduced.size());
  if (workers == 1) {
    std::optional<int> incumbent;
    for (std::size_t i = 0; i < family.sitaware_reduced.size(); ++i) {
      const SensorSet& p = family.sitaware_reduced[i];
      outcomes[i] = run_member(oracle, p, k,
                               opts.early_exit ? incumbent : std::nullopt,
                               worst_case_term);
      if (!outcomes[i].aborted) {
        const int card = outcomes[i].result.cardinality();
        if (!incumbent || card < *incumbent) incumbent = card;
      }
    }
  } else {
    // Per-member runs are independent; the incumbent-based cutoff is skipped
    // so the reported bound does not depend on scheduling.
    std::vector<std::thread> threads;
    std::atomic<std::size_t> next{0};
    for (int w = 0; w < workers; ++w) {
      threads.emplace_back([&] {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= family.sitaware_reduced.size()) break;
          outcomes[i] = run_member(oracle, family.sitaware_reduced[i], k,
                                   std::nullopt, worst_case_term);
        }
      });
    }
    for (auto& t : threads) t.join();
  }

  const SensorSet* best = nullptr;
  double max_term = 0.0;
  BoundReport local_report;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    max_term = std::max(max_term, o.delta_term);
    local_report.per_p_bounds.push_back(
        {family.sitaware_reduced[i], o.delta_term, o.aborted});
    if (o.aborted) continue;
    if (best == nullptr || smaller_solution(o.result, *best)) {
      best = &o.result;
    }
  }

  Solution sol;
  sol.selected = *best;
  sol.gamma_value = oracle.gamma(sol.selected);
  sol.regime = Regime::kMidTrustHybrid;
  sol.is_optimal = false;
  sol.bound_delta = 1.0 + max_term;
  sol.weak_bound = 1.0 + worst_case_term;
  sol.evaluations = oracle.query_count() - queries_before;
  sol.wall_time = std::chrono::steady_clock::now() - start;

  local_report.max_bound = *sol.bound_delta;
  local_report.weak_bound = *sol.weak_bound;
  if (report != nullptr) *report = std::move(local_report);
  return sol;
}

Solution solve(const uii::GammaOracle& oracle, const model::Task& task,
               const awareness::AwarenessFamily& family,
               const model::TrustLevel& trust, const SolverOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const int gamma_full = oracle.gamma_full();
  const int k = trust.k_trust;
  if (k < 1 || k > gamma_full) {
    throw InputError("k_trust must lie in [1, " + std::to_string(gamma_full) +
                     "]");
  }
  const int gamma_task = oracle.gamma(task.s_task);

  Solution sol;
  if (k <= gamma_task) {
    sol = solve_high_trust(oracle, task, family);
  } else if (k == gamma_full) {
    const std::uint64_t queries_before = oracle.query_count();
    GreedyResult g = greedy_max(oracle, SensorSet{}, oracle.pool().all(), k);
    sol.selected = g.selected;
    sol.gamma_value = oracle.gamma(g.selected);
    sol.regime = Regime::kNoTrustGreedy;
    sol.is_optimal = false;
    sol.bound_delta = g.bound;
    sol.weak_bound = 1.0 + std::log(static_cast<double>(gamma_full));
    sol.pre_termination = g.pre_termination;
    sol.evaluations = oracle.query_count() - queries_before;
  } else {
    sol = solve_mid_trust(oracle, task, family, k, opts);
  }
  sol.wall_time = std::chrono::steady_clock::now() - start;
  return sol;
}

Solution alt_heuristic(const uii::GammaOracle& oracle, const model::Task& task,
                       const awareness::AwarenessFamily& family, int k) {
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t queries_before = oracle.query_count();
  Solution core = solve_high_trust(oracle, task, family);

  GreedyResult g = greedy_max(oracle, core.selected,
                              oracle.pool().all() - core.selected, k);
  Solution sol;
  sol.selected = g.selected;
  sol.gamma_value = oracle.gamma(g.selected);
  sol.regime = Regime::kMidTrustHybrid;
  sol.is_optimal = false;
  // The hybrid certificate does not transfer to this shortcut; no bound.
  sol.pre_termination = g.pre_termination;
  sol.evaluations = oracle.query_count() - queries_before;
  sol.wall_time = std::chrono::steady_clock::now() - start;
  return sol;
}

std::string solution_to_json(const Solution& s) {
  nlohmann::json j;
  j["selected"] = s.selected.ids();
  j["gamma_value"] = s.gamma_value;
  j["regime"] = regime_name(s.regime);
  j["is_optimal"] = s.is_optimal;
  if (s.bound_delta) j["bound_delta"] = *s.bound_delta;
  if (s.weak_bound) j["weak_bound"] = *s.weak_bound;
  if (s.pre_termination) j["pre_termination"] = s.pre_termination->ids();
  j["wall_time_ms"] = s.wall_time.count();
  j["evaluations"] = s.evaluations;
  return j.dump(2);
}

std::string solution_to_csv_row(const Solution& s) {
  std::string ids;
  for (int id : s.selected.ids()) {
    if (!ids.empty()) ids += ' ';
    ids += std::to_string(id);
  }
  std::string delta = s.is_optimal ? "1" : "";
  if (s.bound_delta) delta = std::to_string(*s.bound_delta);
  return regime_name(s.regime) + "," + std::to_string(s.selected.cardinality()) +
         "," + delta + "," + ids + "," + std::to_string(s.wall_time.count());
}

}  // namespace iface::solver
