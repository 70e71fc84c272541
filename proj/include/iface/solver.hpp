#ifndef IFACE_SOLVER_HPP_
#define IFACE_SOLVER_HPP_

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "iface/awareness.hpp"
#include "iface/model.hpp"
#include "iface/sensor_set.hpp"
#include "iface/uii.hpp"

namespace iface::solver {

enum class Regime {
  kHighTrustExact,
  kMidTrustHybrid,
  kNoTrustGreedy,
};

std::string regime_name(Regime r);

struct Solution {
  SensorSet selected;
  int gamma_value = 0;
  Regime regime = Regime::kHighTrustExact;
  bool is_optimal = false;
  std::optional<double> bound_delta;  // >= 1 when present
  std::optional<double> weak_bound;   // 1 + ln(Γ(pool))
  std::optional<SensorSet> pre_termination;
  std::chrono::duration<double, std::milli> wall_time{0};
  std::uint64_t evaluations = 0;
};

/// Per-family-member suboptimality terms backing the hybrid bound.
struct BoundReport {
  struct Entry {
    SensorSet p;
    double delta = 0.0;   // contribution to the max
    bool aborted = false; // run cut short; worst-case term substituted
  };
  std::vector<Entry> per_p_bounds;
  double max_bound = 1.0;   // 1 + max delta
  double weak_bound = 1.0;  // 1 + ln(Γ(pool))
};

struct SolverOptions {
  int workers = 1;
  /// Abandon a family member's greedy run once it provably cannot beat the
  /// incumbent cardinality. Sequential mode only; aborted runs contribute the
  /// worst-case term ln(Γ(pool)) to the reported bound.
  bool early_exit = true;
};

/// ln(Γ(pool) / (k - Γ(S))) when Γ(S) < k, +infinity otherwise.
double delta_gamma(const uii::GammaOracle& oracle, int k, const SensorSet& s);

struct GreedyResult {
  SensorSet selected;
  SensorSet pre_termination;
  double bound = 1.0;  // 1 + ln((Γ(base∪cands) - Γ(base)) / last gain)
  int additions = 0;
  std::uint64_t evaluations = 0;  // marginal-gain queries; <= |pool|^2
};

/// Greedy marginal-gain ascent from `base` over `candidates` until
/// Γ(set) >= k. Ties break toward the smallest sensor id. Throws InputError
/// naming the achievable maximum when Γ(base ∪ candidates) < k.
GreedyResult greedy_max(const uii::GammaOracle& oracle, const SensorSet& base,
                        const SensorSet& candidates, int k);

/// Exact minimum-cardinality awareness set when k <= Γ(S_task): smallest
/// family member subject to |P| <= |S_task|, ties toward the smallest mask.
Solution solve_high_trust(const uii::GammaOracle& oracle,
                          const model::Task& task,
                          const awareness::AwarenessFamily& family);

/// Hybrid search for Γ(S_task) < k < Γ(pool): a greedy completion per family
/// member, keeping the smallest result; certified by the logarithmic bound.
Solution solve_mid_trust(const uii::GammaOracle& oracle,
                         const model::Task& task,
                         const awareness::AwarenessFamily& family, int k,
                         const SolverOptions& opts = {},
                         BoundReport* report = nullptr);

/// Regime dispatch over the trust level.
Solution solve(const uii::GammaOracle& oracle, const model::Task& task,
               const awareness::AwarenessFamily& family,
               const model::TrustLevel& trust, const SolverOptions& opts = {});

/// Single-core heuristic: take the high-trust minimum-cardinality member,
/// then one greedy completion. Faster than the hybrid search, but carries no
/// suboptimality certificate.
Solution alt_heuristic(const uii::GammaOracle& oracle, const model::Task& task,
                       const awareness::AwarenessFamily& family, int k);

std::string solution_to_json(const Solution& s);
std::string solution_to_csv_row(const Solution& s);

}  // namespace iface::solver

#endif  // IFACE_SOLVER_HPP_
