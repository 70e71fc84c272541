#include "iface/awareness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <thread>
#include <utility>

#include <json.hpp>

#include "iface/enumgen.hpp"
#include "iface/errors.hpp"

namespace iface::awareness {

namespace {

// Maps a mask over local bit positions of s_reduced back to pool ids.
SensorSet local_to_global(const SensorSet& local,
                          const std::vector<int>& reduced_ids) {
  SensorSet out;
  for (int bit : local.ids()) {
    out.set(reduced_ids[static_cast<std::size_t>(bit)]);
  }
  return out;
}

struct SweepResult {
  std::vector<SensorSet> members;  // global masks
};

// One generator sweep over the given columns of the reduced pool. With
// aggressive pruning, an infeasible P is registered only when the deficiency
// Γ(P∪S_task) - Γ(P) provably cannot reach zero within the cardinality cap:
// adding sensor s closes at most γ(s) dimensions, so a necessary condition
// for a feasible capped superset through extension P∪{s} is
//   d(P) - γ(s) <= sum of the (cap - |P| - 1) largest γ over the rest.
SweepResult sweep(const uii::GammaOracle& oracle, const model::Task& task,
                  const std::vector<int>& reduced_ids,
                  const EnumerateOptions& opts, std::vector<int> columns) {
  enumgen::GeneratorConfig config;
  config.pool_size = static_cast<int>(reduced_ids.size());
  if (opts.cardinality_cap) {
    config.max_cardinality =
        std::min(*opts.cardinality_cap, config.pool_size);
  }
  config.columns = std::move(columns);

  std::vector<int> degrees(reduced_ids.size());
  for (std::size_t i = 0; i < reduced_ids.size(); ++i) {
    degrees[i] = oracle.block(reduced_ids[i]).gamma_degree;
  }

  enumgen::PruneRegistry registry;
  enumgen::SubsetGenerator gen(config);
  SweepResult result;
  const int cap = opts.cardinality_cap.value_or(config.pool_size);

  while (auto local = gen.next(registry)) {
    const SensorSet global = local_to_global(*local, reduced_ids);
    const int g = oracle.gamma(global);
    const int gu = oracle.gamma_union_task(global, task);
    if (gu == g) {
      result.members.push_back(global);
      continue;
    }
    if (!opts.aggressive_prune) continue;

    const int deficiency = gu - g;
    const int budget_slots = cap - local->cardinality() - 1;
    if (budget_slots < 0) {
      registry.add(*local);
      continue;
    }
    bool some_extension_viable = false;
    for (int bit = 0; bit < config.pool_size; ++bit) {
      if (local->test(bit)) continue;
      std::vector<int> rest;
      for (int other = 0; other < config.pool_size; ++other) {
        if (other != bit && !local->test(other)) {
          rest.push_back(degrees[static_cast<std::size_t>(other)]);
        }
      }
      std::sort(rest.begin(), rest.end(), std::greater<>());
      int budget = 0;
      for (int i = 0; i < budget_slots && i < static_cast<int>(rest.size());
           ++i) {
        budget += rest[static_cast<std::size_t>(i)];
      }
      if (deficiency - degrees[static_cast<std::size_t>(bit)] <= budget) {
        some_extension_viable = true;
        break;
      }
    }
    if (!some_extension_viable) registry.add(*local);
  }
  return result;
}

}  // namespace

SensorSet compute_s_reduced(const uii::GammaOracle& oracle,
                            const model::Task& task) {
  const int gamma_task = oracle.gamma(task.s_task);
  SensorSet reduced;
  for (int id = 0; id < oracle.pool_size(); ++id) {
    const SensorSet single = SensorSet::single(id);
    const int gs = oracle.gamma(single);
    const int gu = oracle.gamma_union_task(single, task);
    if (gs + gamma_task > gu) reduced.set(id);
  }
  return reduced;
}

AwarenessFamily enumerate_sitaware_reduced(const uii::GammaOracle& oracle,
                                           const model::Task& task,
                                           const EnumerateOptions& opts) {
  AwarenessFamily family;
  family.s_reduced = compute_s_reduced(oracle, task);
  family.gamma_task = oracle.gamma(task.s_task);
  const std::vector<int> reduced_ids = family.s_reduced.ids();
  if (reduced_ids.empty()) return family;

  const int pool = static_cast<int>(reduced_ids.size());
  const int workers = std::max(1, std::min(opts.workers, pool));
  std::vector<SweepResult> results(static_cast<std::size_t>(workers));
  if (workers == 1) {
    std::vector<int> cols(static_cast<std::size_t>(pool));
    for (int i = 0; i < pool; ++i) cols[static_cast<std::size_t>(i)] = i;
    results[0] = sweep(oracle, task, reduced_ids, opts, std::move(cols));
  } else {
    // Column c carries 2^c cells; assign columns to the lightest worker so
    // the partitions stay balanced.
    std::vector<std::vector<int>> assignment(static_cast<std::size_t>(workers));
    std::vector<long double> load(static_cast<std::size_t>(workers), 0.0L);
    for (int c = pool - 1; c >= 0; --c) {
      const std::size_t w = static_cast<std::size_t>(
          std::min_element(load.begin(), load.end()) - load.begin());
      assignment[w].push_back(c);
      load[w] += std::pow(2.0L, c);
    }
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        results[static_cast<std::size_t>(w)] = sweep(
            oracle, task, reduced_ids, opts,
            assignment[static_cast<std::size_t>(w)]);
      });
    }
    for (auto& t : threads) t.join();
  }

  for (auto& r : results) {
    family.sitaware_reduced.insert(family.sitaware_reduced.end(),
                                   r.members.begin(), r.members.end());
  }
  std::sort(family.sitaware_reduced.begin(), family.sitaware_reduced.end(),
            [](const SensorSet& a, const SensorSet& b) {
              if (a.cardinality() != b.cardinality()) {
                return a.cardinality() < b.cardinality();
              }
              return a < b;
            });
  return family;
}

bool is_situation_aware(const uii::GammaOracle& oracle,
                        const model::Task& task,
                        const AwarenessFamily& /*family*/,
                        const SensorSet& s) {
  // Membership is the direct rank test. Testing S ∩ s_reduced instead is not
  // equivalent: two sensors can jointly span the task subspace while each of
  // them, and hence their reduced intersection, spans none of it (see
  // MembershipGap in the awareness tests). The direct test costs the same
  // two cached oracle queries.
  return oracle.gamma(s) == oracle.gamma_union_task(s, task);
}

std::vector<SensorSet> expand_sitaware(const AwarenessFamily& family,
                                       const model::SensorPool& pool,
                                       std::size_t limit) {
  std::vector<SensorSet> out;
  std::set<SensorSet> seen;
  const SensorSet all = pool.all();
  for (const SensorSet& p : family.sitaware_reduced) {
    if (out.size() >= limit) break;
    const std::vector<int> rest = (all - p).ids();
    const std::size_t combos =
        rest.size() >= 64 ? std::numeric_limits<std::size_t>::max()
                          : std::size_t{1} << rest.size();
    for (std::size_t code = 0; code < combos && out.size() < limit; ++code) {
      SensorSet member = p;
      for (std::size_t bit = 0; bit < rest.size(); ++bit) {
        if ((code >> bit) & 1u) member.set(rest[bit]);
      }
      if (seen.insert(member).second) out.push_back(member);
    }
  }
  return out;
}

std::string family_to_json(const AwarenessFamily& family) {
  nlohmann::json j;
  j["s_reduced"] = family.s_reduced.ids();
  nlohmann::json members = nlohmann::json::array();
  for (const SensorSet& p : family.sitaware_reduced) members.push_back(p.ids());
  j["sitaware_reduced"] = std::move(members);
  j["gamma_task"] = family.gamma_task;
  return j.dump(2);
}

}  // namespace iface::awareness
