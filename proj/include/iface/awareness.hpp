#ifndef IFACE_AWARENESS_HPP_
#define IFACE_AWARENESS_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "iface/model.hpp"
#include "iface/sensor_set.hpp"
#include "iface/uii.hpp"

namespace iface::awareness {

/// The reduced admissible sensors and the family of subsets of them that
/// already suffice for situation awareness. Every awareness-feasible set in
/// the full pool decomposes through this family.
struct AwarenessFamily {
  SensorSet s_reduced;
  std::vector<SensorSet> sitaware_reduced;  // sorted by (cardinality, mask)
  int gamma_task = 0;
};

/// Sensors whose observable subspace intersects the task subspace:
/// {s : Γ({s}) + Γ(S_task) > Γ({s} ∪ S_task)}.
SensorSet compute_s_reduced(const uii::GammaOracle& oracle,
                            const model::Task& task);

struct EnumerateOptions {
  std::optional<int> cardinality_cap;
  bool aggressive_prune = false;
  int workers = 1;
};

/// All P within the reduced set with Γ(P ∪ S_task) = Γ(P), found by sweeping
/// the subset generator in cardinality-first order. Pruning is conservative:
/// by default nothing is registered; the aggressive mode registers a failed P
/// only when no capped superset can recover the deficiency.
AwarenessFamily enumerate_sitaware_reduced(const uii::GammaOracle& oracle,
                                           const model::Task& task,
                                           const EnumerateOptions& opts = {});

/// Membership in the full awareness family, by the direct test
/// Γ(S) = Γ(S ∪ S_task). Two cached oracle queries.
bool is_situation_aware(const uii::GammaOracle& oracle,
                        const model::Task& task, const AwarenessFamily& family,
                        const SensorSet& s);

/// Materializes awareness-family members by crossing each reduced-family
/// member with subsets of the remaining pool, deduplicated, stopping once
/// `limit` members were produced. Every emitted set passes the membership
/// test (awareness is preserved under adding sensors); on instances where
/// sensors outside s_reduced jointly overlap the task subspace, some aware
/// sets have no core in the reduced family and are not produced.
std::vector<SensorSet> expand_sitaware(const AwarenessFamily& family,
                                       const model::SensorPool& pool,
                                       std::size_t limit);

std::string family_to_json(const AwarenessFamily& family);

}  // namespace iface::awareness

#endif  // IFACE_AWARENESS_HPP_
