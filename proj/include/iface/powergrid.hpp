#ifndef IFACE_POWERGRID_HPP_
#define IFACE_POWERGRID_HPP_

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "iface/model.hpp"
#include "iface/sensor_set.hpp"

namespace iface::powergrid {

enum class BusType { kLoad = 1, kGenerator = 2 };

struct Bus {
  int id = 0;
  BusType type = BusType::kLoad;
};

struct Branch {
  int from = 0;
  int to = 0;
  double reactance = 0.0;  // series reactance, p.u.; susceptance is 1/x
  bool in_service = true;
};

struct Generator {
  int bus = 0;
  bool in_service = true;
};

struct PowerCase {
  std::vector<Bus> buses;
  std::vector<Branch> branches;
  std::vector<Generator> generators;
};

/// Parses the bundled plain-text case format:
///   BUS sections of "id type", BRANCH sections of "from to r x status",
///   GEN sections of "bus status"; '#' starts a comment.
/// Resistance is carried by the file for provenance but ignored here.
PowerCase parse_case(const std::string& text);
PowerCase parse_case_file(const std::string& path);

/// Generator-only equivalent network. generator_ids holds the original bus
/// ids of in-service machines in file order; coupling is the Kron-reduced
/// susceptance Laplacian over those generators.
struct ReducedNetwork {
  std::vector<int> generator_ids;
  Eigen::MatrixXd coupling;

  int size() const { return static_cast<int>(generator_ids.size()); }
  /// Position of a bus id within generator_ids; throws for unknown buses.
  int position_of(int bus_id) const;
};

/// Schur-complement elimination of the load buses, performed one connected
/// load component at a time so decoupled generator pairs keep an exact zero.
/// A load component with no path to any generator is reported as an error.
ReducedNetwork kron_reduce(const PowerCase& pc);

struct SwingParams {
  double inertia_h = 2.656;        // seconds
  double damping_d = 2.0;          // per-unit
  double nominal_frequency = 60.0; // Hz
};

/// Linearized swing dynamics over the reduced network: states are generator
/// phases followed by phase rates, inputs inject power at the chosen
/// generators. M = 2H/omega_s uniformly across machines.
model::LtiSystem build_swing_lti(const ReducedNetwork& net,
                                 const SwingParams& params,
                                 const SensorSet& active_inputs);

/// One unit phase sensor per generator, in network order.
model::SensorPool phase_sensor_pool(const ReducedNetwork& net);

/// Phase sensors of all generators coupled to the given bus in the reduced
/// network, the bus's own sensor included.
model::Task build_task_for_bus(const ReducedNetwork& net,
                               const model::SensorPool& pool, int bus_id);

enum class AlternateParity { kOdd, kEven };  // 1-based generator positions

struct GridConfiguration {
  model::LtiSystem system;
  model::SensorPool pool;
  model::Task task;
  ReducedNetwork network;
  SensorSet active_inputs;
};

/// The four benchmark configurations: 1 normal operation, 2 load bus 38
/// removed, 3 one 65-66 branch out, 4 inputs only at alternate generators.
/// The monitored substation is the 28th generator of the reduced network.
GridConfiguration configuration(const PowerCase& pc, const SwingParams& params,
                                int config_id,
                                AlternateParity parity = AlternateParity::kOdd);

/// Resolves a bundled data file: $IFACE_DATA_DIR, ./data, then exe-relative.
std::string locate_data_file(const std::string& name);

}  // namespace iface::powergrid

#endif  // IFACE_POWERGRID_HPP_
