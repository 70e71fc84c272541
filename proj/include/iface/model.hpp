#ifndef IFACE_MODEL_HPP_
#define IFACE_MODEL_HPP_

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "iface/sensor_set.hpp"

namespace iface::model {

/// Continuous-time LTI plant x' = A x + B u.
struct LtiSystem {
  Eigen::MatrixXd a;  // n x n
  Eigen::MatrixXd b;  // n x m

  int n() const { return static_cast<int>(a.rows()); }
  int m() const { return static_cast<int>(b.cols()); }
};

/// One candidate output row.
struct Sensor {
  int id = 0;
  Eigen::RowVectorXd row;
};

/// Ordered candidate sensors; ids are 0..size-1 in order.
class SensorPool {
 public:
  SensorPool() = default;
  explicit SensorPool(std::vector<Eigen::RowVectorXd> rows);

  int size() const { return static_cast<int>(sensors_.size()); }
  const Sensor& sensor(int id) const;
  const std::vector<Sensor>& sensors() const { return sensors_; }
  SensorSet all() const { return SensorSet::full(size()); }

 private:
  std::vector<Sensor> sensors_;
};

/// Task as the sensors whose outputs must remain reconstructable. The payoff
/// function itself is carried only as a label; selection never evaluates it.
struct Task {
  SensorSet s_task;
  Eigen::MatrixXd c_task;  // |s_task| x n, rows in ascending sensor id order
  std::string label;
};

struct TrustLevel {
  int k_trust = 1;
};

struct Instance {
  LtiSystem system;
  SensorPool pool;
  Task task;
  TrustLevel trust;
};

/// Builds a Task over pool sensors, stacking their rows into c_task.
Task make_task(const SensorPool& pool, const SensorSet& ids,
               std::string label = {});

/// Checks all type invariants and cross-object consistency. Returns one
/// diagnostic string per violated invariant; empty means valid. The trust
/// range check needs Γ(full pool), so it computes the observability blocks.
std::vector<std::string> validate_instance(const LtiSystem& sys,
                                           const SensorPool& pool,
                                           const Task& task,
                                           const TrustLevel& trust);

/// The 4-state jerk-controlled chain with camera heading, its four unit
/// sensors {s_p, s_v, s_a, s_h}, and the velocity task.
Instance build_chain_example(int k_trust = 2);

/// JSON instance files: fields A, B, sensors, task_sensor_ids, k_trust.
Instance load_instance_json(const std::string& text);
Instance load_instance_file(const std::string& path);
std::string instance_to_json(const Instance& inst);

}  // namespace iface::model

#endif  // IFACE_MODEL_HPP_
