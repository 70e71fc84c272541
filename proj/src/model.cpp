#include "iface/model.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "iface/errors.hpp"
#include "iface/uii.hpp"

namespace iface::model {

SensorPool::SensorPool(std::vector<Eigen::RowVectorXd> rows) {
  sensors_.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    sensors_.push_back({static_cast<int>(i), std::move(rows[i])});
  }
}

const Sensor& SensorPool::sensor(int id) const {
  if (id < 0 || id >= size()) {
    throw InputError("sensor id " + std::to_string(id) +
                     " outside pool of size " + std::to_string(size()));
  }
  return sensors_[static_cast<std::size_t>(id)];
}

Task make_task(const SensorPool& pool, const SensorSet& ids,
               std::string label) {
  Task t;
  t.s_task = ids;
  t.label = std::move(label);
  const auto id_list = ids.ids();
  const int n = pool.size() > 0 ? static_cast<int>(pool.sensor(0).row.cols()) : 0;
  t.c_task.resize(static_cast<Eigen::Index>(id_list.size()), n);
  for (std::size_t r = 0; r < id_list.size(); ++r) {
    t.c_task.row(static_cast<Eigen::Index>(r)) = pool.sensor(id_list[r]).row;
  }
  return t;
}

std::vector<std::string> validate_instance(const LtiSystem& sys,
                                           const SensorPool& pool,
                                           const Task& task,
                                           const TrustLevel& trust) {
  std::vector<std::string> out;
  const int n = sys.n();
  if (n < 1) out.push_back("state dimension must be at least 1");
  if (sys.a.rows() != sys.a.cols()) out.push_back("A is not square");
  if (!sys.a.allFinite()) out.push_back("A has non-finite entries");
  if (sys.b.rows() != sys.a.rows())
    out.push_back("B row count does not match the state dimension");
  if (sys.b.cols() < 1) out.push_back("input dimension must be at least 1");
  if (!sys.b.allFinite()) out.push_back("B has non-finite entries");

  if (pool.size() < 1) out.push_back("sensor pool is empty");
  if (pool.size() > SensorSet::kMaxBits)
    out.push_back("sensor pool exceeds the supported width of 128");
  for (const Sensor& s : pool.sensors()) {
    if (s.row.cols() != n)
      out.push_back("sensor " + std::to_string(s.id) +
                    " row length does not match the state dimension");
    else if (!s.row.allFinite())
      out.push_back("sensor " + std::to_string(s.id) +
                    " row has non-finite entries");
    else if (s.row.isZero(0.0))
      out.push_back("sensor " + std::to_string(s.id) + " row is zero");
  }
  if (!out.empty()) return out;

  if (task.s_task.empty()) out.push_back("task sensor set is empty");
  if (!task.s_task.subset_of(pool.all()))
    out.push_back("task references a sensor id outside the pool");
  if (!out.empty()) return out;

  const auto ids = task.s_task.ids();
  if (task.c_task.rows() != static_cast<Eigen::Index>(ids.size()) ||
      task.c_task.cols() != n) {
    out.push_back("C_task shape does not match the task sensor set");
  } else {
    for (std::size_t r = 0; r < ids.size(); ++r) {
      if (task.c_task.row(static_cast<Eigen::Index>(r)) !=
          pool.sensor(ids[r]).row) {
        out.push_back("C_task row " + std::to_string(r) +
                      " differs from sensor " + std::to_string(ids[r]));
      }
    }
  }
  if (!out.empty()) return out;

  uii::GammaOracle oracle(sys, pool);
  const int gamma_full = oracle.gamma(pool.all());
  if (trust.k_trust < 1 || trust.k_trust > gamma_full) {
    out.push_back("k_trust exceeds Γ(𝒮)=" + std::to_string(gamma_full) +
                  "; legal interval is [1, " + std::to_string(gamma_full) +
                  "]");
  }
  return out;
}

Instance build_chain_example(int k_trust) {
  Instance inst;
  inst.system.a = Eigen::MatrixXd::Zero(4, 4);
  inst.system.a(0, 1) = 1.0;
  inst.system.a(1, 2) = 1.0;
  inst.system.b = Eigen::MatrixXd::Zero(4, 2);
  inst.system.b(2, 0) = 1.0;
  inst.system.b(3, 1) = 1.0;

  std::vector<Eigen::RowVectorXd> rows(4, Eigen::RowVectorXd::Zero(4));
  rows[0](0) = 1.0;  // s_p
  rows[1](1) = 1.0;  // s_v
  rows[2](2) = 1.0;  // s_a
  rows[3](3) = 1.0;  // s_h
  inst.pool = SensorPool(std::move(rows));

  inst.task = make_task(inst.pool, SensorSet::single(1),
                        "keep velocity above the minimum speed");
  inst.trust.k_trust = k_trust;
  return inst;
}

namespace {

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, const char* field) {
  if (!j.is_array())
    throw DataError(std::string("instance field ") + field +
                    " must be an array of rows");
  const auto rows = j.size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows),
                    rows == 0 ? 0 : static_cast<Eigen::Index>(j[0].size()));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() ||
        j[r].size() != static_cast<std::size_t>(m.cols()))
      throw DataError(std::string("instance field ") + field +
                      " has ragged rows");
    for (std::size_t c = 0; c < j[r].size(); ++c) {
      if (!j[r][c].is_number())
        throw DataError(std::string("instance field ") + field +
                        " has a non-numeric entry");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          j[r][c].get<double>();
    }
  }
  return m;
}

}  // namespace

Instance load_instance_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("instance JSON parse error: ") + e.what());
  }
  for (const char* field : {"A", "B", "sensors", "task_sensor_ids", "k_trust"})
    if (!j.contains(field))
      throw DataError(std::string("instance JSON missing field ") + field);

  Instance inst;
  inst.system.a = matrix_from_json(j["A"], "A");
  inst.system.b = matrix_from_json(j["B"], "B");
  const Eigen::MatrixXd sensor_rows = matrix_from_json(j["sensors"], "sensors");
  std::vector<Eigen::RowVectorXd> rows;
  rows.reserve(static_cast<std::size_t>(sensor_rows.rows()));
  for (Eigen::Index r = 0; r < sensor_rows.rows(); ++r)
    rows.push_back(sensor_rows.row(r));
  inst.pool = SensorPool(std::move(rows));

  SensorSet ids;
  if (!j["task_sensor_ids"].is_array())
    throw DataError("instance field task_sensor_ids must be an array");
  for (const auto& v : j["task_sensor_ids"]) {
    if (!v.is_number_integer())
      throw DataError("task_sensor_ids entries must be integers");
    const int id = v.get<int>();
    if (id < 0 || id >= inst.pool.size())
      throw DataError("task sensor id " + std::to_string(id) +
                      " outside pool of size " +
                      std::to_string(inst.pool.size()));
    ids.set(id);
  }
  inst.task = make_task(inst.pool, ids, j.value("label", std::string{}));
  if (!j["k_trust"].is_number_integer())
    throw DataError("instance field k_trust must be an integer");
  inst.trust.k_trust = j["k_trust"].get<int>();

  const auto diags = validate_instance(inst.system, inst.pool, inst.task,
                                       inst.trust);
  if (!diags.empty()) {
    std::string msg = "invalid instance:";
    for (const auto& d : diags) msg += "\n  - " + d;
    throw DataError(msg);
  }
  return inst;
}

Instance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open instance file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_instance_json(ss.str());
}

std::string instance_to_json(const Instance& inst) {
  nlohmann::json j;
  auto matrix_to_json = [](const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  j["A"] = matrix_to_json(inst.system.a);
  j["B"] = matrix_to_json(inst.system.b);
  nlohmann::json sensors = nlohmann::json::array();
  for (const Sensor& s : inst.pool.sensors()) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < s.row.cols(); ++c) row.push_back(s.row(c));
    sensors.push_back(std::move(row));
  }
  j["sensors"] = std::move(sensors);
  j["task_sensor_ids"] = inst.task.s_task.ids();
  j["k_trust"] = inst.trust.k_trust;
  if (!inst.task.label.empty()) j["label"] = inst.task.label;
  return j.dump(2);
}

}  // namespace iface::model
