#include "iface/powergrid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "iface/errors.hpp"

namespace iface::powergrid {

namespace {

constexpr int kTaskGeneratorPosition = 27;  // 28th machine, 1-based 28
constexpr double kCouplingTolerance = 1e-9;

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) {
    if (tok.front() == '#') break;
    out.push_back(tok);
  }
  return out;
}

[[noreturn]] void parse_fail(int line_no, const std::string& why) {
  throw DataError("case parse error at line " + std::to_string(line_no) +
                  ": " + why);
}

double parse_real(const std::string& tok, int line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) parse_fail(line_no, "bad number '" + tok + "'");
    return v;
  } catch (const std::exception&) {
    parse_fail(line_no, "bad number '" + tok + "'");
  }
}

int parse_int(const std::string& tok, int line_no) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size()) parse_fail(line_no, "bad integer '" + tok + "'");
    return v;
  } catch (const std::exception&) {
    parse_fail(line_no, "bad integer '" + tok + "'");
  }
}

}  // namespace

PowerCase parse_case(const std::string& text) {
  PowerCase pc;
  enum class Section { kNone, kBus, kBranch, kGen };
  Section section = Section::kNone;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (tokens.size() == 1 &&
        (tokens[0] == "BUS" || tokens[0] == "BRANCH" || tokens[0] == "GEN" ||
         tokens[0] == "END")) {
      if (tokens[0] == "BUS") section = Section::kBus;
      else if (tokens[0] == "BRANCH") section = Section::kBranch;
      else if (tokens[0] == "GEN") section = Section::kGen;
      else section = Section::kNone;
      continue;
    }
    switch (section) {
      case Section::kNone:
        parse_fail(line_no, "data outside of a BUS/BRANCH/GEN section");
      case Section::kBus: {
        if (tokens.size() != 2) parse_fail(line_no, "expected: id type");
        Bus b;
        b.id = parse_int(tokens[0], line_no);
        const int t = parse_int(tokens[1], line_no);
        if (t != 1 && t != 2) parse_fail(line_no, "bus type must be 1 or 2");
        b.type = static_cast<BusType>(t);
        pc.buses.push_back(b);
        break;
      }
      case Section::kBranch: {
        if (tokens.size() != 5)
          parse_fail(line_no, "expected: from to r x status");
        Branch br;
        br.from = parse_int(tokens[0], line_no);
        br.to = parse_int(tokens[1], line_no);
        parse_real(tokens[2], line_no);  // resistance, unused
        br.reactance = parse_real(tokens[3], line_no);
        br.in_service = parse_int(tokens[4], line_no) != 0;
        if (br.reactance <= 0.0)
          parse_fail(line_no, "series reactance must be positive");
        pc.branches.push_back(br);
        break;
      }
      case Section::kGen: {
        if (tokens.size() != 2) parse_fail(line_no, "expected: bus status");
        Generator g;
        g.bus = parse_int(tokens[0], line_no);
        g.in_service = parse_int(tokens[1], line_no) != 0;
        pc.generators.push_back(g);
        break;
      }
    }
  }

  std::map<int, BusType> known;
  for (const Bus& b : pc.buses) {
    if (!known.emplace(b.id, b.type).second)
      throw DataError("duplicate bus id " + std::to_string(b.id));
  }
  for (const Branch& br : pc.branches) {
    for (int endpoint : {br.from, br.to}) {
      if (!known.count(endpoint))
        throw DataError("branch references unknown bus " +
                        std::to_string(endpoint));
    }
    if (br.from == br.to)
      throw DataError("branch loops on bus " + std::to_string(br.from));
  }
  bool any_gen = false;
  for (const Generator& g : pc.generators) {
    auto it = known.find(g.bus);
    if (it == known.end())
      throw DataError("generator references unknown bus " +
                      std::to_string(g.bus));
    if (it->second != BusType::kGenerator)
      throw DataError("generator attached to load-typed bus " +
                      std::to_string(g.bus));
    any_gen = any_gen || g.in_service;
  }
  if (!any_gen) throw DataError("case has no in-service generator");
  return pc;
}

PowerCase parse_case_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open case file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_case(ss.str());
}

int ReducedNetwork::position_of(int bus_id) const {
  const auto it =
      std::find(generator_ids.begin(), generator_ids.end(), bus_id);
  if (it == generator_ids.end()) {
    throw InputError("bus " + std::to_string(bus_id) +
                     " is not a generator of the reduced network");
  }
  return static_cast<int>(it - generator_ids.begin());
}

ReducedNetwork kron_reduce(const PowerCase& pc) {
  // Index all buses; mark generator buses (>= 1 in-service machine).
  std::map<int, int> index;
  for (const Bus& b : pc.buses)
    index.emplace(b.id, static_cast<int>(index.size()));
  const int nb = static_cast<int>(index.size());
  std::vector<bool> is_gen(static_cast<std::size_t>(nb), false);
  ReducedNetwork net;
  for (const Generator& g : pc.generators) {
    if (!g.in_service) continue;
    const int i = index.at(g.bus);
    if (!is_gen[static_cast<std::size_t>(i)]) {
      is_gen[static_cast<std::size_t>(i)] = true;
      net.generator_ids.push_back(g.bus);
    }
  }

  // Susceptance Laplacian over all buses from in-service branches.
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(nb, nb);
  for (const Branch& br : pc.branches) {
    if (!br.in_service) continue;
    const double b = 1.0 / br.reactance;
    const int i = index.at(br.from);
    const int j = index.at(br.to);
    lap(i, i) += b;
    lap(j, j) += b;
    lap(i, j) -= b;
    lap(j, i) -= b;
  }

  const int ng = net.size();
  std::vector<int> gen_pos(static_cast<std::size_t>(nb), -1);
  for (int p = 0; p < ng; ++p)
    gen_pos[static_cast<std::size_t>(index.at(net.generator_ids
                                                  [static_cast<std::size_t>(p)]))] = p;

  net.coupling = Eigen::MatrixXd::Zero(ng, ng);
  for (int i = 0; i < nb; ++i) {
    if (gen_pos[static_cast<std::size_t>(i)] < 0) continue;
    for (int j = 0; j < nb; ++j) {
      if (gen_pos[static_cast<std::size_t>(j)] < 0) continue;
      net.coupling(gen_pos[static_cast<std::size_t>(i)],
                   gen_pos[static_cast<std::size_t>(j)]) = lap(i, j);
    }
  }

  // Connected components of the load-only subgraph.
  std::vector<int> comp(static_cast<std::size_t>(nb), -1);
  int n_comp = 0;
  for (int seed = 0; seed < nb; ++seed) {
    if (is_gen[static_cast<std::size_t>(seed)] ||
        comp[static_cast<std::size_t>(seed)] >= 0)
      continue;
    std::vector<int> stack{seed};
    comp[static_cast<std::size_t>(seed)] = n_comp;
    while (!stack.empty()) {
      const int at = stack.back();
      stack.pop_back();
      for (int other = 0; other < nb; ++other) {
        if (is_gen[static_cast<std::size_t>(other)] ||
            comp[static_cast<std::size_t>(other)] >= 0 ||
            lap(at, other) == 0.0)
          continue;
        comp[static_cast<std::size_t>(other)] = n_comp;
        stack.push_back(other);
      }
    }
    ++n_comp;
  }

  // Eliminate one component at a time; fill-in stays within the generators
  // bordering that component, so unrelated pairs keep an exact zero.
  std::vector<std::vector<int>> members(static_cast<std::size_t>(n_comp));
  for (int i = 0; i < nb; ++i) {
    if (comp[static_cast<std::size_t>(i)] >= 0)
      members[static_cast<std::size_t>(comp[static_cast<std::size_t>(i)])]
          .push_back(i);
  }
  for (const auto& cbuses : members) {
    std::vector<int> border;
    for (int i : cbuses) {
      for (int j = 0; j < nb; ++j) {
        if (gen_pos[static_cast<std::size_t>(j)] >= 0 && lap(i, j) != 0.0 &&
            std::find(border.begin(), border.end(), j) == border.end()) {
          border.push_back(j);
        }
      }
    }
    if (border.empty()) {
      std::string ids;
      for (int i : cbuses) {
        if (!ids.empty()) ids += ", ";
        ids += std::to_string(pc.buses[static_cast<std::size_t>(i)].id);
      }
      throw NumericalError(
          "load buses {" + ids +
          "} form an island with no generator; the interior block is "
          "singular");
    }
    const int nc = static_cast<int>(cbuses.size());
    const int ngb = static_cast<int>(border.size());
    Eigen::MatrixXd y_cc(nc, nc);
    Eigen::MatrixXd y_gc(ngb, nc);
    for (int a = 0; a < nc; ++a) {
      for (int b = 0; b < nc; ++b)
        y_cc(a, b) = lap(cbuses[static_cast<std::size_t>(a)],
                         cbuses[static_cast<std::size_t>(b)]);
      for (int g = 0; g < ngb; ++g)
        y_gc(g, a) = lap(border[static_cast<std::size_t>(g)],
                         cbuses[static_cast<std::size_t>(a)]);
    }
    Eigen::LLT<Eigen::MatrixXd> llt(y_cc);
    if (llt.info() != Eigen::Success) {
      throw NumericalError(
          "interior block of a load component is not positive definite");
    }
    const Eigen::MatrixXd fill = y_gc * llt.solve(y_gc.transpose());
    for (int a = 0; a < ngb; ++a) {
      for (int b = 0; b < ngb; ++b) {
        net.coupling(gen_pos[static_cast<std::size_t>(
                         border[static_cast<std::size_t>(a)])],
                     gen_pos[static_cast<std::size_t>(
                         border[static_cast<std::size_t>(b)])]) -= fill(a, b);
      }
    }
  }
  return net;
}

model::LtiSystem build_swing_lti(const ReducedNetwork& net,
                                 const SwingParams& params,
                                 const SensorSet& active_inputs) {
  if (net.size() < 1) throw InputError("reduced network is empty");
  if (active_inputs.empty())
    throw InputError("at least one input generator must be active");
  if (!active_inputs.subset_of(SensorSet::full(net.size())))
    throw InputError("active input outside the generator range");
  const int g = net.size();
  const double omega_s = 2.0 * std::numbers::pi * params.nominal_frequency;
  const double m = 2.0 * params.inertia_h / omega_s;

  model::LtiSystem sys;
  sys.a = Eigen::MatrixXd::Zero(2 * g, 2 * g);
  sys.a.topRightCorner(g, g) = Eigen::MatrixXd::Identity(g, g);
  sys.a.bottomLeftCorner(g, g) = -net.coupling / m;
  sys.a.bottomRightCorner(g, g) =
      -(params.damping_d / m) * Eigen::MatrixXd::Identity(g, g);

  const auto inputs = active_inputs.ids();
  sys.b = Eigen::MatrixXd::Zero(2 * g, static_cast<Eigen::Index>(inputs.size()));
  for (std::size_t c = 0; c < inputs.size(); ++c) {
    sys.b(g + inputs[c], static_cast<Eigen::Index>(c)) = 1.0 / m;
  }
  return sys;
}

model::SensorPool phase_sensor_pool(const ReducedNetwork& net) {
  const int g = net.size();
  std::vector<Eigen::RowVectorXd> rows;
  rows.reserve(static_cast<std::size_t>(g));
  for (int p = 0; p < g; ++p) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(2 * g);
    row(p) = 1.0;
    rows.push_back(std::move(row));
  }
  return model::SensorPool(std::move(rows));
}

model::Task build_task_for_bus(const ReducedNetwork& net,
                               const model::SensorPool& pool, int bus_id) {
  const int p = net.position_of(bus_id);
  const double scale = net.coupling.cwiseAbs().maxCoeff();
  SensorSet members = SensorSet::single(p);
  for (int q = 0; q < net.size(); ++q) {
    if (q == p) continue;
    if (std::abs(net.coupling(p, q)) > kCouplingTolerance * scale) {
      members.set(q);
    }
  }
  return model::make_task(pool, members,
                          "monitor power flow at bus " +
                              std::to_string(bus_id));
}

GridConfiguration configuration(const PowerCase& pc, const SwingParams& params,
                                int config_id, AlternateParity parity) {
  if (config_id < 1 || config_id > 4) {
    throw InputError("configuration id must be in {1, 2, 3, 4}");
  }
  PowerCase edited = pc;
  if (config_id == 2) {
    constexpr int kDownBus = 38;
    const auto it = std::find_if(
        edited.buses.begin(), edited.buses.end(),
        [&](const Bus& b) { return b.id == kDownBus; });
    if (it == edited.buses.end())
      throw DataError("case has no bus 38 to take down");
    if (it->type != BusType::kLoad)
      throw DataError("bus 38 is not a load bus in this case");
    edited.buses.erase(it);
    std::erase_if(edited.branches, [&](const Branch& br) {
      return br.from == kDownBus || br.to == kDownBus;
    });
  } else if (config_id == 3) {
    bool found = false;
    for (Branch& br : edited.branches) {
      if (br.in_service && ((br.from == 65 && br.to == 66) ||
                            (br.from == 66 && br.to == 65))) {
        br.in_service = false;
        found = true;
        break;
      }
    }
    if (!found) throw DataError("case has no in-service 65-66 branch");
  }

  GridConfiguration grid;
  grid.network = kron_reduce(edited);
  const int g = grid.network.size();

  grid.active_inputs = SensorSet::full(g);
  if (config_id == 4) {
    SensorSet active;
    for (int p = 0; p < g; ++p) {
      const bool odd_position = (p + 1) % 2 == 1;
      if ((parity == AlternateParity::kOdd) == odd_position) active.set(p);
    }
    grid.active_inputs = active;
  }

  grid.system = build_swing_lti(grid.network, params, grid.active_inputs);
  grid.pool = phase_sensor_pool(grid.network);
  if (kTaskGeneratorPosition >= g) {
    throw DataError("reduced network has fewer than 28 generators");
  }
  const int task_bus =
      grid.network.generator_ids[static_cast<std::size_t>(kTaskGeneratorPosition)];
  grid.task = build_task_for_bus(grid.network, grid.pool, task_bus);
  return grid;
}

std::string locate_data_file(const std::string& name) {
  namespace fs = std::filesystem;
  std::vector<fs::path> candidates;
  if (const char* env = std::getenv("IFACE_DATA_DIR")) {
    candidates.emplace_back(fs::path(env) / name);
  }
  candidates.emplace_back(fs::path("data") / name);
  std::error_code ec;
  const fs::path exe = fs::read_symlink("/proc/self/exe", ec);
  if (!ec) {
    for (const char* up : {"..", "../..", "../../.."}) {
      candidates.emplace_back(exe.parent_path() / up / "data" / name);
    }
  }
  for (const auto& c : candidates) {
    if (fs::exists(c, ec)) return c.string();
  }
  throw DataError("cannot locate data file " + name +
                  "; set IFACE_DATA_DIR to the data directory");
}

}  // namespace iface::powergrid
