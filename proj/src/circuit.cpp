#include "tivqe/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace tivqe {

double Gate::resolve(std::span<const double> theta) const {
  if (!param.bound()) return angle;
  if (param.theta_id >= static_cast<int>(theta.size()))
    throw std::out_of_range("gate references theta_" + std::to_string(param.theta_id) +
                            " but only " + std::to_string(theta.size()) +
                            " parameters were given");
  return param.scale * theta[param.theta_id];
}

void Circuit::append(const Circuit& other) {
  gates.insert(gates.end(), other.gates.begin(), other.gates.end());
}

int Circuit::parameter_count() const {
  int n = 0;
  for (const auto& g : gates)
    if (g.param.bound()) n = std::max(n, g.param.theta_id + 1);
  return n;
}

double normalize_angle(double a) {
  a = std::fmod(a, 2 * std::numbers::pi);
  if (a <= -std::numbers::pi) a += 2 * std::numbers::pi;
  if (a > std::numbers::pi) a -= 2 * std::numbers::pi;
  return a;
}

GateCounts count_gates(const Circuit& c) {
  GateCounts out;
  for (const auto& g : c.gates) {
    switch (g.kind) {
      case GateKind::Cnot:
        ++out.cnot;
        break;
      case GateKind::Xx:
        if (!g.param.bound() &&
            std::abs(std::abs(normalize_angle(g.angle)) - std::numbers::pi / 2) < 1e-12)
          ++out.cnot;
        else
          ++out.xx_small_angle;
        break;
      default:
        ++out.single_qubit;
    }
  }
  return out;
}

namespace {

std::string angle_token(const Gate& g) {
  char buf[64];
  if (g.param.bound()) {
    std::snprintf(buf, sizeof buf, "t%d*%.17g", g.param.theta_id, g.param.scale);
  } else {
    std::snprintf(buf, sizeof buf, "%.17g", g.angle);
  }
  return buf;
}

void parse_angle_token(const std::string& tok, Gate& g, int line_no) {
  if (!tok.empty() && tok[0] == 't') {
    const auto star = tok.find('*');
    if (star == std::string::npos)
      throw std::runtime_error("circuit line " + std::to_string(line_no) +
                               ": bad parameter token " + tok);
    g.param.theta_id = std::stoi(tok.substr(1, star - 1));
    g.param.scale = std::stod(tok.substr(star + 1));
  } else {
    g.angle = std::stod(tok);
  }
}

}  // namespace

std::string to_text(const Circuit& c) {
  std::string out = "qubits " + std::to_string(c.n_qubits) + "\n";
  for (const auto& g : c.gates) {
    switch (g.kind) {
      case GateKind::H: out += "h " + std::to_string(g.q0); break;
      case GateKind::S: out += "s " + std::to_string(g.q0); break;
      case GateKind::Sdg: out += "sdg " + std::to_string(g.q0); break;
      case GateKind::X: out += "x " + std::to_string(g.q0); break;
      case GateKind::Rz:
        out += "rz " + std::to_string(g.q0) + " " + angle_token(g);
        break;
      case GateKind::Cnot:
        out += "cnot " + std::to_string(g.q0) + " " + std::to_string(g.q1);
        break;
      case GateKind::Xx:
        out += "xx " + std::to_string(g.q0) + " " + std::to_string(g.q1) + " " +
               angle_token(g);
        break;
    }
    out += "\n";
  }
  if (c.classical_flips) {
    std::string bits;
    for (int q = c.n_qubits - 1; q >= 0; --q)
      bits += (c.classical_flips >> q & 1) ? '1' : '0';
    out += "flips 0b" + bits + "\n";
  }
  return out;
}

Circuit circuit_from_text(const std::string& text) {
  Circuit c;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string op;
    if (!(ls >> op)) continue;
    if (op == "#") continue;
    if (op == "qubits") {
      ls >> c.n_qubits;
      saw_header = true;
      continue;
    }
    if (!saw_header)
      throw std::runtime_error("circuit text must start with a qubits line");
    if (op == "flips") {
      std::string bits;
      ls >> bits;
      if (bits.rfind("0b", 0) == 0) bits = bits.substr(2);
      uint32_t mask = 0;
      for (char ch : bits) mask = (mask << 1) | (ch == '1' ? 1u : 0u);
      c.classical_flips = mask;
      continue;
    }
    Gate g{GateKind::H};
    std::string tok;
    if (op == "h" || op == "s" || op == "sdg" || op == "x") {
      g.kind = op == "h" ? GateKind::H
               : op == "s" ? GateKind::S
               : op == "sdg" ? GateKind::Sdg
                             : GateKind::X;
      ls >> g.q0;
    } else if (op == "rz") {
      g.kind = GateKind::Rz;
      ls >> g.q0 >> tok;
      parse_angle_token(tok, g, line_no);
    } else if (op == "cnot") {
      g.kind = GateKind::Cnot;
      ls >> g.q0 >> g.q1;
    } else if (op == "xx") {
      g.kind = GateKind::Xx;
      ls >> g.q0 >> g.q1 >> tok;
      parse_angle_token(tok, g, line_no);
    } else {
      throw std::runtime_error("circuit line " + std::to_string(line_no) +
                               ": unknown gate " + op);
    }
    if (ls.fail() || g.q0 < 0 || g.q0 >= c.n_qubits ||
        (!g.single_qubit() && (g.q1 < 0 || g.q1 >= c.n_qubits || g.q1 == g.q0)))
      throw std::runtime_error("circuit line " + std::to_string(line_no) +
                               ": malformed gate");
    c.append(g);
  }
  return c;
}

std::string to_json(const Circuit& c) {
  nlohmann::json j;
  j["n_qubits"] = c.n_qubits;
  j["classical_flips"] = c.classical_flips;
  auto& gates = j["gates"] = nlohmann::json::array();
  static const char* names[] = {"h", "s", "sdg", "x", "rz", "cnot", "xx"};
  for (const auto& g : c.gates) {
    nlohmann::json gj;
    gj["gate"] = names[static_cast<int>(g.kind)];
    gj["q"] = g.single_qubit() ? nlohmann::json::array({g.q0})
                               : nlohmann::json::array({g.q0, g.q1});
    if (g.kind == GateKind::Rz || g.kind == GateKind::Xx) {
      if (g.param.bound()) {
        gj["theta_id"] = g.param.theta_id;
        gj["scale"] = g.param.scale;
      } else {
        gj["angle"] = g.angle;
      }
    }
    gates.push_back(gj);
  }
  return j.dump(2);
}

Circuit circuit_from_json(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text);
  Circuit c;
  c.n_qubits = j.at("n_qubits").get<int>();
  c.classical_flips = j.value("classical_flips", 0u);
  for (const auto& gj : j.at("gates")) {
    const std::string name = gj.at("gate").get<std::string>();
    const auto& q = gj.at("q");
    Gate g{GateKind::H};
    if (name == "h") g.kind = GateKind::H;
    else if (name == "s") g.kind = GateKind::S;
    else if (name == "sdg") g.kind = GateKind::Sdg;
    else if (name == "x") g.kind = GateKind::X;
    else if (name == "rz") g.kind = GateKind::Rz;
    else if (name == "cnot") g.kind = GateKind::Cnot;
    else if (name == "xx") g.kind = GateKind::Xx;
    else throw std::runtime_error("unknown gate in json: " + name);
    g.q0 = q.at(0).get<int>();
    if (q.size() > 1) g.q1 = q.at(1).get<int>();
    if (gj.contains("theta_id")) {
      g.param.theta_id = gj.at("theta_id").get<int>();
      g.param.scale = gj.at("scale").get<double>();
    } else if (gj.contains("angle")) {
      g.angle = gj.at("angle").get<double>();
    }
    c.append(g);
  }
  return c;
}

}  // namespace tivqe
