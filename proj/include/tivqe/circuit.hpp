#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tivqe {

enum class GateKind : uint8_t { H, S, Sdg, X, Rz, Cnot, Xx };

/// Angle that is either a constant or a variational parameter times a scale.
struct ParamRef {
  int theta_id = -1;  // < 0 means constant
  double scale = 1.0;
  bool bound() const { return theta_id >= 0; }
};

struct Gate {
  GateKind kind;
  int q0 = -1;
  int q1 = -1;         // control for Cnot (q1 = target); partner for Xx
  double angle = 0.0;  // constant angle for Rz / Xx
  ParamRef param;      // overrides angle when bound

  static Gate h(int q) { return {GateKind::H, q, -1, 0.0, {}}; }
  static Gate s(int q) { return {GateKind::S, q, -1, 0.0, {}}; }
  static Gate sdg(int q) { return {GateKind::Sdg, q, -1, 0.0, {}}; }
  static Gate x(int q) { return {GateKind::X, q, -1, 0.0, {}}; }
  static Gate rz(int q, double a) { return {GateKind::Rz, q, -1, a, {}}; }
  static Gate rz(int q, ParamRef p) { return {GateKind::Rz, q, -1, 0.0, p}; }
  static Gate cnot(int control, int target) { return {GateKind::Cnot, control, target, 0.0, {}}; }
  static Gate xx(int a, int b, double ang) { return {GateKind::Xx, a, b, ang, {}}; }
  static Gate xx(int a, int b, ParamRef p) { return {GateKind::Xx, a, b, 0.0, p}; }

  bool single_qubit() const { return kind != GateKind::Cnot && kind != GateKind::Xx; }
  bool entangling() const { return kind == GateKind::Cnot || kind == GateKind::Xx; }
  bool touches(int q) const { return q0 == q || (!single_qubit() && q1 == q); }
  double resolve(std::span<const double> theta) const;
};

struct Circuit {
  int n_qubits = 0;
  std::vector<Gate> gates;
  uint32_t classical_flips = 0;  // bit flips applied to measured bitstrings

  void append(const Gate& g) { gates.push_back(g); }
  void append(const Circuit& other);
  int parameter_count() const;  // 1 + max theta_id referenced, 0 if none
};

struct GateCounts {
  int cnot = 0;            // CNOTs plus maximally entangling XX(|pi/2|)
  int xx_small_angle = 0;  // every other XX
  int single_qubit = 0;
  int entangling_total() const { return cnot + xx_small_angle; }
};

/// XX gates with constant |angle| = pi/2 (mod 2pi) count as CNOT-equivalent
/// entanglers; parameter-bound and smaller-magnitude XX count as small-angle.
GateCounts count_gates(const Circuit& c);

/// Reduce an angle to (-pi, pi].
double normalize_angle(double a);

/// Line-oriented text format, one gate per line:
///   qubits 4
///   h 0
///   rz 2 0.7853981633974483
///   rz 2 t3*-0.25
///   cnot 0 1
///   xx 0 3 t0*0.25
///   flips 0b0101
std::string to_text(const Circuit& c);
Circuit circuit_from_text(const std::string& text);

std::string to_json(const Circuit& c);
Circuit circuit_from_json(const std::string& json_text);

}  // namespace tivqe
