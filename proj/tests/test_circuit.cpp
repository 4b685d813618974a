#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "test_util.hpp"
#include "tivqe/circuit.hpp"

using namespace tivqe;

TEST_CASE("gate counts classify xx angles") {
  Circuit c;
  c.n_qubits = 3;
  c.append(Gate::h(0));
  c.append(Gate::cnot(0, 1));
  c.append(Gate::xx(0, 1, std::numbers::pi / 2));
  c.append(Gate::xx(0, 2, -std::numbers::pi / 2));
  c.append(Gate::xx(1, 2, 0.03));
  c.append(Gate::xx(1, 2, ParamRef{0, 0.25}));
  const auto counts = count_gates(c);
  CHECK(counts.cnot == 3);  // one CNOT + two maximally entangling XX
  CHECK(counts.xx_small_angle == 2);
  CHECK(counts.single_qubit == 1);
  CHECK(counts.entangling_total() == 5);
}

TEST_CASE("empty circuit counts zero") {
  const auto counts = count_gates(Circuit{});
  CHECK(counts.cnot == 0);
  CHECK(counts.xx_small_angle == 0);
  CHECK(counts.entangling_total() == 0);
}

TEST_CASE("text round trip") {
  Circuit c;
  c.n_qubits = 4;
  c.append(Gate::h(0));
  c.append(Gate::sdg(2));
  c.append(Gate::rz(1, 0.12345678901234));
  c.append(Gate::rz(3, ParamRef{2, -0.25}));
  c.append(Gate::cnot(0, 3));
  c.append(Gate::xx(1, 2, ParamRef{0, 1.0}));
  c.append(Gate::x(3));
  c.classical_flips = 0b0101;

  const Circuit back = circuit_from_text(to_text(c));
  REQUIRE(back.gates.size() == c.gates.size());
  CHECK(back.n_qubits == 4);
  CHECK(back.classical_flips == 0b0101);
  const std::vector<double> theta{0.3, 0.0, -1.1};
  const double overlap =
      test::phase_overlap(test::circuit_unitary(c, theta), test::circuit_unitary(back, theta));
  CHECK(overlap == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("json round trip preserves bindings") {
  Circuit c;
  c.n_qubits = 2;
  c.append(Gate::rz(0, ParamRef{1, 0.5}));
  c.append(Gate::cnot(1, 0));
  c.classical_flips = 0b10;
  const Circuit back = circuit_from_json(to_json(c));
  CHECK(back.gates.size() == 2);
  CHECK(back.gates[0].param.theta_id == 1);
  CHECK(back.gates[0].param.scale == 0.5);
  CHECK(back.classical_flips == 0b10);
  CHECK(back.parameter_count() == 2);
}

TEST_CASE("malformed circuit text is rejected") {
  CHECK_THROWS(circuit_from_text("h 0\n"));                    // missing header
  CHECK_THROWS(circuit_from_text("qubits 2\ncnot 0 0\n"));     // repeated wire
  CHECK_THROWS(circuit_from_text("qubits 2\nfoo 0\n"));        // unknown gate
  CHECK_THROWS(circuit_from_text("qubits 2\ncnot 0 5\n"));     // out of range
}

TEST_CASE("angle normalization lands in (-pi, pi]") {
  CHECK(normalize_angle(3 * std::numbers::pi) == doctest::Approx(std::numbers::pi));
  CHECK(normalize_angle(-3 * std::numbers::pi) == doctest::Approx(std::numbers::pi));
  CHECK(normalize_angle(0.25) == doctest::Approx(0.25));
  CHECK(normalize_angle(2 * std::numbers::pi) == doctest::Approx(0.0));
}
