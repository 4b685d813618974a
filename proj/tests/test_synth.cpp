#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>
#include <numbers>
#include <random>

#include "test_util.hpp"
#include "tivqe/passes.hpp"
#include "tivqe/synth.hpp"

using namespace tivqe;
using test::Mat;

namespace {

/// Register where every spin-orbital has its own wire in natural order.
AnsatzSpec direct_spec(int n_so, uint64_t reference = 0) {
  AnsatzSpec s;
  s.n_spatial = n_so / 2;
  s.reference = reference;
  s.n_qubits = n_so;
  s.mo_qubit.assign(s.n_spatial, -1);
  s.ancilla_qubit.assign(s.n_spatial, -1);
  s.mo_pair_encoded.assign(s.n_spatial, 0);
  s.so_qubit.resize(n_so);
  s.so_position.resize(n_so);
  for (int i = 0; i < n_so; ++i) {
    s.so_qubit[i] = i;
    s.so_position[i] = i;
  }
  return s;
}

Mat dense_double_excitation(int p, int q, int r, int s, double theta, int n_so) {
  const Mat t = test::jw_operator_matrix(p, n_so, true) *
                test::jw_operator_matrix(q, n_so, true) *
                test::jw_operator_matrix(r, n_so, false) *
                test::jw_operator_matrix(s, n_so, false);
  const Mat gen = theta * (t - t.adjoint());
  return gen.exp();
}

Mat dense_bosonic(double theta) {
  // exp[theta (s+_1 s-_0 - h.c.)] on two qubits, qubit 0 least significant
  Mat sp(2, 2), sm(2, 2);
  sp << 0, 0, 1, 0;
  sm << 0, 1, 0, 0;
  auto kron2 = [](const Mat& hi, const Mat& lo) {
    Mat out(4, 4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out.block(2 * i, 2 * j, 2, 2) = hi(i, j) * lo;
    return out;
  };
  const Mat gen = theta * (kron2(sp, sm) - kron2(sm, sp));
  return gen.exp();
}

}  // namespace

TEST_CASE("bosonic template: two entanglers, identity at zero") {
  const Circuit c = synth_bosonic(1, 0, ParamRef{0, 1.0});
  CHECK(count_gates(c).entangling_total() == 2);
  CHECK(count_gates(c).cnot == 0);

  const std::vector<double> zero{0.0};
  CHECK(test::phase_overlap(test::circuit_unitary(c, zero), Mat::Identity(4, 4)) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bosonic template matches the dense pair-exchange generator") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(-1.5, 1.5);
  const Circuit c = synth_bosonic(1, 0, ParamRef{0, 1.0});
  for (int rep = 0; rep < 100; ++rep) {
    const double theta = ang(rng);
    const std::vector<double> th{theta};
    const Mat u = test::circuit_unitary(c, th);
    CHECK(test::phase_overlap(u, dense_bosonic(theta)) ==
          doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("bosonic pi/2 swaps the pair populations") {
  const Circuit c = synth_bosonic(1, 0, ParamRef{0, 1.0});
  const std::vector<double> th{std::numbers::pi / 2};
  StateVector psi = StateVector::basis_state(2, 0b01);  // source filled
  for (const auto& g : c.gates) apply_gate(psi, g, th);
  CHECK(std::abs(psi.amps[0b10]) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pauli exponential: star shape and CNOT budget") {
  PauliString zzzz;
  zzzz.coefficient = 1.0;
  zzzz.z_mask = 0b1111;
  const Circuit c = synth_pauli_exponential(zzzz, 0.37, 3, 4);
  const auto counts = count_gates(c);
  CHECK(counts.cnot == 6);
  int rz = 0;
  for (const auto& g : c.gates) rz += g.kind == GateKind::Rz;
  CHECK(rz == 1);

  PauliString z1;
  z1.coefficient = 1.0;
  z1.z_mask = 0b1;
  const Circuit single = synth_pauli_exponential(z1, 0.81, 0, 1);
  CHECK(count_gates(single).entangling_total() == 0);
  CHECK(single.gates.size() == 1);
}

TEST_CASE("pauli exponential matches exp(-i a P/2) for any target choice") {
  PauliString xyz;
  xyz.coefficient = 1.0;
  xyz.x_mask = 0b011;  // X0, Y1
  xyz.z_mask = 0b110;  // Y1, Z2
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ang(-2.0, 2.0);
  for (int target : {0, 1, 2}) {
    const double a = ang(rng);
    const Circuit c = synth_pauli_exponential(xyz, a, target, 3);
    const Mat p = test::pauli_matrix(xyz, 3);
    const Mat gen = std::complex<double>(0, -a / 2) * p;
    const Mat want = gen.exp();
    CHECK(test::phase_overlap(test::circuit_unitary(c), want) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  PauliString z0;
  z0.coefficient = 1.0;
  z0.z_mask = 1;
  CHECK_THROWS_AS(synth_pauli_exponential(z0, 0.1, 1, 2), std::invalid_argument);
}

TEST_CASE("non-bosonic template: 13 CNOTs and 8 rotations, identity at zero") {
  const auto spec = direct_spec(4);
  ExcitationTerm t;
  t.kind = ExcitationKind::NonBosonic;
  t.p = 2; t.q = 3; t.r = 1; t.s = 0;
  t.parameter_id = 0;
  const Circuit c = synth_nonbosonic(t, spec, ParamRef{0, 1.0});

  const auto counts = count_gates(c);
  CHECK(counts.cnot == 13);
  CHECK(counts.xx_small_angle == 0);
  int rz = 0;
  for (const auto& g : c.gates) rz += (g.kind == GateKind::Rz && g.param.bound());
  CHECK(rz == 8);

  const std::vector<double> zero{0.0};
  CHECK(test::phase_overlap(test::circuit_unitary(c, zero), Mat::Identity(16, 16)) ==
        doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("non-bosonic template matches the dense generator exponential") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> ang(-0.3, 0.3);
  int checked = 0;
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<int> modes{0, 1, 2, 3, 4, 5};
    std::shuffle(modes.begin(), modes.end(), rng);
    ExcitationTerm t;
    t.kind = ExcitationKind::NonBosonic;
    t.p = std::min(modes[0], modes[1]);
    t.q = std::max(modes[0], modes[1]);
    t.r = std::max(modes[2], modes[3]);
    t.s = std::min(modes[2], modes[3]);
    t.parameter_id = 0;

    const auto spec = direct_spec(6);
    const Circuit c = synth_nonbosonic(t, spec, ParamRef{0, 1.0});
    const double theta = ang(rng);
    const std::vector<double> th{theta};
    const Mat u = test::circuit_unitary(c, th);
    const Mat want = dense_double_excitation(t.p, t.q, t.r, t.s, theta, 6);
    CHECK(test::phase_overlap(u, want) == doctest::Approx(1.0).epsilon(1e-10));
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("jw string adds one CNOT ladder pair per string wire") {
  const auto spec = direct_spec(8);
  ExcitationTerm t;
  t.kind = ExcitationKind::NonBosonic;
  t.p = 5; t.q = 7; t.r = 2; t.s = 0;  // strings over modes 1 and 6
  t.parameter_id = 0;
  const Circuit c = synth_nonbosonic(t, spec, ParamRef{0, 1.0});
  CHECK(count_gates(c).cnot == 13 + 2 * 2);

  const double theta = 0.21;
  const std::vector<double> th{theta};
  CHECK(test::phase_overlap(test::circuit_unitary(c, th),
                            dense_double_excitation(5, 7, 2, 0, theta, 8)) ==
        doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("trotter scales per term sum to one") {
  AnsatzSpec spec;
  spec.terms.resize(3);
  for (auto cfg : {TrotterConfig{1, 1}, TrotterConfig{1, 4}, TrotterConfig{2, 1},
                   TrotterConfig{2, 3}, TrotterConfig{4, 2}}) {
    const auto slices = trotterize(spec, cfg);
    std::vector<double> sums(3, 0.0);
    for (const auto& s : slices) sums[s.term_index] += s.scale;
    for (double v : sums) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(trotterize(spec, TrotterConfig{3, 1}), std::invalid_argument);
  CHECK_THROWS_AS(trotterize(spec, TrotterConfig{1, 0}), std::invalid_argument);
}

TEST_CASE("first-order trotter is the plain term list; second order palindromes") {
  AnsatzSpec spec;
  spec.terms.resize(2);
  const auto one = trotterize(spec, {1, 1});
  REQUIRE(one.size() == 2);
  CHECK(one[0].term_index == 0);
  CHECK(one[1].term_index == 1);
  CHECK(one[0].scale == 1.0);

  const auto two = trotterize(spec, {1, 2});
  REQUIRE(two.size() == 4);
  CHECK(two[0].scale == doctest::Approx(0.5));
  CHECK(two[2].term_index == 0);

  const auto palindrome = trotterize(spec, {2, 1});
  REQUIRE(palindrome.size() == 4);
  CHECK(palindrome[0].term_index == 0);
  CHECK(palindrome[1].term_index == 1);
  CHECK(palindrome[2].term_index == 1);
  CHECK(palindrome[3].term_index == 0);
  CHECK(palindrome[0].scale == doctest::Approx(0.5));
}
