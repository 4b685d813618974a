#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "test_util.hpp"
#include "tivqe/measurement.hpp"
#include "tivqe/simulate.hpp"

using namespace tivqe;
using test::cd;

TEST_CASE("xx(pi/2) on |00> gives (|00> - i|11>)/sqrt2") {
  Circuit c;
  c.n_qubits = 2;
  c.append(Gate::xx(0, 1, std::numbers::pi / 2));
  const auto psi = run_exact(c, {});
  const double r = 1 / std::numbers::sqrt2;
  CHECK(std::abs(psi.amps[0] - cd(r, 0)) < 1e-12);
  CHECK(std::abs(psi.amps[3] - cd(0, -r)) < 1e-12);
  CHECK(std::abs(psi.amps[1]) < 1e-14);
  CHECK(std::abs(psi.amps[2]) < 1e-14);
}

TEST_CASE("xx(0) is the identity") {
  Circuit c;
  c.n_qubits = 2;
  c.append(Gate::xx(0, 1, 0.0));
  const auto u = test::circuit_unitary(c);
  CHECK(test::phase_overlap(u, test::Mat::Identity(4, 4)) == doctest::Approx(1.0));
}

TEST_CASE("random circuits match dense gate products and stay normalized") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> pick(0, 6), wire(0, 5);
  std::uniform_real_distribution<double> ang(-3.0, 3.0);
  for (int rep = 0; rep < 10; ++rep) {
    Circuit c;
    c.n_qubits = 6;
    for (int k = 0; k < 30; ++k) {
      const int w = wire(rng);
      int w2 = wire(rng);
      while (w2 == w) w2 = wire(rng);
      switch (pick(rng)) {
        case 0: c.append(Gate::h(w)); break;
        case 1: c.append(Gate::s(w)); break;
        case 2: c.append(Gate::sdg(w)); break;
        case 3: c.append(Gate::x(w)); break;
        case 4: c.append(Gate::rz(w, ang(rng))); break;
        case 5: c.append(Gate::cnot(w, w2)); break;
        case 6: c.append(Gate::xx(w, w2, ang(rng))); break;
      }
    }
    StateVector psi = StateVector::zero_state(6);
    test::Vec v = test::Vec::Zero(64);
    v(0) = 1.0;
    for (const auto& g : c.gates) {
      apply_gate(psi, g, {});
      Circuit single;
      single.n_qubits = 6;
      single.append(g);
      v = test::circuit_unitary(single) * v;
      CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
    double diff = 0.0;
    for (int i = 0; i < 64; ++i) diff = std::max(diff, std::abs(psi.amps[i] - v(i)));
    CHECK(diff < 1e-12);
  }
}

TEST_CASE("gate-wise inverse returns the input state") {
  std::mt19937_64 rng(7);
  Circuit c;
  c.n_qubits = 4;
  std::uniform_real_distribution<double> ang(-2.0, 2.0);
  c.append(Gate::h(0));
  c.append(Gate::cnot(0, 2));
  c.append(Gate::rz(2, 0.7));
  c.append(Gate::xx(1, 3, ang(rng)));
  c.append(Gate::s(1));

  Circuit inv;
  inv.n_qubits = 4;
  inv.append(Gate::sdg(1));
  inv.append(Gate::xx(1, 3, -c.gates[3].angle));
  inv.append(Gate::rz(2, -0.7));
  inv.append(Gate::cnot(0, 2));
  inv.append(Gate::h(0));

  StateVector psi = StateVector::zero_state(4);
  for (const auto& g : c.gates) apply_gate(psi, g, {});
  for (const auto& g : inv.gates) apply_gate(psi, g, {});
  CHECK(std::abs(psi.amps[0] - cd(1, 0)) < 1e-10);
}

TEST_CASE("expectation matches the dense quadratic form") {
  std::mt19937_64 rng(123);
  const auto ham = test::random_spatial_hamiltonian(2, 2, 17);
  const auto h = jordan_wigner(ham);
  const test::Mat dense = test::hamiltonian_matrix(h);
  for (int rep = 0; rep < 5; ++rep) {
    const test::Vec v = test::random_state(4, rng);
    StateVector psi;
    psi.n_qubits = 4;
    psi.amps.assign(v.data(), v.data() + 16);
    const double want = (v.adjoint() * dense * v)(0).real();
    CHECK(expectation(psi, h) == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("expectation of Z on |0> and |1>") {
  QubitHamiltonian h;
  h.n_qubits = 1;
  PauliString z;
  z.coefficient = 1.0;
  z.z_mask = 1;
  h.terms.push_back(z);
  CHECK(expectation(StateVector::basis_state(1, 0), h) == doctest::Approx(1.0));
  CHECK(expectation(StateVector::basis_state(1, 1), h) == doctest::Approx(-1.0));
}

TEST_CASE("fifty chained small xx gates reach the maximally entangling state") {
  Circuit c;
  c.n_qubits = 2;
  for (int k = 0; k < 50; ++k) c.append(Gate::xx(0, 1, std::numbers::pi / 100));
  const auto psi = run_exact(c, {});
  Circuit one;
  one.n_qubits = 2;
  one.append(Gate::xx(0, 1, std::numbers::pi / 2));
  const auto want = run_exact(one, {});
  double diff = 0.0;
  for (int i = 0; i < 4; ++i) diff = std::max(diff, std::abs(psi.amps[i] - want.amps[i]));
  CHECK(diff < 1e-12);
}

TEST_CASE("spam register channel is the kronecker cube of one qubit") {
  const auto spam = SpamModel::uniform(3, 0.006, 0.013);
  // P(read 000 | prepared 000) = (1-e0)^3
  std::vector<double> p(8, 0.0);
  p[0] = 1.0;
  spam_apply(p, spam);
  CHECK(p[0] == doctest::Approx(std::pow(1 - 0.006, 3)).epsilon(1e-14));
  // explicit kron check against the single-qubit matrix
  Eigen::Matrix2d m1;
  m1 << 1 - 0.006, 0.013, 0.006, 1 - 0.013;
  Eigen::MatrixXd m3 = Eigen::MatrixXd::Ones(1, 1);
  for (int k = 0; k < 3; ++k) {
    Eigen::MatrixXd next(m3.rows() * 2, m3.cols() * 2);
    for (long i = 0; i < m3.rows(); ++i)
      for (long j = 0; j < m3.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = m3(i, j) * m1;
    m3 = next;
  }
  // qubit 0 is the least significant bit, so build with matching order
  for (int prepared = 0; prepared < 8; ++prepared) {
    std::vector<double> e(8, 0.0);
    e[prepared] = 1.0;
    spam_apply(e, spam);
    for (int read = 0; read < 8; ++read) {
      // reverse bit order for the kron convention
      auto rev = [](int b) { return ((b & 1) << 2) | (b & 2) | ((b >> 2) & 1); };
      CHECK(e[read] == doctest::Approx(m3(rev(read), rev(prepared))).epsilon(1e-12));
    }
  }
}

TEST_CASE("sampling converges to the exact distribution") {
  Circuit c;
  c.n_qubits = 2;
  c.append(Gate::h(0));
  c.append(Gate::cnot(0, 1));
  c.append(Gate::rz(1, 0.3));
  c.append(Gate::h(1));
  MeasurementBasis basis;
  basis.rotations = {BasisRot::Z, BasisRot::Z};
  const auto probs = outcome_probabilities(c, {}, basis, nullptr);
  const auto hist = sample_shots(c, {}, basis, 1000000, nullptr, 4242);
  std::vector<double> freq(4, 0.0);
  for (const auto& [bits, cnt] : hist.counts) freq[bits] = double(cnt) / hist.n_shots;
  double tv = 0.0;
  for (int i = 0; i < 4; ++i) tv += std::abs(freq[i] - probs[i]);
  CHECK(tv / 2 < 5e-3);
}

TEST_CASE("sampling is reproducible for a fixed seed") {
  Circuit c;
  c.n_qubits = 3;
  c.append(Gate::h(0));
  c.append(Gate::h(1));
  c.append(Gate::cnot(1, 2));
  MeasurementBasis basis;
  basis.rotations = {BasisRot::Z, BasisRot::X, BasisRot::Y};
  const auto a = sample_shots(c, {}, basis, 5000, nullptr, 99);
  const auto b = sample_shots(c, {}, basis, 5000, nullptr, 99);
  CHECK(a.counts == b.counts);
  const auto other = sample_shots(c, {}, basis, 5000, nullptr, 100);
  CHECK(a.counts != other.counts);
}

TEST_CASE("classical flips act on the sampled bits") {
  Circuit c;
  c.n_qubits = 2;
  c.classical_flips = 0b11;
  MeasurementBasis basis;
  basis.rotations = {BasisRot::Z, BasisRot::Z};
  const auto hist = sample_shots(c, {}, basis, 100, nullptr, 5);
  REQUIRE(hist.counts.size() == 1);
  CHECK(hist.counts[0].first == 0b11);
}
