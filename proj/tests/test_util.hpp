#pragma once

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <span>

#include "tivqe/circuit.hpp"
#include "tivqe/hamiltonian.hpp"
#include "tivqe/simulate.hpp"

namespace tivqe::test {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using cd = std::complex<double>;

/// Unitary of a circuit by driving the simulator with every basis state.
inline Mat circuit_unitary(const Circuit& c, std::span<const double> theta = {}) {
  const long dim = 1L << c.n_qubits;
  Mat u(dim, dim);
  for (long col = 0; col < dim; ++col) {
    StateVector psi = StateVector::basis_state(c.n_qubits, static_cast<uint32_t>(col));
    for (const auto& g : c.gates) apply_gate(psi, g, theta);
    for (long row = 0; row < dim; ++row) u(row, col) = psi.amps[row];
  }
  return u;
}

/// |tr(A^dag B)| / dim -- equals 1 iff A = B up to a global phase.
inline double phase_overlap(const Mat& a, const Mat& b) {
  return std::abs((a.adjoint() * b).trace()) / static_cast<double>(a.rows());
}

inline Mat pauli_matrix(const PauliString& p, int n_qubits) {
  const Mat I2 = Mat::Identity(2, 2);
  Mat X(2, 2), Y(2, 2), Z(2, 2);
  X << 0, 1, 1, 0;
  Y << 0, cd(0, -1), cd(0, 1), 0;
  Z << 1, 0, 0, -1;
  const long dim = 1L << n_qubits;
  Mat out = Mat::Zero(dim, dim);
  for (long col = 0; col < dim; ++col)
    out(col, col) = 1.0;
  // Kronecker by qubit, with qubit 0 the least significant bit.
  Mat acc = Mat::Ones(1, 1);
  for (int q = n_qubits - 1; q >= 0; --q) {
    const Mat* f = &I2;
    if (p.support() >> q & 1) {
      switch (p.op_at(q)) {
        case PauliOp::X: f = &X; break;
        case PauliOp::Y: f = &Y; break;
        case PauliOp::Z: f = &Z; break;
      }
    }
    Mat next(acc.rows() * 2, acc.cols() * 2);
    for (long i = 0; i < acc.rows(); ++i)
      for (long j = 0; j < acc.cols(); ++j)
        next.block(2 * i, 2 * j, 2, 2) = acc(i, j) * (*f);
    acc = next;
  }
  return p.coefficient * acc;
}

inline Mat hamiltonian_matrix(const QubitHamiltonian& h) {
  const long dim = 1L << h.n_qubits;
  Mat out = Mat::Identity(dim, dim) * h.constant;
  for (const auto& t : h.terms) out += pauli_matrix(t, h.n_qubits);
  return out;
}

/// Dense JW images with the sigma_z tail on higher modes, for operator-level
/// oracles (anticommutators, generator exponentials).
inline Mat jw_operator_matrix(int mode, int n_modes, bool dagger) {
  Mat sp(2, 2), sm(2, 2), Z(2, 2);
  sp << 0, 0, 1, 0;  // |1><0|
  sm << 0, 1, 0, 0;
  Z << 1, 0, 0, -1;
  Mat acc = Mat::Ones(1, 1);
  for (int q = n_modes - 1; q >= 0; --q) {
    const Mat* f;
    Mat I2 = Mat::Identity(2, 2);
    if (q == mode) f = dagger ? &sp : &sm;
    else if (q > mode) f = &Z;
    else f = &I2;
    Mat next(acc.rows() * 2, acc.cols() * 2);
    for (long i = 0; i < acc.rows(); ++i)
      for (long j = 0; j < acc.cols(); ++j)
        next.block(2 * i, 2 * j, 2, 2) = acc(i, j) * (*f);
    acc = next;
  }
  return acc;
}

/// Dense matrix of a full molecular Hamiltonian in the JW qubit space.
inline Mat dense_so_hamiltonian(const SpinOrbitalHamiltonian& ham) {
  const int n = ham.n_spin_orbitals();
  const long dim = 1L << n;
  Mat out = Mat::Identity(dim, dim) * ham.e_core();
  for (const auto& t : ham.one_body_terms())
    out += t.coeff * (jw_operator_matrix(t.p, n, true) * jw_operator_matrix(t.q, n, false));
  for (const auto& t : ham.two_body_terms())
    out += t.coeff * (jw_operator_matrix(t.p, n, true) * jw_operator_matrix(t.q, n, true) *
                      jw_operator_matrix(t.r, n, false) * jw_operator_matrix(t.s, n, false));
  return out;
}

inline Vec random_state(int n_qubits, std::mt19937_64& rng) {
  const long dim = 1L << n_qubits;
  std::normal_distribution<double> nd;
  Vec v(dim);
  for (long i = 0; i < dim; ++i) v(i) = cd(nd(rng), nd(rng));
  v.normalize();
  return v;
}

/// Random Hermitian molecular Hamiltonian at the spatial level.
inline SpinOrbitalHamiltonian random_spatial_hamiltonian(int n_spatial, int n_electrons,
                                                         uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  SpinOrbitalHamiltonian ham(n_spatial, n_electrons);
  ham.set_core(ud(rng));
  for (int i = 0; i < n_spatial; ++i)
    for (int j = 0; j <= i; ++j) ham.set_h1(i, j, ud(rng));
  for (int i = 0; i < n_spatial; ++i)
    for (int j = 0; j <= i; ++j)
      for (int k = 0; k <= i; ++k)
        for (int l = 0; l <= k; ++l) ham.set_eri(i, j, k, l, 0.25 * ud(rng));
  return ham;
}

inline std::string data_path(const char* name) {
  return std::string(TIVQE_DATA_DIR) + "/" + name;
}

}  // namespace tivqe::test
