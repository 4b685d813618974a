#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tivqe/pauli.hpp"

namespace tivqe {

struct OneBodyTerm {
  int p, q;  // c+_p c_q
  double coeff;
};

struct TwoBodyTerm {
  int p, q, r, s;  // c+_p c+_q c_r c_s
  double coeff;
};

/// Second-quantized molecular Hamiltonian over spin-orbitals,
///   H = e_core + sum h_pq c+_p c_q + sum h_pqrs c+_p c+_q c_r c_s.
/// Storage is at the spatial-orbital level (h_ij and chemists' (ij|kl) with
/// full 8-fold symmetry); the spin-orbital coefficients are derived views.
/// Spin-orbital indexing is blocked by spin: alpha of MO i is i, beta is
/// i + n_spatial, so a paired excitation moves indices by a fixed offset.
class SpinOrbitalHamiltonian {
 public:
  SpinOrbitalHamiltonian() = default;
  SpinOrbitalHamiltonian(int n_spatial, int n_electrons);

  int n_spatial() const { return n_spatial_; }
  int n_spin_orbitals() const { return 2 * n_spatial_; }
  int n_electrons() const { return n_electrons_; }
  double e_core() const { return e_core_; }

  void set_core(double v) { e_core_ = v; }
  void set_h1(int i, int j, double v);            // symmetric fill
  void set_eri(int i, int j, int k, int l, double v);  // 8-fold fill
  double h1_at(int i, int j) const { return h1_[i * n_spatial_ + j]; }
  double eri_at(int i, int j, int k, int l) const;

  static int spin_of_index(int p, int n_spatial) { return p < n_spatial ? 0 : 1; }
  int spin_of(int p) const { return spin_of_index(p, n_spatial_); }
  int spatial_of(int p) const { return p < n_spatial_ ? p : p - n_spatial_; }
  int so_index(int spatial, int spin) const { return spatial + spin * n_spatial_; }

  /// Spin-orbital coefficient h_pq of c+_p c_q.
  double one_body(int p, int q) const;
  /// Spin-orbital coefficient of c+_p c+_q c_r c_s (zero when p==q or r==s).
  double two_body(int p, int q, int r, int s) const;

  std::vector<OneBodyTerm> one_body_terms(double tol = 1e-14) const;
  std::vector<TwoBodyTerm> two_body_terms(double tol = 1e-14) const;

  /// Closed-shell reference: lowest MOs doubly occupied; an odd electron
  /// count puts the unpaired electron in the next alpha spin-orbital.
  uint64_t hartree_fock_reference() const;

 private:
  int n_spatial_ = 0;
  int n_electrons_ = 0;
  double e_core_ = 0.0;
  std::vector<double> h1_;
  std::vector<double> eri_;
};

struct FcidumpError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parse FCIDUMP-convention text (namelist header with NORB/NELEC/MS2, data
/// lines "value i j k l" with 1-based spatial indices, core energy keyed
/// 0 0 0 0). Orbital-energy records "value i 0 0 0" are tolerated and
/// ignored. Throws FcidumpError naming the offending line.
SpinOrbitalHamiltonian parse_fcidump(const std::string& text);

/// Inverse of parse_fcidump up to line ordering; full precision, so
/// parse(write(parse(text))) reproduces coefficients exactly.
std::string write_fcidump(const SpinOrbitalHamiltonian& ham);

/// Expectation of the Hamiltonian in the determinant `reference` (bitmask
/// over spin-orbitals). Throws if the particle number disagrees.
double hf_energy(const SpinOrbitalHamiltonian& ham, uint64_t reference);

/// Frozen-core contraction plus removal of empty orbitals. `frozen` MOs are
/// folded into e_core and the one-body coefficients; `dropped` MOs are
/// removed outright. Remaining MOs are reindexed in ascending order.
SpinOrbitalHamiltonian select_orbitals(const SpinOrbitalHamiltonian& ham,
                                       const std::vector<int>& frozen,
                                       const std::vector<int>& dropped);

/// Jordan-Wigner transform with the sigma_z tail on higher indices. Like
/// strings are merged, imaginary residues below 1e-12 discarded, and the
/// identity component absorbed into the constant.
QubitHamiltonian jordan_wigner(const SpinOrbitalHamiltonian& ham);
QubitHamiltonian jordan_wigner(const SpinOrbitalHamiltonian& ham,
                               const std::vector<int>& mode_position);

}  // namespace tivqe
