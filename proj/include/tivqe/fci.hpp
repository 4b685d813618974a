#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "tivqe/hamiltonian.hpp"

namespace tivqe {

namespace det {

/// Fermionic sign convention matching the Jordan-Wigner tail on higher
/// indices: applying c_p or c+_p picks up the parity of occupied modes above p.
inline double sign_above(uint64_t mask, int p) {
  return (std::popcount(mask >> (p + 1)) & 1) ? -1.0 : 1.0;
}

struct Applied {
  uint64_t mask;
  double sign;
};

inline std::optional<Applied> annihilate(uint64_t mask, int p) {
  if (!(mask >> p & 1)) return std::nullopt;
  return Applied{mask & ~(uint64_t{1} << p), sign_above(mask, p)};
}

inline std::optional<Applied> create(uint64_t mask, int p) {
  if (mask >> p & 1) return std::nullopt;
  return Applied{mask | (uint64_t{1} << p), sign_above(mask, p)};
}

}  // namespace det

/// Fixed-particle-number determinant list; restricted to S_z = 0 when the
/// electron count is even. Sorted ascending.
std::vector<uint64_t> determinant_basis(int n_spatial, int n_electrons);

struct FciOptions {
  double residual_tol = 1e-10;
  int max_iterations = 500;
  int max_krylov = 120;
};

struct FciError : std::runtime_error {
  double best_residual;
  FciError(const std::string& what, double residual)
      : std::runtime_error(what), best_residual(residual) {}
};

struct FciSolution {
  double energy = 0.0;
  std::vector<uint64_t> basis;
  std::vector<double> amplitudes;
  double amplitude_of(uint64_t determinant) const;
};

/// Lowest eigenpair of the Hamiltonian in the determinant space, by Lanczos
/// iteration with full reorthogonalization. The start vector is the
/// determinant with the lowest diagonal energy (the Hartree-Fock determinant
/// for energy-ordered orbitals), so a degenerate ground space resolves to the
/// component reachable from it.
FciSolution fci_ground_state(const SpinOrbitalHamiltonian& ham, FciOptions opts = {});

enum class ExcitationKind { Bosonic, NonBosonic };

struct RankedExcitation {
  int p, q, r, s;  // c+_p c+_q c_r c_s mapping the reference to the determinant
  double amplitude;
  ExcitationKind kind;
};

/// Double excitations out of `reference`, sorted by descending |FCI
/// amplitude| with lexicographic (p,q,r,s) tie-break. Canonical index order:
/// p < q are the created modes, s < r the annihilated ones, so a paired
/// (bosonic) excitation reads c+_{k,a} c+_{k,b} c_{j,b} c_{j,a}.
std::vector<RankedExcitation> rank_excitations(const FciSolution& fci,
                                               uint64_t reference, size_t limit,
                                               int n_spatial);

/// Dense Hamiltonian matrix over an explicit determinant list (row-major,
/// dimension basis.size()^2). Small spaces only; used by solver internals
/// and as an independent check.
std::vector<double> determinant_matrix(const SpinOrbitalHamiltonian& ham,
                                       const std::vector<uint64_t>& basis);

}  // namespace tivqe
