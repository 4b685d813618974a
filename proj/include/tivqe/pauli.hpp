#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace tivqe {

enum class PauliOp : uint8_t { X, Y, Z };

/// One Pauli string with a real coefficient. Letters are packed in two bit
/// masks: x and z bit set -> Y, x only -> X, z only -> Z. Identity factors
/// are simply absent from both masks.
struct PauliString {
  double coefficient = 0.0;
  uint32_t x_mask = 0;
  uint32_t z_mask = 0;

  uint32_t support() const { return x_mask | z_mask; }
  int weight() const;
  PauliOp op_at(int q) const;
  std::map<int, PauliOp> factors() const;
  std::string to_string(int n_qubits) const;

  friend bool operator==(const PauliString&, const PauliString&) = default;
};

/// Weighted sum of Pauli strings plus an identity offset, in Hartree.
struct QubitHamiltonian {
  int n_qubits = 0;
  double constant = 0.0;
  std::vector<PauliString> terms;  // unique factor maps, |coeff| descending
};

// ---------------------------------------------------------------------------
// Symplectic X/Z monomial algebra. A term is c * X^{x} Z^{z} with all X
// factors standing to the left of all Z factors; multiplying two monomials
// picks up (-1)^{|z1 & x2|} from commuting X^{x2} through Z^{z1}.
// ---------------------------------------------------------------------------

struct XZTerm {
  uint32_t x = 0;
  uint32_t z = 0;
  std::complex<double> coeff{0.0, 0.0};
};

XZTerm mul(const XZTerm& a, const XZTerm& b);

/// Operator as a map (x,z) -> coefficient.
class XZSum {
 public:
  void add(const XZTerm& t);
  void add_product(const XZSum& a, const XZSum& b, std::complex<double> scale);
  size_t size() const { return terms_.size(); }
  const std::unordered_map<uint64_t, std::complex<double>>& raw() const { return terms_; }

  /// Collapse to a real-coefficient Hamiltonian. Throws if any surviving
  /// coefficient has an imaginary part above `imag_tol`; drops terms with
  /// |coeff| < prune_tol.
  QubitHamiltonian to_hamiltonian(int n_qubits, double prune_tol = 1e-12,
                                  double imag_tol = 1e-12) const;

  /// All terms as Pauli strings with complex coefficients (for synthesis).
  std::vector<std::pair<PauliString, std::complex<double>>> complex_terms() const;

 private:
  std::unordered_map<uint64_t, std::complex<double>> terms_;
};

/// Jordan-Wigner images with the sigma_z tail on strictly higher mode
/// positions. `position` maps fermionic mode -> tail-ordering slot; pass an
/// identity map for the natural ordering.
XZSum jw_creation(int mode, int n_modes, const std::vector<int>& position);
XZSum jw_annihilation(int mode, int n_modes, const std::vector<int>& position);

std::vector<int> identity_position(int n_modes);

}  // namespace tivqe
