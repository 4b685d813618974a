#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tivqe/fci.hpp"
#include "tivqe/pauli.hpp"

namespace tivqe {

/// One parameterized cluster term. Non-bosonic terms hold four distinct
/// spin-orbital indices of c+_p c+_q c_r c_s; bosonic terms move an electron
/// pair between two MOs and also record the equivalent spin-orbital tuple.
struct ExcitationTerm {
  ExcitationKind kind = ExcitationKind::NonBosonic;
  int p = -1, q = -1, r = -1, s = -1;  // spin-orbital indices
  int mo_from = -1, mo_to = -1;        // bosonic only
  int parameter_id = -1;
};

/// The HF+N ansatz plus its register encoding. While every term is bosonic
/// the register holds one qubit per participating MO; the first non-bosonic
/// term forces the MOs whose spin-orbitals it touches to be re-encoded onto
/// two qubits each (original wire = alpha, fresh ancilla = beta). Spin-
/// orbitals of MOs that appear nowhere keep their reference occupation and
/// get no qubit at all.
struct AnsatzSpec {
  int n_spatial = 0;
  uint64_t reference = 0;              // spin-orbital occupation bitmask
  std::vector<ExcitationTerm> terms;   // bosonic block first, then non-bosonic
  int n_parameters = 0;

  int n_qubits = 0;
  std::vector<int> mo_qubit;            // per MO: pair/alpha wire, or -1
  std::vector<int> ancilla_qubit;       // per MO: beta wire after re-encode, or -1
  std::vector<int> so_qubit;            // per SO: wire, or -1 (paired / static)
  std::vector<uint8_t> mo_pair_encoded; // per MO: stays a single pair qubit
  std::vector<int> so_position;         // per SO: slot in the fermionic ordering

  int n_spin_orbitals() const { return 2 * n_spatial; }
  bool so_is_static(int so) const;
  bool has_nonbosonic() const;

  std::string to_json() const;
  static AnsatzSpec from_json(const std::string& text);
};

struct TrotterConfig {
  int order = 1;  // 1, 2, or even 2k
  int steps = 1;  // r >= 1
};

struct TrotterSlice {
  int term_index;
  double scale;  // multiplies theta at evaluation time
};

/// Product-formula expansion over the spec's term list: S1 is the list once
/// per step at scale 1/r, S2 the palindrome of half scales, S2k the
/// five-fold recursion with p_k = 1/(4 - 4^{1/(2k-1)}).
std::vector<TrotterSlice> trotterize(const AnsatzSpec& spec, TrotterConfig cfg);

/// Greedy neighbor ordering for non-bosonic terms: each next term maximizes
/// the shared non-identity support with its predecessor, preferring
/// candidates that share at least one sigma_x/sigma_y site; ties keep input
/// order. Changes the ansatz (Trotter error only), so it runs before any
/// angle optimization.
std::vector<ExcitationTerm> order_terms(const std::vector<ExcitationTerm>& terms,
                                        int n_spatial);

/// Greedy adjacency map: most frequently co-occurring orbitals move next to
/// each other; anything untouched follows in ascending order. Returns a
/// permutation orbital -> slot. Falls back to the identity whenever the
/// greedy layout does not shorten the summed JW-string length.
std::vector<int> map_qubits(const std::vector<ExcitationTerm>& terms, int n_orbitals);

/// Build the HF+n ansatz from the ranking: bosonic terms first (rank order),
/// then non-bosonic terms ordered by order_terms, one parameter per term,
/// register layout per the hybrid encoding.
AnsatzSpec build_ucc_ansatz(const std::vector<RankedExcitation>& ranked, size_t n,
                            int n_spatial, uint64_t reference);

/// Project the molecular Hamiltonian onto the ansatz register: spin-orbitals
/// with wires keep their Pauli factors, static spin-orbitals turn sigma_z
/// into the reference sign (terms with sigma_x/sigma_y there vanish), and
/// factors on a pair-encoded MO map through the two-to-one pair algebra
/// (XX -> X, YY -> -X, XY/YX -> Y, ZI/IZ -> Z, ZZ -> I, otherwise the term
/// has no matrix element in the encoded subspace).
QubitHamiltonian encode_hamiltonian(const AnsatzSpec& spec,
                                    const SpinOrbitalHamiltonian& ham);

}  // namespace tivqe
