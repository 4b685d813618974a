#pragma once

#include "tivqe/ansatz.hpp"
#include "tivqe/circuit.hpp"

namespace tivqe {

/// exp[theta (sigma+_to sigma-_from - h.c.)] on two register wires: two
/// parameter-bound XX gates conjugated by S rotations.
Circuit synth_bosonic(int qubit_to, int qubit_from, ParamRef theta);

/// exp(-i angle P / 2) by basis changes onto sigma_z, a CNOT star from every
/// other support qubit onto `target`, and one Rz(angle). 2(m-1) CNOTs for a
/// weight-m string.
Circuit synth_pauli_exponential(const PauliString& pauli, ParamRef angle, int target,
                                int n_qubits);
Circuit synth_pauli_exponential(const PauliString& pauli, double angle, int target,
                                int n_qubits);

/// Gate sequence for exp[theta (c+_p c+_q c_r c_s - h.c.)] after the
/// Jordan-Wigner expansion lands on the given register wires. The eight
/// commuting Pauli exponentials are emitted in a Gray-code order over the
/// basis letters of the three non-target sites (so adjacent factors differ
/// in exactly two basis changes), with the common Rz target on the highest
/// sigma_x/sigma_y wire; cancel_pass then collapses the stars to the
/// 13-CNOT core plus one CNOT ladder pair per JW-string wire.
struct NonBosonicOperator {
  // Pauli expansion of (T - T+): imaginary coefficients i*c with the
  // rotation angle of each factor equal to -2*c*theta.
  std::vector<std::pair<PauliString, double>> factors;  // (string, c)
};

/// JW-expand one non-bosonic term onto register wires. `wire_of_position`
/// maps fermionic slots to wires (slots of the term's support and string).
NonBosonicOperator expand_nonbosonic(const ExcitationTerm& term,
                                     const AnsatzSpec& spec);

Circuit synth_nonbosonic(const ExcitationTerm& term, const AnsatzSpec& spec,
                         ParamRef theta);

struct AssembleOptions {
  bool cancel = true;
  bool convert_to_xx = true;
  bool filled_as_zero = true;
};

/// Reference preparation, bosonic block on MO wires, one re-encode CNOT per
/// split MO, non-bosonic block, optimization passes, filled-as-zero
/// encoding.
Circuit assemble(const AnsatzSpec& spec, TrotterConfig cfg, AssembleOptions opts = {});

}  // namespace tivqe
