#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "tivqe/circuit.hpp"
#include "tivqe/pauli.hpp"

namespace tivqe {

struct StateVector {
  int n_qubits = 0;
  std::vector<std::complex<double>> amps;

  static StateVector zero_state(int n_qubits);
  static StateVector basis_state(int n_qubits, uint32_t bits);
  double norm() const;
};

void apply_gate(StateVector& psi, const Gate& g, std::span<const double> theta);

/// Applies every gate's exact unitary. classical_flips are not applied here;
/// use prepared_state for the state the estimators see.
StateVector run_exact(const Circuit& c, std::span<const double> theta);

/// run_exact followed by the recorded classical flips as X gates, i.e. the
/// physical state the encoded circuit stands for.
StateVector prepared_state(const Circuit& c, std::span<const double> theta);

double expectation(const StateVector& psi, const QubitHamiltonian& h);
std::complex<double> pauli_expectation(const StateVector& psi, const PauliString& p);

/// Per-qubit readout confusion. eps0 = P(read 1 | prepared 0),
/// eps1 = P(read 0 | prepared 1); the register-level matrix is the Kronecker
/// product of the per-qubit 2x2 matrices.
struct SpamModel {
  std::vector<double> eps0;
  std::vector<double> eps1;
  // characterization shot counts per qubit (all-dark / all-bright runs);
  // zero means "exact model, nothing to resample" in the bootstrap
  long char_shots = 0;

  static SpamModel uniform(int n_qubits, double e0, double e1, long characterization_shots = 0);
  int n_qubits() const { return static_cast<int>(eps0.size()); }
  void validate() const;
};

/// Apply the confusion channel to an exact outcome distribution, one qubit
/// at a time (never materializes the 2^n x 2^n matrix).
void spam_apply(std::vector<double>& probs, const SpamModel& spam);

/// Single per-qubit measurement rotation.
enum class BasisRot : uint8_t { Z, X, Y };

/// Qubit-wise measurement basis; every covered Hamiltonian term is diagonal
/// after the per-qubit rotations (none for Z, H for X, Sdg then H for Y).
struct MeasurementBasis {
  std::vector<BasisRot> rotations;
  std::vector<size_t> covered_terms;
  std::string id() const;
};

/// Append the basis-change gates for `basis` to a copy of `c`.
Circuit with_basis_change(const Circuit& c, const MeasurementBasis& basis);

struct ShotHistogram {
  std::string basis_id;
  std::vector<std::pair<uint32_t, long>> counts;  // outcome -> count, sorted
  long n_shots = 0;
  uint64_t rng_seed = 0;
  int n_qubits = 0;

  std::string to_json() const;
};

/// Exact outcome probabilities of measuring `c` at `theta` in `basis`,
/// including classical flips and, when given, the SPAM channel.
std::vector<double> outcome_probabilities(const Circuit& c, std::span<const double> theta,
                                          const MeasurementBasis& basis,
                                          const SpamModel* spam);

/// Multinomial shot sampling with an explicit inverse-CDF draw from a seeded
/// mt19937_64, so histograms are reproducible bit for bit.
ShotHistogram sample_shots(const Circuit& c, std::span<const double> theta,
                           const MeasurementBasis& basis, long n_shots,
                           const SpamModel* spam, uint64_t seed);

/// Derive an independent stream seed; used to split one run seed across
/// basis groups and bootstrap replicates.
uint64_t split_seed(uint64_t seed, uint64_t stream);

}  // namespace tivqe
