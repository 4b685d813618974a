#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tivqe/simulate.hpp"

namespace tivqe {

struct EnergyEstimate {
  double mean = 0.0;
  double sigma = 0.0;
  int n_bootstrap = 0;
  long total_shots = 0;
  uint64_t seed = 0;
  bool exact = false;

  std::string to_json() const;
};

/// Greedy qubit-wise-commuting grouping. Terms are visited in the
/// Hamiltonian's order (|coefficient| descending); each joins the first
/// group whose per-qubit bases it does not conflict with, else opens a new
/// group. The result is a partition of term indices.
std::vector<MeasurementBasis> group_terms(const QubitHamiltonian& h);

/// Invert the Kronecker-product confusion matrix on the empirical frequency
/// vector, one qubit at a time. Small negative entries are preserved.
std::vector<double> spam_correct(const ShotHistogram& hist, const SpamModel& spam);

/// Frequency vector of a histogram without correction.
std::vector<double> histogram_frequencies(const ShotHistogram& hist);

/// constant + sum over groups of coefficient * parity expectation from the
/// group's (corrected) outcome distribution. Histograms must line up with
/// `groups` one to one.
double estimate_energy(std::span<const ShotHistogram> histograms,
                       const QubitHamiltonian& h,
                       std::span<const MeasurementBasis> groups,
                       const SpamModel* spam);

/// Empirical bootstrap: resample every histogram (and, when characterization
/// counts are present, the SPAM model) with replacement at original size,
/// recompute the energy per replicate, and report the replicate mean and
/// standard deviation.
EnergyEstimate bootstrap(std::span<const ShotHistogram> histograms,
                         const QubitHamiltonian& h,
                         std::span<const MeasurementBasis> groups,
                         const SpamModel* spam, int n_resamples, uint64_t seed);

struct ParityPoint {
  double big_theta;
  double parity;
};

struct CalibrationFit {
  double k = 0.0;
  double rms_residual = 0.0;
  std::vector<ParityPoint> scan;

  std::string to_json() const;
};

/// Two consecutive XX(k_true * Theta) gates on |00>, measured after rotating
/// into the X-type parity basis; the parity P(00)+P(11)-P(10)-P(01) follows
/// sin(2 k Theta) and the least-squares fit recovers k. n_shots == 0 runs on
/// exact probabilities.
CalibrationFit parity_calibration(std::span<const double> big_thetas, long n_shots,
                                  const SpamModel* spam, double true_k, uint64_t seed);

}  // namespace tivqe
