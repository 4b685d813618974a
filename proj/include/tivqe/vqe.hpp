#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tivqe/ansatz.hpp"
#include "tivqe/measurement.hpp"
#include "tivqe/synth.hpp"

namespace tivqe {

enum class EvalMode { Exact, Sampled };

struct SampledOptions {
  long shots_per_basis = 1000;
  std::optional<SpamModel> spam;
  bool correct_spam = true;
  uint64_t seed = 1;
  int bootstrap_resamples = 500;
};

/// Ansatz compiled once; parameter binding is symbolic, so the same circuit
/// serves every theta.
struct CompiledAnsatz {
  AnsatzSpec spec;
  Circuit circuit;
  QubitHamiltonian hamiltonian;          // on the ansatz register
  std::vector<MeasurementBasis> groups;  // measurement partition
};

CompiledAnsatz compile_ansatz(const AnsatzSpec& spec, const SpinOrbitalHamiltonian& ham,
                              TrotterConfig cfg = {}, AssembleOptions opts = {});

EnergyEstimate energy_at(const CompiledAnsatz& ca, std::span<const double> theta,
                         EvalMode mode, const SampledOptions& sampled = {},
                         uint64_t eval_index = 0);

struct ScanRow {
  std::vector<double> theta;
  EnergyEstimate energy;
};

/// Cartesian product of the per-parameter grids, row-major.
std::vector<ScanRow> scan_surface(const CompiledAnsatz& ca,
                                  const std::vector<std::vector<double>>& grid,
                                  EvalMode mode, const SampledOptions& sampled = {});

std::string scan_to_csv(const std::vector<ScanRow>& rows);

struct MinimizeOptions {
  double simplex_step = 0.05;          // rad
  double exact_tolerance = 1e-7;       // Ha spread across the simplex
  int max_evaluations = 60000;
  std::vector<double> initial;         // defaults to all zeros
};

struct VqeRun {
  EvalMode mode = EvalMode::Exact;
  std::vector<ScanRow> trace;
  std::vector<double> best_theta;
  double best_energy = 0.0;
  double best_sigma = 0.0;
  bool converged = false;
  long evaluations = 0;
};

/// Derivative-free Nelder-Mead from theta = 0 (or opts.initial); exact mode
/// stops when the simplex energy spread drops under exact_tolerance, sampled
/// mode when it drops under sigma/2. Hitting the evaluation cap returns the
/// best point with converged = false.
VqeRun minimize(const CompiledAnsatz& ca, EvalMode mode,
                const SampledOptions& sampled = {}, MinimizeOptions opts = {});

struct ConvergenceRow {
  int n_terms = 0;
  int n_qubits = 0;
  GateCounts gates;
  double energy = 0.0;
  double gap_to_fci = 0.0;
  bool converged = true;
};

struct ConvergenceReport {
  double hf = 0.0;
  double fci = 0.0;
  std::vector<ConvergenceRow> rows;

  std::string to_json() const;
  std::string to_csv() const;
};

/// HF+0 .. HF+N_max: build, compile, minimize (warm-started from the
/// previous row, so energies are monotone non-increasing), tabulate.
ConvergenceReport convergence_report(const SpinOrbitalHamiltonian& ham, int n_max,
                                     EvalMode mode, const SampledOptions& sampled = {},
                                     TrotterConfig cfg = {}, AssembleOptions opts = {},
                                     MinimizeOptions min_opts = {});

}  // namespace tivqe
