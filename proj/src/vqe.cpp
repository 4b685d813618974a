#include "tivqe/vqe.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace tivqe {

CompiledAnsatz compile_ansatz(const AnsatzSpec& spec, const SpinOrbitalHamiltonian& ham,
                              TrotterConfig cfg, AssembleOptions opts) {
  CompiledAnsatz ca;
  ca.spec = spec;
  ca.circuit = assemble(spec, cfg, opts);
  ca.hamiltonian = encode_hamiltonian(spec, ham);
  ca.groups = group_terms(ca.hamiltonian);
  return ca;
}

EnergyEstimate energy_at(const CompiledAnsatz& ca, std::span<const double> theta,
                         EvalMode mode, const SampledOptions& sampled,
                         uint64_t eval_index) {
  if (static_cast<int>(theta.size()) != ca.spec.n_parameters)
    throw std::invalid_argument("theta length != ansatz parameter count");
  if (mode == EvalMode::Exact) {
    EnergyEstimate e;
    e.mean = expectation(prepared_state(ca.circuit, theta), ca.hamiltonian);
    e.exact = true;
    return e;
  }
  const SpamModel* noise = sampled.spam ? &*sampled.spam : nullptr;
  const SpamModel* corrector = (noise && sampled.correct_spam) ? noise : nullptr;
  std::vector<ShotHistogram> hists;
  hists.reserve(ca.groups.size());
  for (size_t g = 0; g < ca.groups.size(); ++g) {
    const uint64_t seed = split_seed(sampled.seed, eval_index * 1000003ULL + g);
    hists.push_back(sample_shots(ca.circuit, theta, ca.groups[g],
                                 sampled.shots_per_basis, noise, seed));
  }
  EnergyEstimate est = bootstrap(hists, ca.hamiltonian, ca.groups, corrector,
                                 sampled.bootstrap_resamples,
                                 split_seed(sampled.seed, eval_index * 7919ULL + 17));
  est.mean = estimate_energy(hists, ca.hamiltonian, ca.groups, corrector);
  return est;
}

std::vector<ScanRow> scan_surface(const CompiledAnsatz& ca,
                                  const std::vector<std::vector<double>>& grid,
                                  EvalMode mode, const SampledOptions& sampled) {
  if (grid.size() != static_cast<size_t>(ca.spec.n_parameters))
    throw std::invalid_argument("grid must list values for every parameter");
  for (const auto& axis : grid)
    if (axis.empty()) throw std::invalid_argument("empty grid axis");

  std::vector<ScanRow> rows;
  std::vector<size_t> idx(grid.size(), 0);
  uint64_t point = 0;
  for (;;) {
    std::vector<double> theta(grid.size());
    for (size_t k = 0; k < grid.size(); ++k) theta[k] = grid[k][idx[k]];
    rows.push_back({theta, energy_at(ca, theta, mode, sampled, point++)});
    // row-major: last axis fastest
    int k = static_cast<int>(grid.size()) - 1;
    for (; k >= 0; --k) {
      if (++idx[k] < grid[k].size()) break;
      idx[k] = 0;
    }
    if (k < 0) break;
  }
  return rows;
}

std::string scan_to_csv(const std::vector<ScanRow>& rows) {
  if (rows.empty()) return "";
  std::string out;
  for (size_t k = 0; k < rows.front().theta.size(); ++k)
    out += "theta" + std::to_string(k) + ",";
  out += "energy_ha,sigma_ha\n";
  char buf[64];
  for (const auto& r : rows) {
    for (double t : r.theta) {
      std::snprintf(buf, sizeof buf, "%.12g,", t);
      out += buf;
    }
    std::snprintf(buf, sizeof buf, "%.12f,%.3e\n", r.energy.mean, r.energy.sigma);
    out += buf;
  }
  return out;
}

VqeRun minimize(const CompiledAnsatz& ca, EvalMode mode, const SampledOptions& sampled,
                MinimizeOptions opts) {
  const int n = ca.spec.n_parameters;
  VqeRun run;
  run.mode = mode;

  uint64_t eval_counter = 0;
  auto eval = [&](const std::vector<double>& th) {
    EnergyEstimate e = energy_at(ca, th, mode, sampled, eval_counter++);
    run.trace.push_back({th, e});
    ++run.evaluations;
    return e;
  };

  std::vector<double> x0(n, 0.0);
  if (!opts.initial.empty()) {
    if (static_cast<int>(opts.initial.size()) != n)
      throw std::invalid_argument("initial point has the wrong length");
    x0 = opts.initial;
  }

  if (n == 0) {
    const EnergyEstimate e = eval(x0);
    run.best_theta = x0;
    run.best_energy = e.mean;
    run.best_sigma = e.sigma;
    run.converged = true;
    return run;
  }

  // Nelder-Mead with standard coefficients and a deterministic restart: once
  // the simplex collapses, rebuild it around the incumbent until the fresh
  // simplex agrees it is a minimum.
  const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma_shrink = 0.5;
  std::vector<std::vector<double>> pts;
  std::vector<EnergyEstimate> vals;

  auto build_simplex = [&](const std::vector<double>& center, double step) {
    pts.assign(1, center);
    vals.assign(1, eval(center));
    for (int k = 0; k < n; ++k) {
      auto p = center;
      p[k] += step;
      pts.push_back(p);
      vals.push_back(eval(p));
    }
  };

  auto order_simplex = [&]() {
    std::vector<size_t> perm(pts.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end(),
              [&](size_t a, size_t b) { return vals[a].mean < vals[b].mean; });
    std::vector<std::vector<double>> p2;
    std::vector<EnergyEstimate> v2;
    for (size_t i : perm) {
      p2.push_back(pts[i]);
      v2.push_back(vals[i]);
    }
    pts = std::move(p2);
    vals = std::move(v2);
  };

  double step = opts.simplex_step;
  build_simplex(x0, step);
  int restarts_left = 2;
  bool converged = false;

  while (run.evaluations < opts.max_evaluations) {
    order_simplex();
    const double spread = vals.back().mean - vals.front().mean;
    const double tol = (mode == EvalMode::Exact)
                           ? opts.exact_tolerance
                           : std::max(vals.front().sigma / 2, 1e-12);
    if (spread < tol) {
      if (restarts_left-- > 0) {
        const auto best = pts.front();
        step *= 0.25;
        build_simplex(best, std::max(step, 1e-4));
        continue;
      }
      converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (size_t i = 0; i + 1 < pts.size(); ++i)
      for (int k = 0; k < n; ++k) centroid[k] += pts[i][k];
    for (int k = 0; k < n; ++k) centroid[k] /= n;

    auto blend = [&](double f) {
      std::vector<double> p(n);
      for (int k = 0; k < n; ++k) p[k] = centroid[k] + f * (pts.back()[k] - centroid[k]);
      return p;
    };

    const auto xr = blend(-alpha);
    const auto er = eval(xr);
    if (er.mean < vals.front().mean) {
      const auto xe = blend(-gamma);
      const auto ee = eval(xe);
      if (ee.mean < er.mean) {
        pts.back() = xe;
        vals.back() = ee;
      } else {
        pts.back() = xr;
        vals.back() = er;
      }
    } else if (er.mean < vals[vals.size() - 2].mean) {
      pts.back() = xr;
      vals.back() = er;
    } else {
      const auto xc = blend(er.mean < vals.back().mean ? -rho : rho);
      const auto ec = eval(xc);
      if (ec.mean < std::min(er.mean, vals.back().mean)) {
        pts.back() = xc;
        vals.back() = ec;
      } else {
        for (size_t i = 1; i < pts.size(); ++i) {
          for (int k = 0; k < n; ++k)
            pts[i][k] = pts[0][k] + sigma_shrink * (pts[i][k] - pts[0][k]);
          vals[i] = eval(pts[i]);
        }
      }
    }
  }

  order_simplex();
  run.best_theta = pts.front();
  run.best_energy = vals.front().mean;
  run.best_sigma = vals.front().sigma;
  run.converged = converged;
  return run;
}

std::string ConvergenceReport::to_json() const {
  nlohmann::json j;
  j["hf_ha"] = hf;
  j["fci_ha"] = fci;
  auto& rows_j = j["rows"] = nlohmann::json::array();
  for (const auto& r : rows) {
    rows_j.push_back({{"n_terms", r.n_terms},
                      {"n_qubits", r.n_qubits},
                      {"cnot", r.gates.cnot},
                      {"xx_small_angle", r.gates.xx_small_angle},
                      {"entangling_total", r.gates.entangling_total()},
                      {"energy_ha", r.energy},
                      {"gap_to_fci_mha", 1000.0 * r.gap_to_fci},
                      {"converged", r.converged}});
  }
  return j.dump(2);
}

std::string ConvergenceReport::to_csv() const {
  std::string out = "n_terms,n_qubits,cnot,xx_small_angle,entangling_total,energy_ha,gap_to_fci_mha\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%d,%.9f,%.4f\n", r.n_terms, r.n_qubits,
                  r.gates.cnot, r.gates.xx_small_angle, r.gates.entangling_total(),
                  r.energy, 1000.0 * r.gap_to_fci);
    out += buf;
  }
  return out;
}

ConvergenceReport convergence_report(const SpinOrbitalHamiltonian& ham, int n_max,
                                     EvalMode mode, const SampledOptions& sampled,
                                     TrotterConfig cfg, AssembleOptions opts,
                                     MinimizeOptions min_opts) {
  ConvergenceReport report;
  const uint64_t reference = ham.hartree_fock_reference();
  report.hf = hf_energy(ham, reference);
  const FciSolution fci = fci_ground_state(ham);
  report.fci = fci.energy;
  const auto ranked = rank_excitations(fci, reference, static_cast<size_t>(n_max),
                                       ham.n_spatial());
  const int actual_max = std::min<int>(n_max, static_cast<int>(ranked.size()));

  // Warm starts nest each row in the next: carried values are keyed by the
  // term's spin-orbital tuple, fresh terms start at zero, so row N begins at
  // row N-1's optimum and the tabulated energies are monotone non-increasing.
  std::vector<ExcitationTerm> warm_terms;
  std::vector<double> warm_values;
  for (int n = 0; n <= actual_max; ++n) {
    const AnsatzSpec spec = build_ucc_ansatz(ranked, static_cast<size_t>(n),
                                             ham.n_spatial(), reference);
    const CompiledAnsatz ca = compile_ansatz(spec, ham, cfg, opts);

    MinimizeOptions local = min_opts;
    local.initial.assign(static_cast<size_t>(n), 0.0);
    for (size_t i = 0; i < spec.terms.size(); ++i) {
      const auto& t = spec.terms[i];
      for (size_t k = 0; k < warm_terms.size(); ++k) {
        const auto& w = warm_terms[k];
        if (w.p == t.p && w.q == t.q && w.r == t.r && w.s == t.s) {
          local.initial[i] = warm_values[k];
          break;
        }
      }
    }

    const VqeRun run = minimize(ca, mode, sampled, local);
    warm_terms = spec.terms;
    warm_values = run.best_theta;

    ConvergenceRow row;
    row.n_terms = n;
    row.n_qubits = spec.n_qubits;
    row.gates = count_gates(ca.circuit);
    row.energy = run.best_energy;
    row.gap_to_fci = run.best_energy - report.fci;
    row.converged = run.converged;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace tivqe
