#include "tivqe/measurement.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace tivqe {

std::string EnergyEstimate::to_json() const {
  nlohmann::json j;
  j["mean_ha"] = mean;
  j["sigma_ha"] = sigma;
  j["n_bootstrap"] = n_bootstrap;
  j["total_shots"] = total_shots;
  j["seed"] = seed;
  j["exact"] = exact;
  return j.dump(2);
}

std::vector<MeasurementBasis> group_terms(const QubitHamiltonian& h) {
  struct Group {
    std::vector<int> constraint;  // -1 free, else BasisRot value
    MeasurementBasis basis;
  };
  std::vector<Group> groups;

  for (size_t idx = 0; idx < h.terms.size(); ++idx) {
    const PauliString& t = h.terms[idx];
    const auto factors = t.factors();
    auto rot_of = [](PauliOp op) {
      switch (op) {
        case PauliOp::X: return BasisRot::X;
        case PauliOp::Y: return BasisRot::Y;
        default: return BasisRot::Z;
      }
    };
    bool placed = false;
    for (auto& g : groups) {
      bool ok = true;
      for (const auto& [q, op] : factors) {
        const int want = static_cast<int>(rot_of(op));
        if (g.constraint[q] != -1 && g.constraint[q] != want) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      for (const auto& [q, op] : factors) g.constraint[q] = static_cast<int>(rot_of(op));
      g.basis.covered_terms.push_back(idx);
      placed = true;
      break;
    }
    if (!placed) {
      Group g;
      g.constraint.assign(h.n_qubits, -1);
      for (const auto& [q, op] : factors) g.constraint[q] = static_cast<int>(rot_of(op));
      g.basis.covered_terms.push_back(idx);
      groups.push_back(std::move(g));
    }
  }

  std::vector<MeasurementBasis> out;
  out.reserve(groups.size());
  for (auto& g : groups) {
    g.basis.rotations.assign(h.n_qubits, BasisRot::Z);
    for (int q = 0; q < h.n_qubits; ++q)
      if (g.constraint[q] != -1) g.basis.rotations[q] = static_cast<BasisRot>(g.constraint[q]);
    out.push_back(std::move(g.basis));
  }
  return out;
}

std::vector<double> histogram_frequencies(const ShotHistogram& hist) {
  std::vector<double> f(size_t{1} << hist.n_qubits, 0.0);
  for (const auto& [bits, cnt] : hist.counts)
    f[bits] = static_cast<double>(cnt) / static_cast<double>(hist.n_shots);
  return f;
}

std::vector<double> spam_correct(const ShotHistogram& hist, const SpamModel& spam) {
  spam.validate();
  if (spam.n_qubits() != hist.n_qubits)
    throw std::invalid_argument("SPAM model qubit count != histogram qubit count");
  std::vector<double> f = histogram_frequencies(hist);
  // Inverse of [[1-e0, e1], [e0, 1-e1]] is 1/(1-e0-e1) [[1-e1, -e1], [-e0, 1-e0]].
  for (int q = 0; q < spam.n_qubits(); ++q) {
    const double e0 = spam.eps0[q], e1 = spam.eps1[q];
    const double det = 1.0 - e0 - e1;
    if (std::abs(det) < 1e-12) throw std::invalid_argument("singular confusion matrix");
    const size_t bit = size_t{1} << q;
    for (size_t base = 0; base < f.size(); base += 2 * bit)
      for (size_t i = base; i < base + bit; ++i) {
        const double p0 = f[i], p1 = f[i + bit];
        f[i] = ((1 - e1) * p0 - e1 * p1) / det;
        f[i + bit] = (-e0 * p0 + (1 - e0) * p1) / det;
      }
  }
  return f;
}

namespace {

double group_energy(const std::vector<double>& probs, const QubitHamiltonian& h,
                    const MeasurementBasis& group) {
  double e = 0.0;
  for (size_t idx : group.covered_terms) {
    const PauliString& t = h.terms[idx];
    const uint32_t support = t.support();
    double parity = 0.0;
    for (size_t o = 0; o < probs.size(); ++o) {
      if (probs[o] == 0.0) continue;
      parity += probs[o] * ((std::popcount(static_cast<uint32_t>(o) & support) & 1) ? -1.0 : 1.0);
    }
    e += t.coefficient * parity;
  }
  return e;
}

}  // namespace

double estimate_energy(std::span<const ShotHistogram> histograms,
                       const QubitHamiltonian& h,
                       std::span<const MeasurementBasis> groups,
                       const SpamModel* spam) {
  if (histograms.size() != groups.size())
    throw std::invalid_argument("need one histogram per basis group");
  double e = h.constant;
  for (size_t g = 0; g < groups.size(); ++g) {
    const std::vector<double> probs = spam ? spam_correct(histograms[g], *spam)
                                           : histogram_frequencies(histograms[g]);
    e += group_energy(probs, h, groups[g]);
  }
  return e;
}

namespace {

ShotHistogram resample(const ShotHistogram& hist, std::mt19937_64& rng) {
  std::vector<double> cdf(hist.counts.size());
  double acc = 0.0;
  for (size_t i = 0; i < hist.counts.size(); ++i) {
    acc += static_cast<double>(hist.counts[i].second);
    cdf[i] = acc;
  }
  std::vector<long> draws(hist.counts.size(), 0);
  for (long s = 0; s < hist.n_shots; ++s) {
    const double u = acc * std::generate_canonical<double, 53>(rng);
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    ++draws[std::min(static_cast<size_t>(it - cdf.begin()), draws.size() - 1)];
  }
  ShotHistogram out = hist;
  out.counts.clear();
  for (size_t i = 0; i < draws.size(); ++i)
    if (draws[i]) out.counts.emplace_back(hist.counts[i].first, draws[i]);
  return out;
}

SpamModel resample_spam(const SpamModel& spam, std::mt19937_64& rng) {
  if (spam.char_shots <= 0) return spam;
  SpamModel out = spam;
  auto draw_rate = [&](double eps) {
    long k = 0;
    for (long s = 0; s < spam.char_shots; ++s)
      if (std::generate_canonical<double, 53>(rng) < eps) ++k;
    double e = static_cast<double>(k) / static_cast<double>(spam.char_shots);
    return std::min(e, 0.499999);  // keep the confusion matrix invertible
  };
  for (size_t q = 0; q < out.eps0.size(); ++q) {
    out.eps0[q] = draw_rate(spam.eps0[q]);
    out.eps1[q] = draw_rate(spam.eps1[q]);
  }
  return out;
}

}  // namespace

EnergyEstimate bootstrap(std::span<const ShotHistogram> histograms,
                         const QubitHamiltonian& h,
                         std::span<const MeasurementBasis> groups,
                         const SpamModel* spam, int n_resamples, uint64_t seed) {
  if (n_resamples < 2) throw std::invalid_argument("bootstrap needs n >= 2");
  std::vector<double> replicates(n_resamples);
  for (int r = 0; r < n_resamples; ++r) {
    std::mt19937_64 rng(split_seed(seed, static_cast<uint64_t>(r)));
    std::vector<ShotHistogram> hs;
    hs.reserve(histograms.size());
    for (const auto& hist : histograms) hs.push_back(resample(hist, rng));
    if (spam) {
      const SpamModel sm = resample_spam(*spam, rng);
      replicates[r] = estimate_energy(hs, h, groups, &sm);
    } else {
      replicates[r] = estimate_energy(hs, h, groups, nullptr);
    }
  }
  double mean = 0.0;
  for (double e : replicates) mean += e;
  mean /= n_resamples;
  double var = 0.0;
  for (double e : replicates) var += (e - mean) * (e - mean);
  var /= (n_resamples - 1);

  EnergyEstimate est;
  est.mean = mean;
  est.sigma = std::sqrt(var);
  est.n_bootstrap = n_resamples;
  est.seed = seed;
  for (const auto& hist : histograms) est.total_shots += hist.n_shots;
  return est;
}

std::string CalibrationFit::to_json() const {
  nlohmann::json j;
  j["k"] = k;
  j["rms_residual"] = rms_residual;
  auto& pts = j["scan"] = nlohmann::json::array();
  for (const auto& p : scan) pts.push_back({{"theta", p.big_theta}, {"parity", p.parity}});
  return j.dump(2);
}

CalibrationFit parity_calibration(std::span<const double> big_thetas, long n_shots,
                                  const SpamModel* spam, double true_k, uint64_t seed) {
  if (big_thetas.size() < 5)
    throw std::invalid_argument("calibration scan needs at least 5 points");

  MeasurementBasis zbasis;
  zbasis.rotations.assign(2, BasisRot::Z);

  CalibrationFit fit;
  for (size_t i = 0; i < big_thetas.size(); ++i) {
    Circuit c;
    c.n_qubits = 2;
    const double a = true_k * big_thetas[i];
    c.append(Gate::xx(0, 1, a));
    c.append(Gate::xx(0, 1, a));
    // rotate X (qubit 0) and -Y (qubit 1) onto the measured Z axes
    c.append(Gate::h(0));
    c.append(Gate::s(1));
    c.append(Gate::h(1));

    std::vector<double> probs;
    if (n_shots > 0) {
      const ShotHistogram hist =
          sample_shots(c, {}, zbasis, n_shots, spam, split_seed(seed, i));
      probs = spam ? spam_correct(hist, *spam) : histogram_frequencies(hist);
    } else {
      probs = outcome_probabilities(c, {}, zbasis, nullptr);
    }
    const double parity = probs[0b00] + probs[0b11] - probs[0b01] - probs[0b10];
    fit.scan.push_back({big_thetas[i], parity});
  }

  // Deterministic initialization: half period from the first zero crossing.
  double k0 = 0.0;
  for (size_t i = 0; i + 1 < fit.scan.size(); ++i) {
    const double p0 = fit.scan[i].parity, p1 = fit.scan[i + 1].parity;
    if (i > 0 && p0 > 0 && p1 <= 0) {
      const double t0 = fit.scan[i].big_theta, t1 = fit.scan[i + 1].big_theta;
      const double tz = t0 + (t1 - t0) * p0 / (p0 - p1);
      k0 = std::numbers::pi / (2.0 * tz);
      break;
    }
  }
  if (k0 == 0.0) {
    double tmax = 0.0;
    for (const auto& p : fit.scan) tmax = std::max(tmax, std::abs(p.big_theta));
    k0 = std::numbers::pi / (2.0 * tmax);
  }

  // Gauss-Newton on sum (parity_i - sin(2 k Theta_i))^2.
  double k = k0;
  bool converged = false;
  for (int it = 0; it < 200; ++it) {
    double jtj = 0.0, jtr = 0.0;
    for (const auto& p : fit.scan) {
      const double model = std::sin(2 * k * p.big_theta);
      const double res = p.parity - model;
      const double jac = 2 * p.big_theta * std::cos(2 * k * p.big_theta);
      jtj += jac * jac;
      jtr += jac * res;
    }
    if (jtj < 1e-18) break;
    const double dk = jtr / jtj;
    k += dk;
    if (std::abs(dk) < 1e-13) {
      converged = true;
      break;
    }
  }
  if (!converged || !std::isfinite(k))
    throw std::runtime_error("parity calibration fit did not converge");

  double ss = 0.0;
  for (const auto& p : fit.scan) {
    const double r = p.parity - std::sin(2 * k * p.big_theta);
    ss += r * r;
  }
  fit.k = k;
  fit.rms_residual = std::sqrt(ss / fit.scan.size());
  return fit;
}

}  // namespace tivqe
