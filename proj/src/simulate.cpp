#include "tivqe/simulate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace tivqe {

StateVector StateVector::zero_state(int n_qubits) { return basis_state(n_qubits, 0); }

StateVector StateVector::basis_state(int n_qubits, uint32_t bits) {
  if (n_qubits < 0 || n_qubits > 24) throw std::invalid_argument("bad qubit count");
  StateVector s;
  s.n_qubits = n_qubits;
  s.amps.assign(size_t{1} << n_qubits, {0.0, 0.0});
  s.amps[bits] = 1.0;
  return s;
}

double StateVector::norm() const {
  double n = 0.0;
  for (const auto& a : amps) n += std::norm(a);
  return std::sqrt(n);
}

namespace {
using cd = std::complex<double>;

void apply_1q(StateVector& psi, int q, cd u00, cd u01, cd u10, cd u11) {
  const size_t bit = size_t{1} << q;
  const size_t dim = psi.amps.size();
  for (size_t base = 0; base < dim; base += 2 * bit)
    for (size_t i = base; i < base + bit; ++i) {
      const cd a0 = psi.amps[i];
      const cd a1 = psi.amps[i + bit];
      psi.amps[i] = u00 * a0 + u01 * a1;
      psi.amps[i + bit] = u10 * a0 + u11 * a1;
    }
}
}  // namespace

void apply_gate(StateVector& psi, const Gate& g, std::span<const double> theta) {
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  switch (g.kind) {
    case GateKind::H:
      apply_1q(psi, g.q0, inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2);
      break;
    case GateKind::S:
      apply_1q(psi, g.q0, 1.0, 0.0, 0.0, cd(0, 1));
      break;
    case GateKind::Sdg:
      apply_1q(psi, g.q0, 1.0, 0.0, 0.0, cd(0, -1));
      break;
    case GateKind::X:
      apply_1q(psi, g.q0, 0.0, 1.0, 1.0, 0.0);
      break;
    case GateKind::Rz: {
      const double a = g.resolve(theta);
      apply_1q(psi, g.q0, std::polar(1.0, -a / 2), 0.0, 0.0, std::polar(1.0, a / 2));
      break;
    }
    case GateKind::Cnot: {
      const size_t cbit = size_t{1} << g.q0;
      const size_t tbit = size_t{1} << g.q1;
      for (size_t i = 0; i < psi.amps.size(); ++i)
        if ((i & cbit) && !(i & tbit)) std::swap(psi.amps[i], psi.amps[i | tbit]);
      break;
    }
    case GateKind::Xx: {
      // exp(-i a XX / 2)
      const double a = g.resolve(theta);
      const double c = std::cos(a / 2), s = std::sin(a / 2);
      const size_t b0 = size_t{1} << g.q0;
      const size_t b1 = size_t{1} << g.q1;
      for (size_t i = 0; i < psi.amps.size(); ++i) {
        if (i & (b0 | b1)) continue;
        const size_t i00 = i, i01 = i | b0, i10 = i | b1, i11 = i | b0 | b1;
        const cd a00 = psi.amps[i00], a01 = psi.amps[i01];
        const cd a10 = psi.amps[i10], a11 = psi.amps[i11];
        psi.amps[i00] = c * a00 - cd(0, s) * a11;
        psi.amps[i11] = c * a11 - cd(0, s) * a00;
        psi.amps[i01] = c * a01 - cd(0, s) * a10;
        psi.amps[i10] = c * a10 - cd(0, s) * a01;
      }
      break;
    }
  }
}

StateVector run_exact(const Circuit& c, std::span<const double> theta) {
  if (c.parameter_count() > static_cast<int>(theta.size()))
    throw std::invalid_argument("parameter vector shorter than circuit needs");
  StateVector psi = StateVector::zero_state(c.n_qubits);
  for (const auto& g : c.gates) apply_gate(psi, g, theta);
  return psi;
}

StateVector prepared_state(const Circuit& c, std::span<const double> theta) {
  StateVector psi = run_exact(c, theta);
  for (int q = 0; q < c.n_qubits; ++q)
    if (c.classical_flips >> q & 1) apply_gate(psi, Gate::x(q), theta);
  return psi;
}

std::complex<double> pauli_expectation(const StateVector& psi, const PauliString& p) {
  // P|k> = phase(k) |k ^ x_mask>; phase carries i per Y on a 0-bit, -i per Y
  // on a 1-bit, and -1 per Z/Y on a 1-bit of the z_mask part.
  const uint32_t x = p.x_mask;
  const uint32_t z = p.z_mask;
  const uint32_t y = x & z;
  const int n_y = std::popcount(y);
  cd y_phase{1.0, 0.0};
  switch (n_y & 3) {
    case 0: y_phase = {1, 0}; break;
    case 1: y_phase = {0, 1}; break;
    case 2: y_phase = {-1, 0}; break;
    case 3: y_phase = {0, -1}; break;
  }
  cd acc{0.0, 0.0};
  for (size_t k = 0; k < psi.amps.size(); ++k) {
    if (psi.amps[k] == cd{0.0, 0.0}) continue;
    // sign from Z-part on set bits; Y contributes via (z & k) too since
    // Y|1> = -i|0>, Y|0> = +i|1>: phase = i^{n_y} * (-1)^{|k & z|}
    double sign = (std::popcount(k & z) & 1) ? -1.0 : 1.0;
    acc += std::conj(psi.amps[k ^ x]) * y_phase * sign * psi.amps[k];
  }
  return acc * p.coefficient;
}

double expectation(const StateVector& psi, const QubitHamiltonian& h) {
  if (h.n_qubits != psi.n_qubits)
    throw std::invalid_argument("qubit-count mismatch between state and Hamiltonian");
  cd acc{h.constant, 0.0};
  for (const auto& t : h.terms) acc += pauli_expectation(psi, t);
  if (std::abs(acc.imag()) > 1e-10)
    throw std::runtime_error("expectation has imaginary residue " +
                             std::to_string(acc.imag()));
  return acc.real();
}

SpamModel SpamModel::uniform(int n_qubits, double e0, double e1, long characterization_shots) {
  SpamModel m;
  m.eps0.assign(n_qubits, e0);
  m.eps1.assign(n_qubits, e1);
  m.char_shots = characterization_shots;
  m.validate();
  return m;
}

void SpamModel::validate() const {
  for (double e : eps0)
    if (e < 0.0 || e >= 0.5) throw std::invalid_argument("eps0 must lie in [0, 1/2)");
  for (double e : eps1)
    if (e < 0.0 || e >= 0.5) throw std::invalid_argument("eps1 must lie in [0, 1/2)");
}

void spam_apply(std::vector<double>& probs, const SpamModel& spam) {
  const int n = spam.n_qubits();
  if (probs.size() != (size_t{1} << n))
    throw std::invalid_argument("probability vector size mismatch");
  for (int q = 0; q < n; ++q) {
    const double e0 = spam.eps0[q], e1 = spam.eps1[q];
    const size_t bit = size_t{1} << q;
    for (size_t base = 0; base < probs.size(); base += 2 * bit)
      for (size_t i = base; i < base + bit; ++i) {
        const double p0 = probs[i], p1 = probs[i + bit];
        probs[i] = (1 - e0) * p0 + e1 * p1;
        probs[i + bit] = e0 * p0 + (1 - e1) * p1;
      }
  }
}

std::string MeasurementBasis::id() const {
  std::string s;
  for (BasisRot r : rotations)
    s += (r == BasisRot::Z) ? 'Z' : (r == BasisRot::X ? 'X' : 'Y');
  return s;
}

Circuit with_basis_change(const Circuit& c, const MeasurementBasis& basis) {
  Circuit out = c;
  for (int q = 0; q < c.n_qubits && q < static_cast<int>(basis.rotations.size()); ++q) {
    switch (basis.rotations[q]) {
      case BasisRot::Z: break;
      case BasisRot::X: out.append(Gate::h(q)); break;
      case BasisRot::Y:
        out.append(Gate::sdg(q));
        out.append(Gate::h(q));
        break;
    }
  }
  return out;
}

std::vector<double> outcome_probabilities(const Circuit& c, std::span<const double> theta,
                                          const MeasurementBasis& basis,
                                          const SpamModel* spam) {
  // Flips act on the physical state before any basis rotation.
  StateVector psi = prepared_state(c, theta);
  for (int q = 0; q < c.n_qubits && q < static_cast<int>(basis.rotations.size()); ++q) {
    switch (basis.rotations[q]) {
      case BasisRot::Z: break;
      case BasisRot::X: apply_gate(psi, Gate::h(q), theta); break;
      case BasisRot::Y:
        apply_gate(psi, Gate::sdg(q), theta);
        apply_gate(psi, Gate::h(q), theta);
        break;
    }
  }
  std::vector<double> probs(psi.amps.size());
  for (size_t i = 0; i < probs.size(); ++i) probs[i] = std::norm(psi.amps[i]);
  if (spam) spam_apply(probs, *spam);
  return probs;
}

uint64_t split_seed(uint64_t seed, uint64_t stream) {
  // splitmix64 over (seed, stream)
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ShotHistogram sample_shots(const Circuit& c, std::span<const double> theta,
                           const MeasurementBasis& basis, long n_shots,
                           const SpamModel* spam, uint64_t seed) {
  if (n_shots < 1) throw std::invalid_argument("n_shots must be >= 1");
  const std::vector<double> probs = outcome_probabilities(c, theta, basis, spam);

  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (size_t i = 0; i < probs.size(); ++i) {
    acc += std::max(probs[i], 0.0);
    cdf[i] = acc;
  }
  std::mt19937_64 rng(seed);
  std::vector<long> counts(probs.size(), 0);
  for (long s = 0; s < n_shots; ++s) {
    const double u = acc * std::generate_canonical<double, 53>(rng);
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    size_t k = std::min(static_cast<size_t>(it - cdf.begin()), probs.size() - 1);
    ++counts[k];
  }
  ShotHistogram h;
  h.basis_id = basis.id();
  h.n_shots = n_shots;
  h.rng_seed = seed;
  h.n_qubits = c.n_qubits;
  for (size_t i = 0; i < counts.size(); ++i)
    if (counts[i]) h.counts.emplace_back(static_cast<uint32_t>(i), counts[i]);
  return h;
}

std::string ShotHistogram::to_json() const {
  nlohmann::json j;
  j["basis"] = basis_id;
  j["n_shots"] = n_shots;
  j["seed"] = rng_seed;
  j["n_qubits"] = n_qubits;
  nlohmann::json counts_json = nlohmann::json::object();
  for (const auto& [bits, cnt] : counts) {
    std::string key;
    for (int q = n_qubits - 1; q >= 0; --q) key += (bits >> q & 1) ? '1' : '0';
    counts_json[key] = cnt;
  }
  j["counts"] = counts_json;
  return j.dump(2);
}

}  // namespace tivqe
