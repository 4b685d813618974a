#include "tivqe/fci.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tivqe {

double FciSolution::amplitude_of(uint64_t determinant) const {
  auto it = std::lower_bound(basis.begin(), basis.end(), determinant);
  if (it == basis.end() || *it != determinant) return 0.0;
  return amplitudes[static_cast<size_t>(it - basis.begin())];
}

std::vector<uint64_t> determinant_basis(int n_spatial, int n_electrons) {
  const int nso = 2 * n_spatial;
  std::vector<uint64_t> out;
  const bool fix_sz = (n_electrons % 2 == 0);
  const int na = n_electrons / 2;

  if (fix_sz) {
    std::vector<uint64_t> spin_strings;
    for (uint64_t m = 0; m < (uint64_t{1} << n_spatial); ++m)
      if (std::popcount(m) == na) spin_strings.push_back(m);
    for (uint64_t a : spin_strings)
      for (uint64_t b : spin_strings) out.push_back(a | (b << n_spatial));
  } else {
    for (uint64_t m = 0; m < (uint64_t{1} << nso); ++m)
      if (std::popcount(m) == n_electrons) out.push_back(m);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

struct DetSpace {
  std::vector<uint64_t> basis;
  std::vector<OneBodyTerm> t1;
  std::vector<TwoBodyTerm> t2;
  double e_core;

  size_t index_of(uint64_t d) const {
    auto it = std::lower_bound(basis.begin(), basis.end(), d);
    if (it == basis.end() || *it != d) return SIZE_MAX;
    return static_cast<size_t>(it - basis.begin());
  }

  void apply(const std::vector<double>& in, std::vector<double>& out) const {
    const size_t n = basis.size();
    std::fill(out.begin(), out.end(), 0.0);
    for (size_t col = 0; col < n; ++col) {
      const double v = in[col];
      if (v == 0.0) continue;
      const uint64_t d = basis[col];
      out[col] += e_core * v;
      for (const auto& t : t1) {
        auto a1 = det::annihilate(d, t.q);
        if (!a1) continue;
        auto a2 = det::create(a1->mask, t.p);
        if (!a2) continue;
        const size_t row = index_of(a2->mask);
        if (row == SIZE_MAX) continue;
        out[row] += t.coeff * a1->sign * a2->sign * v;
      }
      for (const auto& t : t2) {
        auto a1 = det::annihilate(d, t.s);
        if (!a1) continue;
        auto a2 = det::annihilate(a1->mask, t.r);
        if (!a2) continue;
        auto a3 = det::create(a2->mask, t.q);
        if (!a3) continue;
        auto a4 = det::create(a3->mask, t.p);
        if (!a4) continue;
        const size_t row = index_of(a4->mask);
        if (row == SIZE_MAX) continue;
        out[row] += t.coeff * a1->sign * a2->sign * a3->sign * a4->sign * v;
      }
    }
  }
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(std::vector<double>& y, double alpha, const std::vector<double>& x) {
  for (size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

double nrm2(const std::vector<double>& v) { return std::sqrt(dot(v, v)); }

/// Lowest eigenpair of a symmetric tridiagonal matrix by bisection on the
/// Sturm sequence plus inverse iteration.
void tridiag_lowest(const std::vector<double>& alpha, const std::vector<double>& beta,
                    double& eval, std::vector<double>& evec) {
  const int m = static_cast<int>(alpha.size());
  auto count_below = [&](double x) {
    int cnt = 0;
    double d = 1.0;
    for (int i = 0; i < m; ++i) {
      const double b2 = i ? beta[i - 1] * beta[i - 1] : 0.0;
      d = alpha[i] - x - (d != 0.0 ? b2 / d : b2 / 1e-300);
      if (d < 0.0) ++cnt;
    }
    return cnt;
  };
  double lo = alpha[0], hi = alpha[0];
  for (int i = 0; i < m; ++i) {
    const double r = (i ? std::abs(beta[i - 1]) : 0.0) + (i + 1 < m ? std::abs(beta[i]) : 0.0);
    lo = std::min(lo, alpha[i] - r);
    hi = std::max(hi, alpha[i] + r);
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(mid) >= 1) hi = mid;
    else lo = mid;
  }
  eval = 0.5 * (lo + hi);

  // inverse iteration on (T - eval)
  evec.assign(m, 1.0 / std::sqrt(static_cast<double>(m)));
  std::vector<double> dmain(m), dsub(m, 0.0);
  for (int pass = 0; pass < 3; ++pass) {
    // solve (T - eval + eps) y = evec by LDL-style forward/backward sweep
    const double eps = 1e-12;
    std::vector<double> c(m), dd(m), y(m);
    dd[0] = alpha[0] - eval + eps;
    for (int i = 1; i < m; ++i) {
      c[i] = beta[i - 1] / (dd[i - 1] != 0.0 ? dd[i - 1] : 1e-300);
      dd[i] = alpha[i] - eval + eps - c[i] * beta[i - 1];
    }
    y[0] = evec[0];
    for (int i = 1; i < m; ++i) y[i] = evec[i] - c[i] * y[i - 1];
    for (int i = m - 1; i >= 0; --i) {
      double t = y[i];
      if (i + 1 < m) t -= beta[i] * evec[i + 1];
      evec[i] = t / (dd[i] != 0.0 ? dd[i] : 1e-300);
    }
    double nrm = 0.0;
    for (double v : evec) nrm += v * v;
    nrm = std::sqrt(nrm);
    for (double& v : evec) v /= nrm;
  }
}

}  // namespace

std::vector<double> determinant_matrix(const SpinOrbitalHamiltonian& ham,
                                       const std::vector<uint64_t>& basis) {
  DetSpace space{basis, ham.one_body_terms(), ham.two_body_terms(), ham.e_core()};
  const size_t n = basis.size();
  std::vector<double> mat(n * n, 0.0), in(n, 0.0), out(n, 0.0);
  for (size_t col = 0; col < n; ++col) {
    in.assign(n, 0.0);
    in[col] = 1.0;
    space.apply(in, out);
    for (size_t row = 0; row < n; ++row) mat[row * n + col] = out[row];
  }
  return mat;
}

FciSolution fci_ground_state(const SpinOrbitalHamiltonian& ham, FciOptions opts) {
  if (ham.n_spin_orbitals() > 28)
    throw std::invalid_argument("determinant space too large for this solver");

  DetSpace space{determinant_basis(ham.n_spatial(), ham.n_electrons()),
                 ham.one_body_terms(), ham.two_body_terms(), ham.e_core()};
  const size_t n = space.basis.size();
  if (n == 0) throw std::invalid_argument("empty determinant space");

  // Diagonal elements select the start determinant.
  std::vector<double> diag(n), tmp_in(n, 0.0), tmp_out(n);
  for (size_t i = 0; i < n; ++i) {
    tmp_in[i] = 1.0;
    space.apply(tmp_in, tmp_out);
    diag[i] = tmp_out[i];
    tmp_in[i] = 0.0;
  }
  size_t start = 0;
  for (size_t i = 1; i < n; ++i)
    if (diag[i] < diag[start]) start = i;

  std::vector<double> v(n, 0.0);
  v[start] = 1.0;

  FciSolution sol;
  sol.basis = space.basis;
  double best_residual = 1e300;

  if (n == 1) {
    sol.energy = diag[0];
    sol.amplitudes = {1.0};
    return sol;
  }

  int iterations = 0;
  while (iterations < opts.max_iterations) {
    // Lanczos sweep with full reorthogonalization, restarted from the best
    // Ritz vector when the Krylov cap is reached.
    std::vector<std::vector<double>> basis_vecs;
    std::vector<double> alpha, beta;
    std::vector<double> w(n);
    basis_vecs.push_back(v);
    const int cap = std::min<int>(opts.max_krylov, static_cast<int>(n));
    for (int j = 0; j < cap; ++j) {
      ++iterations;
      space.apply(basis_vecs[j], w);
      const double a = dot(w, basis_vecs[j]);
      alpha.push_back(a);
      axpy(w, -a, basis_vecs[j]);
      if (j > 0) axpy(w, -beta[j - 1], basis_vecs[j - 1]);
      for (const auto& u : basis_vecs) axpy(w, -dot(w, u), u);  // reorthogonalize
      const double b = nrm2(w);

      double eval;
      std::vector<double> y;
      tridiag_lowest(alpha, beta, eval, y);
      // Residual of the current Ritz pair is |beta_j * y_last|.
      const double residual = b * std::abs(y.back());
      best_residual = std::min(best_residual, residual);
      if (residual < opts.residual_tol || b < 1e-14 || j + 1 == cap ||
          iterations >= opts.max_iterations) {
        std::vector<double> ritz(n, 0.0);
        for (size_t k = 0; k < y.size(); ++k) axpy(ritz, y[k], basis_vecs[k]);
        const double nrm = nrm2(ritz);
        for (double& t : ritz) t /= nrm;
        if (residual < opts.residual_tol || b < 1e-14) {
          sol.energy = eval;
          sol.amplitudes = std::move(ritz);
          // Deterministic global sign: amplitude on the start determinant >= 0.
          if (sol.amplitudes[start] < 0)
            for (double& t : sol.amplitudes) t = -t;
          return sol;
        }
        v = std::move(ritz);  // restart
        break;
      }
      beta.push_back(b);
      for (double& t : w) t /= b;
      basis_vecs.push_back(w);
    }
  }
  throw FciError("fci_ground_state: no convergence after " +
                     std::to_string(opts.max_iterations) + " iterations",
                 best_residual);
}

std::vector<RankedExcitation> rank_excitations(const FciSolution& fci,
                                               uint64_t reference, size_t limit,
                                               int n_spatial) {
  std::vector<RankedExcitation> out;
  for (size_t i = 0; i < fci.basis.size(); ++i) {
    const uint64_t d = fci.basis[i];
    if (d == reference) continue;
    const uint64_t diff = d ^ reference;
    if (std::popcount(diff) != 4) continue;
    const uint64_t added = d & ~reference;
    const uint64_t removed = reference & ~d;
    if (std::popcount(added) != 2) continue;
    const int p = std::countr_zero(added);
    const int q = 63 - std::countl_zero(added);
    const int s = std::countr_zero(removed);
    const int r = 63 - std::countl_zero(removed);
    const bool bosonic = (q == p + n_spatial) && (r == s + n_spatial) &&
                         p < n_spatial && s < n_spatial;
    out.push_back({p, q, r, s, fci.amplitudes[i],
                   bosonic ? ExcitationKind::Bosonic : ExcitationKind::NonBosonic});
  }
  std::sort(out.begin(), out.end(), [](const RankedExcitation& a, const RankedExcitation& b) {
    if (std::abs(a.amplitude) != std::abs(b.amplitude))
      return std::abs(a.amplitude) > std::abs(b.amplitude);
    return std::tie(a.p, a.q, a.r, a.s) < std::tie(b.p, b.q, b.r, b.s);
  });
  if (out.size() > limit) out.resize(limit);
  return out;
}

}  // namespace tivqe
