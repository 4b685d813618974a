#include <cstdio>
#include "tivqe/passes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <Eigen/Dense>
#include <complex>
#include <numbers>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace tivqe {

namespace {

using cd = std::complex<double>;
using Mat2 = std::array<cd, 4>;  // row-major 2x2

constexpr double kPi = std::numbers::pi;

bool is_z_diag(const Gate& g) {
  return g.kind == GateKind::S || g.kind == GateKind::Sdg ||
         (g.kind == GateKind::Rz && !g.param.bound());
}

double z_angle(const Gate& g) {
  switch (g.kind) {
    case GateKind::S: return kPi / 2;
    case GateKind::Sdg: return -kPi / 2;
    default: return g.angle;
  }
}

std::optional<Gate> canonical_z(int q, double angle) {
  const double a = normalize_angle(angle);
  if (std::abs(a) < 1e-12) return std::nullopt;
  if (std::abs(a - kPi / 2) < 1e-12) return Gate::s(q);
  if (std::abs(a + kPi / 2) < 1e-12) return Gate::sdg(q);
  return Gate::rz(q, a);
}

Mat2 mat_of(const Gate& g) {
  const double r = 1.0 / std::numbers::sqrt2;
  switch (g.kind) {
    case GateKind::H: return {r, r, r, -r};
    case GateKind::S: return {1, 0, 0, cd(0, 1)};
    case GateKind::Sdg: return {1, 0, 0, cd(0, -1)};
    case GateKind::X: return {0, 1, 1, 0};
    case GateKind::Rz:
      return {std::polar(1.0, -g.angle / 2), 0, 0, std::polar(1.0, g.angle / 2)};
    default: throw std::logic_error("mat_of: not a single-qubit gate");
  }
}

Mat2 matmul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

/// Accumulate the matrix of a time-ordered gate list.
Mat2 product_of(const std::vector<Gate>& gates, const std::vector<size_t>& idx) {
  Mat2 u{1, 0, 0, 1};
  for (size_t k : idx) u = matmul(mat_of(gates[k]), u);
  return u;
}

bool is_diagonal(const Mat2& u) {
  return std::abs(u[1]) < 1e-9 && std::abs(u[2]) < 1e-9;
}

/// U ~ Rz(alpha) . H . Rz(beta) up to a global phase?
bool hadamard_form(const Mat2& u, double& alpha, double& beta) {
  const double r = 1.0 / std::numbers::sqrt2;
  for (const cd& e : u)
    if (std::abs(std::abs(e) - r) > 1e-9) return false;
  alpha = std::arg(u[2] / u[0]);
  beta = std::arg(u[1] / u[0]);
  const cd want = -std::exp(cd(0, alpha + beta)) * u[0];
  if (std::abs(u[3] - want) > 1e-9) return false;
  return true;
}

// ---------------------------------------------------------------------------
// wire-timeline helpers
// ---------------------------------------------------------------------------

int next_on_wire(const std::vector<Gate>& g, size_t from, int wire) {
  for (size_t k = from + 1; k < g.size(); ++k)
    if (g[k].touches(wire)) return static_cast<int>(k);
  return -1;
}

/// [H, z-diag, H] consecutive on one wire starting at index i; such a block
/// is an x-axis rotation and commutes through CNOT targets and XX legs.
std::optional<std::array<size_t, 3>> x_block_at(const std::vector<Gate>& g, size_t i,
                                                int wire) {
  if (g[i].kind != GateKind::H || g[i].q0 != wire) return std::nullopt;
  const int j = next_on_wire(g, i, wire);
  if (j < 0 || !is_z_diag(g[j]) || g[j].q0 != wire) return std::nullopt;
  const int k = next_on_wire(g, j, wire);
  if (k < 0 || g[k].kind != GateKind::H || g[k].q0 != wire) return std::nullopt;
  return std::array<size_t, 3>{i, static_cast<size_t>(j), static_cast<size_t>(k)};
}

void erase_indices(std::vector<Gate>& g, std::vector<size_t> idx) {
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  for (auto it = idx.rbegin(); it != idx.rend(); ++it)
    g.erase(g.begin() + static_cast<long>(*it));
}

// ---------------------------------------------------------------------------
// single-qubit simplifications
// ---------------------------------------------------------------------------

bool simplify_singles_once(std::vector<Gate>& g) {
  for (size_t i = 0; i < g.size(); ++i) {
    const Gate& a = g[i];
    if (a.kind == GateKind::Rz && !a.param.bound() &&
        std::abs(normalize_angle(a.angle)) < 1e-12) {
      g.erase(g.begin() + static_cast<long>(i));
      return true;
    }
    if (a.kind == GateKind::Xx && !a.param.bound() &&
        std::abs(normalize_angle(a.angle)) < 1e-12) {
      g.erase(g.begin() + static_cast<long>(i));
      return true;
    }
    if (a.kind == GateKind::Rz && a.param.bound() && a.param.scale == 0.0) {
      g.erase(g.begin() + static_cast<long>(i));
      return true;
    }
    if (a.kind == GateKind::H) {
      const int j = next_on_wire(g, i, a.q0);
      if (j >= 0 && g[j].kind == GateKind::H && g[j].q0 == a.q0) {
        erase_indices(g, {i, static_cast<size_t>(j)});
        return true;
      }
    }
    if (a.kind == GateKind::X) {
      // X commutes with CNOT targets and with XX legs
      size_t pos = i;
      for (;;) {
        const int j = next_on_wire(g, pos, a.q0);
        if (j < 0) break;
        const Gate& h = g[j];
        if (h.kind == GateKind::X && h.q0 == a.q0) {
          erase_indices(g, {i, static_cast<size_t>(j)});
          return true;
        }
        if ((h.kind == GateKind::Cnot && h.q1 == a.q0) || h.kind == GateKind::Xx) {
          pos = static_cast<size_t>(j);
          continue;
        }
        break;
      }
    }
    if (is_z_diag(a)) {
      // merge with the next z-diagonal, sliding through CNOT controls
      size_t pos = i;
      for (;;) {
        const int j = next_on_wire(g, pos, a.q0);
        if (j < 0) break;
        const Gate& h = g[j];
        if (is_z_diag(h) && h.q0 == a.q0) {
          const double total = z_angle(a) + z_angle(h);
          const auto merged = canonical_z(a.q0, total);
          erase_indices(g, {i, static_cast<size_t>(j)});
          if (merged) g.insert(g.begin() + static_cast<long>(i), *merged);
          return true;
        }
        if (h.kind == GateKind::Cnot && h.q0 == a.q0) {
          pos = static_cast<size_t>(j);
          continue;
        }
        break;
      }
    }
    if (a.kind == GateKind::Xx) {
      const int j0 = next_on_wire(g, i, a.q0);
      const int j1 = next_on_wire(g, i, a.q1);
      if (j0 >= 0 && j0 == j1 && g[j0].kind == GateKind::Xx) {
        const Gate& h = g[j0];
        const bool same_pair = (h.q0 == a.q0 && h.q1 == a.q1) ||
                               (h.q0 == a.q1 && h.q1 == a.q0);
        if (same_pair) {
          if (!a.param.bound() && !h.param.bound()) {
            const double total = a.angle + h.angle;
            Gate merged = Gate::xx(a.q0, a.q1, total);
            erase_indices(g, {i, static_cast<size_t>(j0)});
            if (std::abs(normalize_angle(total)) >= 1e-12)
              g.insert(g.begin() + static_cast<long>(i), merged);
            return true;
          }
          if (a.param.bound() && h.param.bound() &&
              a.param.theta_id == h.param.theta_id) {
            Gate merged = Gate::xx(a.q0, a.q1,
                                   ParamRef{a.param.theta_id,
                                            a.param.scale + h.param.scale});
            erase_indices(g, {i, static_cast<size_t>(j0)});
            if (merged.param.scale != 0.0)
              g.insert(g.begin() + static_cast<long>(i), merged);
            return true;
          }
        }
      }
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// walk classification shared by the CNOT rules
// ---------------------------------------------------------------------------

bool cancel_cnot_pairs_once(std::vector<Gate>& g) {
  for (size_t i = 0; i < g.size(); ++i) {
    if (g[i].kind != GateKind::Cnot) continue;
    const int c = g[i].q0, t = g[i].q1;
    std::vector<size_t> approved;  // x-block members consumed ahead of the scan
    bool ok = true;
    for (size_t j = i + 1; j < g.size() && ok; ++j) {
      const Gate& h = g[j];
      if (!h.touches(c) && !h.touches(t)) continue;
      if (std::find(approved.begin(), approved.end(), j) != approved.end()) continue;
      if (h.kind == GateKind::Cnot && h.q0 == c && h.q1 == t) {
        erase_indices(g, {i, j});
        return true;
      }
      if (h.touches(c) && h.touches(t)) break;
      if (h.touches(c)) {
        if (h.single_qubit() && is_z_diag(h)) continue;
        if (h.kind == GateKind::Cnot && h.q0 == c) continue;
        break;
      }
      // t side
      if (h.kind == GateKind::X) continue;
      if (h.kind == GateKind::Cnot && h.q1 == t) continue;
      if (h.kind == GateKind::Xx) continue;
      if (h.kind == GateKind::H) {
        if (auto blk = x_block_at(g, j, t)) {
          approved.push_back((*blk)[1]);
          approved.push_back((*blk)[2]);
          continue;
        }
      }
      break;
    }
  }
  return false;
}

bool junction_identity_once(std::vector<Gate>& g) {
  for (size_t i = 0; i < g.size(); ++i) {
    if (g[i].kind != GateKind::Cnot) continue;
    const int c = g[i].q0, t = g[i].q1;
    std::vector<size_t> c_singles;
    std::vector<size_t> t_reloc;
    std::vector<size_t> approved;
    int partner = -1;
    for (size_t j = i + 1; j < g.size(); ++j) {
      const Gate& h = g[j];
      if (!h.touches(c) && !h.touches(t)) continue;
      if (std::find(approved.begin(), approved.end(), j) != approved.end()) continue;
      if (h.kind == GateKind::Cnot && h.q0 == c && h.q1 == t) {
        partner = static_cast<int>(j);
        break;
      }
      if (h.touches(c) && h.touches(t)) break;
      if (h.touches(c)) {
        if (!h.single_qubit()) {
          if (h.kind == GateKind::Cnot && h.q0 == c) continue;
          break;
        }
        if (h.param.bound()) break;
        c_singles.push_back(j);
        continue;
      }
      // t side: relocatable x-type things only
      if (h.kind == GateKind::X || (h.kind == GateKind::Cnot && h.q1 == t) ||
          h.kind == GateKind::Xx) {
        t_reloc.push_back(j);
        continue;
      }
      if (h.kind == GateKind::H) {
        if (auto blk = x_block_at(g, j, t)) {
          t_reloc.push_back((*blk)[0]);
          t_reloc.push_back((*blk)[1]);
          t_reloc.push_back((*blk)[2]);
          approved.push_back((*blk)[1]);
          approved.push_back((*blk)[2]);
          continue;
        }
      }
      break;
    }
    if (partner < 0 || c_singles.empty()) continue;

    const Mat2 u = product_of(g, c_singles);
    if (is_diagonal(u)) continue;  // the pair-cancel rule owns that case
    double alpha, beta;
    if (!hadamard_form(u, alpha, beta)) continue;

    std::vector<Gate> relocated;
    for (size_t idx : t_reloc) relocated.push_back(g[idx]);
    std::vector<Gate> core;
    if (auto z = canonical_z(c, beta)) core.push_back(*z);
    core.push_back(Gate::s(c));
    core.push_back(Gate::h(t));
    core.push_back(Gate::cnot(t, c));
    core.push_back(Gate::sdg(c));
    core.push_back(Gate::h(c));
    core.push_back(Gate::s(t));
    core.push_back(Gate::h(t));
    if (auto z = canonical_z(c, alpha)) core.push_back(*z);

    std::vector<size_t> to_erase = c_singles;
    to_erase.insert(to_erase.end(), t_reloc.begin(), t_reloc.end());
    to_erase.push_back(i);
    to_erase.push_back(static_cast<size_t>(partner));
    erase_indices(g, to_erase);
    std::vector<Gate> repl = relocated;
    repl.insert(repl.end(), core.begin(), core.end());
    g.insert(g.begin() + static_cast<long>(i), repl.begin(), repl.end());
    return true;
  }
  return false;
}

}  // namespace

Circuit cancel_pass(const Circuit& in) {
  Circuit out = in;
  auto& g = out.gates;
  for (int guard = 0; guard < 200000; ++guard) {
    if (simplify_singles_once(g)) continue;
    if (cancel_cnot_pairs_once(g)) continue;
    if (junction_identity_once(g)) continue;
    return out;
  }
  throw std::runtime_error("cancel_pass did not reach a fixed point");
}

// ---------------------------------------------------------------------------
// CNOT -> XX conversion
// ---------------------------------------------------------------------------

namespace {

using M2e = Eigen::Matrix2cd;
using M4e = Eigen::Matrix4cd;

bool same_binding_negated(const Gate& a, const Gate& b) {
  if (a.param.bound() != b.param.bound()) return false;
  if (a.param.bound())
    return a.param.theta_id == b.param.theta_id &&
           std::abs(a.param.scale + b.param.scale) < 1e-15;
  return std::abs(a.angle + b.angle) < 1e-12;
}

Gate xx_like(int a, int t, const Gate& rz) {
  if (rz.param.bound()) return Gate::xx(a, t, rz.param);
  return Gate::xx(a, t, rz.angle);
}

M2e eigen2(const Mat2& m) {
  M2e o;
  o << m[0], m[1], m[2], m[3];
  return o;
}

/// Local matrix of a gate on the ordered pair (a, t); basis bit0 = a, bit1 = t.
M4e gate_on_pair_e(const Gate& g, int a, int t) {
  M4e out = M4e::Zero();
  if (g.kind == GateKind::Cnot) {
    const bool a_is_control = g.q0 == a;
    for (int idx = 0; idx < 4; ++idx) {
      const int bit_a = idx & 1, bit_t = idx >> 1;
      int oa = bit_a, ot = bit_t;
      if (a_is_control) ot ^= bit_a;
      else oa ^= bit_t;
      out(oa | (ot << 1), idx) = 1.0;
    }
    return out;
  }
  const M2e u = eigen2(mat_of(g));
  for (int idx = 0; idx < 4; ++idx) {
    const int bit_a = idx & 1, bit_t = idx >> 1;
    for (int v = 0; v < 2; ++v) {
      if (g.q0 == a) out(v | (bit_t << 1), idx) += u(v, bit_a);
      else out(bit_a | (v << 1), idx) += u(v, bit_t);
    }
  }
  return out;
}

M4e kron_at(const M2e& ua, const M2e& ut) {
  M4e o;
  for (int t1 = 0; t1 < 2; ++t1)
    for (int a1 = 0; a1 < 2; ++a1)
      for (int t0 = 0; t0 < 2; ++t0)
        for (int a0 = 0; a0 < 2; ++a0)
          o(a1 + 2 * t1, a0 + 2 * t0) = ua(a1, a0) * ut(t1, t0);
  return o;
}

M4e cnot_pair(bool a_is_control) {
  return gate_on_pair_e(a_is_control ? Gate::cnot(0, 1) : Gate::cnot(1, 0), 0, 1);
}

bool phase_equal4(const M4e& x, const M4e& y) {
  const cd tr = (x.adjoint() * y).trace();
  return std::abs(std::abs(tr) / 4.0 - 1.0) < 1e-8;
}

M2e unitarize(const M2e& m) {
  Eigen::JacobiSVD<M2e> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

/// U = ua (x) ut up to phase?
bool factor_local(const M4e& u, M2e& ua, M2e& ut) {
  Eigen::Matrix4cd r;
  for (int a1 = 0; a1 < 2; ++a1)
    for (int a0 = 0; a0 < 2; ++a0)
      for (int t1 = 0; t1 < 2; ++t1)
        for (int t0 = 0; t0 < 2; ++t0)
          r(a1 * 2 + a0, t1 * 2 + t0) = u(a1 + 2 * t1, a0 + 2 * t0);
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.singularValues()(1) > 1e-8) return false;
  const Eigen::Vector4cd uu = svd.matrixU().col(0);
  const Eigen::Vector4cd vv = svd.matrixV().col(0).conjugate();
  const double s = svd.singularValues()(0);
  ua << uu(0), uu(1), uu(2), uu(3);
  ut << vv(0), vv(1), vv(2), vv(3);
  ua = unitarize(ua * std::sqrt(s));
  ut = unitarize(ut * std::sqrt(s));
  return phase_equal4(kron_at(ua, ut), u);
}

struct OneCnotFactors {
  M2e a_pre, t_pre;   // applied before the CNOT
  bool a_is_control;
  M2e a_post, t_post;  // applied after
};

/// U = (a_post (x) t_post) . CNOT . (a_pre (x) t_pre) up to phase, if possible.
bool factor_one_cnot(const M4e& u, OneCnotFactors& out) {
  for (bool a_ctrl : {true, false}) {
    // work with the control wire as the block index
    auto blk = [&](int i, int j) {
      M2e b;
      for (int r = 0; r < 2; ++r)
        for (int cix = 0; cix < 2; ++cix)
          b(r, cix) = a_ctrl ? u(i + 2 * r, j + 2 * cix) : u(r + 2 * i, cix + 2 * j);
      return b;
    };
    // D_ij = A_i0 C_0j P + A_i1 C_1j Q with P, Q unitary, tr(P^dag Q) = 0
    Eigen::Matrix4cd S;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const M2e b = blk(i, j);
        S.col(i * 2 + j) << b(0, 0), b(0, 1), b(1, 0), b(1, 1);
      }
    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(S, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.singularValues()(2) > 1e-8) continue;
    if (svd.singularValues()(1) < 1e-8) continue;  // local, not one-CNOT
    // coefficient vectors alpha, beta live in the span of the top-2 rows of V^dag
    const Eigen::Vector4cd v1 = svd.matrixV().col(0).conjugate() * svd.singularValues()(0);
    const Eigen::Vector4cd v2 = svd.matrixV().col(1).conjugate() * svd.singularValues()(1);
    auto det_of = [](const Eigen::Vector4cd& x) { return x(0) * x(3) - x(1) * x(2); };
    auto det_mix = [](const Eigen::Vector4cd& x, const Eigen::Vector4cd& y) {
      return x(0) * y(3) + y(0) * x(3) - x(1) * y(2) - y(1) * x(2);
    };
    // det(r v1 + v2) = 0: quadratic in r
    const cd qa = det_of(v1), qb = det_mix(v1, v2), qc = det_of(v2);
    Eigen::Vector4cd alpha, beta;
    if (std::abs(qa) < 1e-12) {
      if (std::abs(qb) < 1e-12) continue;
      alpha = v1;
      beta = (-qc / qb) * v1 + v2;
    } else {
      const cd disc = std::sqrt(qb * qb - 4.0 * qa * qc);
      alpha = ((-qb + disc) / (2.0 * qa)) * v1 + v2;
      beta = ((-qb - disc) / (2.0 * qa)) * v1 + v2;
    }
    auto rank1 = [](const Eigen::Vector4cd& x, Eigen::Vector2cd& col,
                    Eigen::Vector2cd& row) {
      M2e m;
      m << x(0), x(1), x(2), x(3);
      Eigen::JacobiSVD<M2e> s2(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
      if (s2.singularValues()(1) > 1e-7 * std::max(1.0, s2.singularValues()(0)))
        return false;
      col = s2.matrixU().col(0) * std::sqrt(s2.singularValues()(0));
      row = s2.matrixV().col(0).conjugate() * std::sqrt(s2.singularValues()(0));
      return true;
    };
    Eigen::Vector2cd a0, c0, a1, c1;
    if (!rank1(alpha, a0, c0) || !rank1(beta, a1, c1)) continue;
    // normalize the control-side factors into unitary columns/rows
    if (a0.norm() < 1e-9 || a1.norm() < 1e-9) continue;
    c0 *= a0.norm();
    a0.normalize();
    c1 *= a1.norm();
    a1.normalize();
    if (std::abs(a0.dot(a1)) > 1e-6) continue;  // unitary columns are orthogonal
    // rebuild alpha/beta with the normalized factors and solve for P, Q
    Eigen::Vector4cd av, bv;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        av(i * 2 + j) = a0(i) * c0(j);
        bv(i * 2 + j) = a1(i) * c1(j);
      }
    cd aa = 0, ab = 0, bb = 0;
    for (int k = 0; k < 4; ++k) {
      aa += std::conj(av(k)) * av(k);
      ab += std::conj(av(k)) * bv(k);
      bb += std::conj(bv(k)) * bv(k);
    }
    M2e sa = M2e::Zero(), sb = M2e::Zero();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        sa += std::conj(av(i * 2 + j)) * blk(i, j);
        sb += std::conj(bv(i * 2 + j)) * blk(i, j);
      }
    const cd den = aa * bb - ab * std::conj(ab);
    if (std::abs(den) < 1e-12) continue;
    const M2e p = (bb * sa - ab * sb) / den;
    const M2e q = (-std::conj(ab) * sa + aa * sb) / den;
    // Q P^dag is proportional to B X B^dag; the eigenvectors give B and the
    // eigenvalue fixes the relative scale between the two block channels
    const M2e w = q * p.adjoint();
    Eigen::ComplexEigenSolver<M2e> es(w);
    if (es.info() != Eigen::Success) continue;
    const cd l0 = es.eigenvalues()(0), l1 = es.eigenvalues()(1);
    if (std::abs(l0) < 1e-9 || std::abs(l0 + l1) > 1e-6 * std::abs(l0)) continue;
    M2e bmat;
    bmat.col(0) = es.eigenvectors().col(0);  // +l0 channel plays the +1 role
    bmat.col(1) = es.eigenvectors().col(1);
    M2e hd;
    hd << 1, 1, 1, -1;
    hd /= std::numbers::sqrt2;
    bmat = unitarize(bmat * hd);
    const M2e dmat = unitarize(bmat.adjoint() * p);
    M2e amat;
    amat.col(0) = a0;
    amat.col(1) = a1;
    amat = unitarize(amat);
    M2e cmat;
    cmat.row(0) = c0.transpose();
    cmat.row(1) = c1.transpose();
    // absorb the channel phases into the control-side rows
    const M2e p_rec = bmat * dmat;
    M2e x2;
    x2 << 0, 1, 1, 0;
    const M2e q_rec = bmat * x2 * dmat;
    const cd sp = (p_rec.adjoint() * p).trace() / 2.0;
    const cd sq = (q_rec.adjoint() * q).trace() / 2.0;
    if (std::abs(sp) < 1e-9 || std::abs(sq) < 1e-9) continue;
    cmat.row(0) *= sp / std::abs(sp);
    cmat.row(1) *= sq / std::abs(sq);
    cmat = unitarize(cmat);

    // control-side factors act on wire a when a_ctrl, else on wire t
    OneCnotFactors f;
    f.a_is_control = a_ctrl;
    if (a_ctrl) {
      f.a_post = amat;
      f.t_post = bmat;
      f.a_pre = cmat;
      f.t_pre = dmat;
    } else {
      f.a_post = bmat;
      f.t_post = amat;
      f.a_pre = dmat;
      f.t_pre = cmat;
    }
    const M4e rec = kron_at(f.a_post, f.t_post) *
                    cnot_pair(f.a_is_control) * kron_at(f.a_pre, f.t_pre);
    if (phase_equal4(rec, u)) {
      out = f;
      return true;
    }
  }
  return false;
}

/// Append gates realizing the single-qubit unitary `u` (up to phase) on
/// `wire` in the H / S / Rz gate set, via a ZYZ Euler split.
void emit_1q(std::vector<Gate>& dst, int wire, const M2e& u) {
  const cd u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
  if (std::abs(u01) < 1e-9 && std::abs(u10) < 1e-9) {
    if (auto z = canonical_z(wire, std::arg(u11 / u00))) dst.push_back(*z);
    return;
  }
  if (std::abs(u00) < 1e-9 && std::abs(u11) < 1e-9) {
    // pure off-diagonal: U ~ X . diag(u10, u01)
    if (auto z = canonical_z(wire, std::arg(u01 / u10))) dst.push_back(*z);
    dst.push_back(Gate::x(wire));
    return;
  }
  const double beta = 2.0 * std::atan2(std::abs(u10), std::abs(u00));
  const double gamma = std::arg(u10 / u00);
  const double alpha = std::arg(-u01 / u00);
  // U ~ Rz(gamma) Ry(beta) Rz(alpha); Ry(b) = S H Rz(b) H Sdg
  if (auto z = canonical_z(wire, alpha - std::numbers::pi / 2)) dst.push_back(*z);
  dst.push_back(Gate::h(wire));
  if (auto z = canonical_z(wire, beta)) dst.push_back(*z);
  else dst.push_back(Gate::rz(wire, 0.0));
  dst.push_back(Gate::h(wire));
  if (auto z = canonical_z(wire, gamma + std::numbers::pi / 2)) dst.push_back(*z);
}

/// Literal replacement rule: CNOT(a,t) Rz(x) CNOT(b,t) Rz(-x) CNOT(a,t)
/// with b a third wire.
bool convert_five_gate_once(std::vector<Gate>& g) {
  for (size_t i = 0; i < g.size(); ++i) {
    if (g[i].kind != GateKind::Cnot) continue;
    const int a = g[i].q0, t = g[i].q1;
    int rz1 = -1, mid = -1, rz2 = -1, last = -1;
    for (size_t j = i + 1; j < g.size(); ++j) {
      const Gate& h = g[j];
      const bool on_a = h.touches(a), on_t = h.touches(t);
      if (!on_a && !on_t) continue;
      if (on_a && !on_t) break;  // keep the literal rule strict
      if (h.kind == GateKind::Rz && h.q0 == t) {
        if (rz1 < 0) rz1 = static_cast<int>(j);
        else if (mid >= 0 && rz2 < 0) rz2 = static_cast<int>(j);
        else break;
        continue;
      }
      if (h.kind == GateKind::Cnot && h.q1 == t && h.q0 != a && rz1 >= 0 && mid < 0) {
        mid = static_cast<int>(j);
        continue;
      }
      if (h.kind == GateKind::Cnot && h.q0 == a && h.q1 == t && rz2 >= 0) {
        last = static_cast<int>(j);
        break;
      }
      break;
    }
    if (last < 0) continue;
    if (!same_binding_negated(g[rz1], g[rz2])) continue;

    std::vector<Gate> open{Gate::h(a), Gate::h(t), xx_like(a, t, g[rz1]), Gate::h(t)};
    std::vector<Gate> close{Gate::h(t), xx_like(a, t, g[rz2]), Gate::h(t), Gate::h(a)};
    std::vector<Gate> out;
    out.reserve(g.size() + 8);
    for (size_t k = 0; k < g.size(); ++k) {
      if (k == i) { out.insert(out.end(), open.begin(), open.end()); continue; }
      if (static_cast<int>(k) == rz1 || static_cast<int>(k) == rz2) continue;
      if (static_cast<int>(k) == last) { out.insert(out.end(), close.begin(), close.end()); continue; }
      out.push_back(g[k]);
    }
    g = std::move(out);
    return true;
  }
  return false;
}

/// Universal window rule. Around one parameter-bound Rz(x) on wire t, gather
/// the neighboring gates on a wire pair (a, t) into constants A (after) and
/// B (before):  W = A . Rz(x)_t . B = [A C] . RZZ(x) . [C B].
/// When one of the dressed halves is local and the other a single CNOT, the
/// window rewrites to locals + XX(x) + one CNOT; both halves local drops the
/// last CNOT as well. The rewrite is verified numerically before it lands.
bool convert_window_once(std::vector<Gate>& g) {
  for (size_t k = 0; k < g.size(); ++k) {
    if (!(g[k].kind == GateKind::Rz && g[k].param.bound())) continue;
    const int t = g[k].q0;

    // candidate partner wires: from the nearest pair CNOTs in both directions
    std::vector<int> candidates;
    for (int j = static_cast<int>(k) - 1; j >= 0; --j) {
      if (!g[j].touches(t)) continue;
      if (g[j].kind == GateKind::Cnot) {
        candidates.push_back(g[j].q0 == t ? g[j].q1 : g[j].q0);
      }
      break;
    }
    for (size_t j = k + 1; j < g.size(); ++j) {
      if (!g[j].touches(t)) continue;
      if (g[j].kind == GateKind::Cnot) {
        const int other = g[j].q0 == t ? g[j].q1 : g[j].q0;
        if (candidates.empty() || candidates[0] != other) candidates.push_back(other);
      }
      break;
    }

    for (int a : candidates) {
      // gather backward: constant gates on {a,t} only, at most one pair CNOT
      std::vector<size_t> before, after;
      M4e bmat = M4e::Identity();
      int cnots_b = 0;
      bool ok = true;
      for (int j = static_cast<int>(k) - 1; j >= 0; --j) {
        const Gate& h = g[j];
        if (!h.touches(a) && !h.touches(t)) continue;
        if (h.kind == GateKind::Xx || h.param.bound()) break;
        if (h.kind == GateKind::Cnot) {
          if (!(h.touches(a) && h.touches(t))) break;
          if (++cnots_b > 1) break;
        } else if (!h.single_qubit()) {
          break;
        }
        bmat = bmat * gate_on_pair_e(h, a, t);
        before.push_back(static_cast<size_t>(j));
      }
      M4e amat = M4e::Identity();
      int cnots_a = 0;
      for (size_t j = k + 1; j < g.size(); ++j) {
        const Gate& h = g[j];
        if (!h.touches(a) && !h.touches(t)) continue;
        if (h.kind == GateKind::Xx || h.param.bound()) break;
        if (h.kind == GateKind::Cnot) {
          if (!(h.touches(a) && h.touches(t))) break;
          if (++cnots_a > 1) break;
        } else if (!h.single_qubit()) {
          break;
        }
        amat = gate_on_pair_e(h, a, t) * amat;
        after.push_back(j);
      }
      if (cnots_b + cnots_a < 2) { ok = false; }
      if (!ok) continue;
#ifdef TIVQE_CONVERT_DEBUG
      fprintf(stderr, "window k=%zu a=%d t=%d nb=%zu na=%zu cb=%d ca=%d\n", k, a, t,
              before.size(), after.size(), cnots_b, cnots_a);
#endif

      const M4e c = cnot_pair(true);  // CNOT(a -> t)
      const M4e d1 = c * bmat;        // before the RZZ
      const M4e d2 = amat * c;        // after

      M2e b1a, b1t, b2a, b2t;
      OneCnotFactors f1, f2;
      const bool d1_local = factor_local(d1, b1a, b1t);
      const bool d2_local = factor_local(d2, b2a, b2t);
      const bool d1_one = !d1_local && factor_one_cnot(d1, f1);
      const bool d2_one = !d2_local && factor_one_cnot(d2, f2);
      const int cost = (d1_local ? 0 : d1_one ? 1 : 99) + (d2_local ? 0 : d2_one ? 1 : 99);
#ifdef TIVQE_CONVERT_DEBUG
      fprintf(stderr, "  d1_local=%d d1_one=%d d2_local=%d d2_one=%d cost=%d\n",
              d1_local, d1_one, d2_local, d2_one, cost);
      if (!d2_local && !d2_one) {
        fprintf(stderr, "  d2 = [");
        for (int r = 0; r < 4; ++r)
          for (int cc = 0; cc < 4; ++cc)
            fprintf(stderr, "(%.6f,%.6f),", d2(r, cc).real(), d2(r, cc).imag());
        fprintf(stderr, "]\n");
      }
#endif
      if (cost > 1) continue;

      std::vector<Gate> repl;
      auto emit_half = [&](bool local, const M2e& la, const M2e& lt,
                           const OneCnotFactors& f) {
        if (local) {
          emit_1q(repl, a, la);
          emit_1q(repl, t, lt);
        } else {
          emit_1q(repl, a, f.a_pre);
          emit_1q(repl, t, f.t_pre);
          repl.push_back(f.a_is_control ? Gate::cnot(a, t) : Gate::cnot(t, a));
          emit_1q(repl, a, f.a_post);
          emit_1q(repl, t, f.t_post);
        }
      };
      emit_half(d1_local, b1a, b1t, f1);
      repl.push_back(Gate::h(a));
      repl.push_back(Gate::h(t));
      repl.push_back(xx_like(a, t, g[k]));
      repl.push_back(Gate::h(t));
      repl.push_back(Gate::h(a));
      emit_half(d2_local, b2a, b2t, f2);

      // verify the rewrite at a sample angle before accepting it
      {
        const double sample = 0.37;
        std::vector<double> theta_probe(64, 0.0);
        if (g[k].param.theta_id >= 0 && g[k].param.theta_id < 64)
          theta_probe[g[k].param.theta_id] = sample;
        M4e oldw = M4e::Identity();
        for (auto it = before.rbegin(); it != before.rend(); ++it)
          oldw = gate_on_pair_e(g[*it], a, t) * oldw;
        Gate rzg = g[k];
        Gate rz_resolved = Gate::rz(t, rzg.resolve(theta_probe));
        oldw = gate_on_pair_e(rz_resolved, a, t) * oldw;
        for (size_t idx : after) oldw = gate_on_pair_e(g[idx], a, t) * oldw;
        M4e neww = M4e::Identity();
        for (const Gate& rg : repl) {
          Gate use = rg;
          if (rg.kind == GateKind::Xx) {
            const double ang = rg.resolve(theta_probe);
            // xx on (a,t): build from two-qubit formula directly
            const double ch = std::cos(ang / 2), sh = std::sin(ang / 2);
            M4e xxm = M4e::Zero();
            for (int idx = 0; idx < 4; ++idx) {
              xxm(idx, idx) = ch;
              xxm(idx ^ 0b11, idx) += cd(0, -sh);
            }
            neww = xxm * neww;
            continue;
          }
          neww = gate_on_pair_e(use, a, t) * neww;
        }
        if (!phase_equal4(neww, oldw)) {
#ifdef TIVQE_CONVERT_DEBUG
          fprintf(stderr, "  verify FAILED\n");
#endif
          continue;
        }
      }

      std::vector<size_t> to_erase = before;
      to_erase.insert(to_erase.end(), after.begin(), after.end());
      to_erase.push_back(k);
      size_t insert_at = k;
      for (size_t idx : to_erase) insert_at = std::min(insert_at, idx);
      erase_indices(g, to_erase);
      g.insert(g.begin() + static_cast<long>(insert_at), repl.begin(), repl.end());
      return true;
    }
  }
  return false;
}

}  // namespace

Circuit convert_cnot_to_xx(const Circuit& in) {
  Circuit out = in;
  auto& g = out.gates;
  for (int guard = 0; guard < 20000; ++guard) {
    if (convert_five_gate_once(g)) continue;
    if (convert_window_once(g)) continue;
    break;
  }
  while (simplify_singles_once(g)) {
  }
  return out;
}


// ---------------------------------------------------------------------------
// filled-as-zero encoding
// ---------------------------------------------------------------------------

Circuit encode_filled_as_zero(const Circuit& in, uint32_t reference_wires) {
  Circuit out;
  out.n_qubits = in.n_qubits;
  out.classical_flips = in.classical_flips;

  uint32_t fx = 0, fz = 0;
  size_t start = 0;
  // consume the leading X-preparation gates
  while (start < in.gates.size() && in.gates[start].kind == GateKind::X &&
         (reference_wires >> in.gates[start].q0 & 1)) {
    fx |= 1u << in.gates[start].q0;
    ++start;
  }

  for (size_t k = start; k < in.gates.size(); ++k) {
    Gate g = in.gates[k];
    switch (g.kind) {
      case GateKind::H: {
        const uint32_t bit = 1u << g.q0;
        const bool hx = fx & bit, hz = fz & bit;
        fx = (fx & ~bit) | (hz ? bit : 0);
        fz = (fz & ~bit) | (hx ? bit : 0);
        break;
      }
      case GateKind::S:
      case GateKind::Sdg: {
        const uint32_t bit = 1u << g.q0;
        if (fx & bit) fz ^= bit;  // X -> +-Y, phase dropped
        break;
      }
      case GateKind::X:
        break;
      case GateKind::Rz: {
        const uint32_t bit = 1u << g.q0;
        if (fx & bit) {
          if (g.param.bound()) g.param.scale = -g.param.scale;
          else g.angle = -g.angle;
        }
        break;
      }
      case GateKind::Cnot: {
        const uint32_t cb = 1u << g.q0, tb = 1u << g.q1;
        if (fx & cb) fx ^= tb;
        if (fz & tb) fz ^= cb;
        break;
      }
      case GateKind::Xx: {
        const uint32_t b0 = 1u << g.q0, b1 = 1u << g.q1;
        const bool z0 = fz & b0, z1 = fz & b1;
        if (z0 != z1) {
          if (g.param.bound()) g.param.scale = -g.param.scale;
          else g.angle = -g.angle;
        }
        break;
      }
    }
    out.append(g);
  }
  // leftover Z frame only shifts phases of Z-basis outcomes; keep it explicit
  for (int q = 0; q < out.n_qubits; ++q)
    if (fz >> q & 1) out.append(Gate::rz(q, kPi));
  out.classical_flips ^= fx;
  return out;
}

}  // namespace tivqe
