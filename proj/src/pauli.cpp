#include "tivqe/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace tivqe {

int PauliString::weight() const { return std::popcount(support()); }

PauliOp PauliString::op_at(int q) const {
  const uint32_t bit = 1u << q;
  if (x_mask & bit) return (z_mask & bit) ? PauliOp::Y : PauliOp::X;
  return PauliOp::Z;
}

std::map<int, PauliOp> PauliString::factors() const {
  std::map<int, PauliOp> out;
  uint32_t s = support();
  while (s) {
    const int q = std::countr_zero(s);
    out.emplace(q, op_at(q));
    s &= s - 1;
  }
  return out;
}

std::string PauliString::to_string(int n_qubits) const {
  std::string s;
  for (int q = 0; q < n_qubits; ++q) {
    const uint32_t bit = 1u << q;
    if (!(support() & bit)) {
      s += 'I';
    } else {
      switch (op_at(q)) {
        case PauliOp::X: s += 'X'; break;
        case PauliOp::Y: s += 'Y'; break;
        case PauliOp::Z: s += 'Z'; break;
      }
    }
  }
  return s;
}

XZTerm mul(const XZTerm& a, const XZTerm& b) {
  XZTerm out;
  out.x = a.x ^ b.x;
  out.z = a.z ^ b.z;
  out.coeff = a.coeff * b.coeff;
  if (std::popcount(a.z & b.x) & 1) out.coeff = -out.coeff;
  return out;
}

namespace {
inline uint64_t key_of(uint32_t x, uint32_t z) {
  return (static_cast<uint64_t>(x) << 32) | z;
}
}  // namespace

void XZSum::add(const XZTerm& t) {
  auto& c = terms_[key_of(t.x, t.z)];
  c += t.coeff;
  if (std::abs(c) < 1e-16) terms_.erase(key_of(t.x, t.z));
}

void XZSum::add_product(const XZSum& a, const XZSum& b, std::complex<double> scale) {
  for (const auto& [ka, ca] : a.terms_) {
    const XZTerm ta{static_cast<uint32_t>(ka >> 32), static_cast<uint32_t>(ka), ca};
    for (const auto& [kb, cb] : b.terms_) {
      const XZTerm tb{static_cast<uint32_t>(kb >> 32), static_cast<uint32_t>(kb), cb};
      XZTerm t = mul(ta, tb);
      t.coeff *= scale;
      add(t);
    }
  }
}

std::vector<std::pair<PauliString, std::complex<double>>> XZSum::complex_terms() const {
  // X_q Z_q = -i Y_q, so every X/Z overlap contributes a factor -i once the
  // letter is renamed to Y.
  std::vector<std::pair<PauliString, std::complex<double>>> out;
  out.reserve(terms_.size());
  for (const auto& [k, c] : terms_) {
    const uint32_t x = static_cast<uint32_t>(k >> 32);
    const uint32_t z = static_cast<uint32_t>(k);
    std::complex<double> coeff = c;
    const int n_y = std::popcount(x & z);
    switch (n_y & 3) {
      case 0: break;
      case 1: coeff *= std::complex<double>(0, -1); break;
      case 2: coeff *= -1.0; break;
      case 3: coeff *= std::complex<double>(0, 1); break;
    }
    PauliString ps;
    ps.x_mask = x;
    ps.z_mask = z;
    ps.coefficient = 1.0;
    out.emplace_back(ps, coeff);
  }
  return out;
}

QubitHamiltonian XZSum::to_hamiltonian(int n_qubits, double prune_tol, double imag_tol) const {
  QubitHamiltonian h;
  h.n_qubits = n_qubits;
  for (auto& [ps, c] : complex_terms()) {
    if (std::abs(c.imag()) > imag_tol)
      throw std::runtime_error("non-Hermitian residue in Pauli expansion: imag=" +
                               std::to_string(c.imag()));
    if (std::abs(c.real()) < prune_tol) continue;
    if (ps.support() == 0) {
      h.constant += c.real();
      continue;
    }
    PauliString t = ps;
    t.coefficient = c.real();
    h.terms.push_back(t);
  }
  std::sort(h.terms.begin(), h.terms.end(), [](const PauliString& a, const PauliString& b) {
    if (std::abs(a.coefficient) != std::abs(b.coefficient))
      return std::abs(a.coefficient) > std::abs(b.coefficient);
    if (a.z_mask != b.z_mask) return a.z_mask < b.z_mask;
    return a.x_mask < b.x_mask;
  });
  return h;
}

std::vector<int> identity_position(int n_modes) {
  std::vector<int> p(n_modes);
  for (int i = 0; i < n_modes; ++i) p[i] = i;
  return p;
}

namespace {
// sigma_plus = (X + XZ)/2 maps |0> to |1>; sigma_minus = (X - XZ)/2.
XZSum jw_ladder(int mode, int n_modes, const std::vector<int>& position, bool dagger) {
  const int slot = position.at(mode);
  uint32_t tail = 0;
  for (int m = 0; m < n_modes; ++m)
    if (position[m] > slot) tail |= 1u << position[m];
  const uint32_t xq = 1u << slot;
  XZSum s;
  s.add(XZTerm{xq, tail, {0.5, 0.0}});
  s.add(XZTerm{xq, tail | xq, {dagger ? 0.5 : -0.5, 0.0}});
  return s;
}
}  // namespace

XZSum jw_creation(int mode, int n_modes, const std::vector<int>& position) {
  return jw_ladder(mode, n_modes, position, true);
}

XZSum jw_annihilation(int mode, int n_modes, const std::vector<int>& position) {
  return jw_ladder(mode, n_modes, position, false);
}

}  // namespace tivqe
