#include "tivqe/hamiltonian.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace tivqe {

SpinOrbitalHamiltonian::SpinOrbitalHamiltonian(int n_spatial, int n_electrons)
    : n_spatial_(n_spatial),
      n_electrons_(n_electrons),
      h1_(static_cast<size_t>(n_spatial) * n_spatial, 0.0),
      eri_(static_cast<size_t>(n_spatial) * n_spatial * n_spatial * n_spatial, 0.0) {
  if (n_spatial <= 0 || n_spatial > 16)
    throw std::invalid_argument("n_spatial out of supported range [1,16]");
}

void SpinOrbitalHamiltonian::set_h1(int i, int j, double v) {
  h1_[i * n_spatial_ + j] = v;
  h1_[j * n_spatial_ + i] = v;
}

double SpinOrbitalHamiltonian::eri_at(int i, int j, int k, int l) const {
  const int n = n_spatial_;
  return eri_[((static_cast<size_t>(i) * n + j) * n + k) * n + l];
}

void SpinOrbitalHamiltonian::set_eri(int i, int j, int k, int l, double v) {
  const int n = n_spatial_;
  auto put = [&](int a, int b, int c, int d) {
    eri_[((static_cast<size_t>(a) * n + b) * n + c) * n + d] = v;
  };
  put(i, j, k, l); put(j, i, k, l); put(i, j, l, k); put(j, i, l, k);
  put(k, l, i, j); put(l, k, i, j); put(k, l, j, i); put(l, k, j, i);
}

double SpinOrbitalHamiltonian::one_body(int p, int q) const {
  if (spin_of(p) != spin_of(q)) return 0.0;
  return h1_at(spatial_of(p), spatial_of(q));
}

double SpinOrbitalHamiltonian::two_body(int p, int q, int r, int s) const {
  if (p == q || r == s) return 0.0;
  if (spin_of(p) != spin_of(s) || spin_of(q) != spin_of(r)) return 0.0;
  // c+_{i sigma} c+_{k tau} c_{l tau} c_{j sigma} carries (ij|kl)/2.
  return 0.5 * eri_at(spatial_of(p), spatial_of(s), spatial_of(q), spatial_of(r));
}

std::vector<OneBodyTerm> SpinOrbitalHamiltonian::one_body_terms(double tol) const {
  std::vector<OneBodyTerm> out;
  const int nso = n_spin_orbitals();
  for (int p = 0; p < nso; ++p)
    for (int q = 0; q < nso; ++q) {
      const double c = one_body(p, q);
      if (std::abs(c) > tol) out.push_back({p, q, c});
    }
  return out;
}

std::vector<TwoBodyTerm> SpinOrbitalHamiltonian::two_body_terms(double tol) const {
  std::vector<TwoBodyTerm> out;
  const int n = n_spatial_;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double v = 0.5 * eri_at(i, j, k, l);
          if (std::abs(v) <= tol) continue;
          for (int sa = 0; sa < 2; ++sa)
            for (int sb = 0; sb < 2; ++sb) {
              const int p = so_index(i, sa);
              const int s = so_index(j, sa);
              const int q = so_index(k, sb);
              const int r = so_index(l, sb);
              if (p == q || r == s) continue;  // c+c+ or cc on one mode
              out.push_back({p, q, r, s, v});
            }
        }
  return out;
}

uint64_t SpinOrbitalHamiltonian::hartree_fock_reference() const {
  uint64_t ref = 0;
  const int pairs = n_electrons_ / 2;
  for (int i = 0; i < pairs; ++i) {
    ref |= uint64_t{1} << i;
    ref |= uint64_t{1} << (i + n_spatial_);
  }
  if (n_electrons_ % 2) ref |= uint64_t{1} << pairs;
  return ref;
}

// ---------------------------------------------------------------------------
// FCIDUMP
// ---------------------------------------------------------------------------

namespace {

struct HeaderInfo {
  int norb = -1;
  int nelec = -1;
};

[[noreturn]] void fail(int line_no, const std::string& what) {
  throw FcidumpError("fcidump line " + std::to_string(line_no) + ": " + what);
}

// The namelist header runs from "&FCI" to "&END" or "/" and may span lines.
HeaderInfo parse_header(const std::string& header, int line_no) {
  HeaderInfo info;
  std::string flat;
  for (char c : header) flat += (c == '\n' || c == ',') ? ' ' : c;
  std::istringstream is(flat);
  std::string tok;
  while (is >> tok) {
    auto grab = [&](const char* key, int& dst) {
      const auto pos = tok.find(key);
      if (pos == std::string::npos) return;
      const auto eq = tok.find('=', pos);
      if (eq == std::string::npos) fail(line_no, std::string("malformed ") + key);
      const char* b = tok.data() + eq + 1;
      const char* e = tok.data() + tok.size();
      int v = 0;
      auto [p, ec] = std::from_chars(b, e, v);
      if (ec != std::errc{}) fail(line_no, std::string("non-numeric ") + key);
      dst = v;
    };
    grab("NORB", info.norb);
    grab("NELEC", info.nelec);
  }
  if (info.norb <= 0) fail(line_no, "header missing NORB");
  if (info.nelec < 0) fail(line_no, "header missing NELEC");
  return info;
}

}  // namespace

SpinOrbitalHamiltonian parse_fcidump(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;

  // Collect the header block.
  std::string header;
  bool header_done = false;
  int header_line = 0;
  while (!header_done && std::getline(in, line)) {
    ++line_no;
    if (header.empty()) {
      const auto amp = line.find('&');
      if (amp == std::string::npos) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        fail(line_no, "expected &FCI namelist header");
      }
      header_line = line_no;
    }
    header += line + "\n";
    if (line.find("&END") != std::string::npos || line.find("/") != std::string::npos)
      header_done = true;
  }
  if (!header_done) fail(line_no, "unterminated namelist header");
  const HeaderInfo info = parse_header(header, header_line);

  SpinOrbitalHamiltonian ham(info.norb, info.nelec);

  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    // Fortran D exponents occur in the wild.
    for (char& c : line)
      if (c == 'D' || c == 'd') c = 'E';
    std::istringstream ls(line);
    double value;
    long i, j, k, l;
    if (!(ls >> value >> i >> j >> k >> l)) fail(line_no, "expected: value i j k l");
    std::string extra;
    if (ls >> extra) fail(line_no, "trailing tokens: " + extra);
    auto check = [&](long idx) {
      if (idx < 0 || idx > info.norb)
        fail(line_no, "orbital index " + std::to_string(idx) + " out of range");
    };
    check(i); check(j); check(k); check(l);
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      ham.set_core(value);
    } else if (j == 0 && k == 0 && l == 0) {
      // orbital-energy record; not part of the Hamiltonian
    } else if (k == 0 && l == 0) {
      if (i == 0) fail(line_no, "one-body record with zero first index");
      ham.set_h1(static_cast<int>(i - 1), static_cast<int>(j - 1), value);
    } else if (i != 0 && j != 0 && k != 0 && l != 0) {
      ham.set_eri(static_cast<int>(i - 1), static_cast<int>(j - 1),
                  static_cast<int>(k - 1), static_cast<int>(l - 1), value);
    } else {
      fail(line_no, "unrecognized index pattern");
    }
  }
  return ham;
}

std::string write_fcidump(const SpinOrbitalHamiltonian& ham) {
  std::string out;
  char buf[128];
  const int n = ham.n_spatial();
  std::snprintf(buf, sizeof buf, "&FCI NORB=%d,NELEC=%d,MS2=%d,\n", n,
                ham.n_electrons(), ham.n_electrons() % 2);
  out += buf;
  out += " ORBSYM=";
  for (int i = 0; i < n; ++i) out += "1,";
  out += "\n ISYM=1,\n&END\n";
  auto pair_index = [](int a, int b) { return (a * (a + 1)) / 2 + b; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      for (int k = 0; k <= i; ++k)
        for (int l = 0; l <= k; ++l) {
          if (pair_index(i, j) < pair_index(k, l)) continue;
          const double v = ham.eri_at(i, j, k, l);
          if (std::abs(v) < 1e-16) continue;
          std::snprintf(buf, sizeof buf, "%23.16E %3d %3d %3d %3d\n", v, i + 1,
                        j + 1, k + 1, l + 1);
          out += buf;
        }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      const double v = ham.h1_at(i, j);
      if (std::abs(v) < 1e-16) continue;
      std::snprintf(buf, sizeof buf, "%23.16E %3d %3d   0   0\n", v, i + 1, j + 1);
      out += buf;
    }
  std::snprintf(buf, sizeof buf, "%23.16E   0   0   0   0\n", ham.e_core());
  out += buf;
  return out;
}

double hf_energy(const SpinOrbitalHamiltonian& ham, uint64_t reference) {
  if (std::popcount(reference) != ham.n_electrons())
    throw std::invalid_argument("reference particle number != n_electrons");
  const int nso = ham.n_spin_orbitals();
  double e = ham.e_core();
  for (int p = 0; p < nso; ++p)
    if (reference >> p & 1) e += ham.one_body(p, p);
  // <c+_p c+_q c_r c_s> in a determinant: nonzero only for {r,s} == {p,q}.
  for (const auto& t : ham.two_body_terms()) {
    if (!((reference >> t.p & 1) && (reference >> t.q & 1))) continue;
    if (t.r == t.q && t.s == t.p) e += t.coeff;
    else if (t.r == t.p && t.s == t.q) e -= t.coeff;
  }
  return e;
}

SpinOrbitalHamiltonian select_orbitals(const SpinOrbitalHamiltonian& ham,
                                       const std::vector<int>& frozen,
                                       const std::vector<int>& dropped) {
  const int n = ham.n_spatial();
  std::vector<int> role(n, 0);  // 0 active, 1 frozen, 2 dropped
  for (int c : frozen) {
    if (c < 0 || c >= n) throw std::invalid_argument("frozen orbital out of range");
    role[c] = 1;
  }
  for (int d : dropped) {
    if (d < 0 || d >= n) throw std::invalid_argument("dropped orbital out of range");
    if (role[d] == 1) throw std::invalid_argument("orbital both frozen and dropped");
    role[d] = 2;
  }
  std::vector<int> active;
  for (int i = 0; i < n; ++i)
    if (role[i] == 0) active.push_back(i);

  const int n_frozen = static_cast<int>(frozen.size());
  SpinOrbitalHamiltonian out(static_cast<int>(active.size()),
                             ham.n_electrons() - 2 * n_frozen);
  double core = ham.e_core();
  for (int c : frozen) core += 2.0 * ham.h1_at(c, c);
  for (int c : frozen)
    for (int d : frozen) core += 2.0 * ham.eri_at(c, c, d, d) - ham.eri_at(c, d, d, c);
  out.set_core(core);

  for (size_t a = 0; a < active.size(); ++a)
    for (size_t b = 0; b <= a; ++b) {
      const int i = active[a], j = active[b];
      double v = ham.h1_at(i, j);
      for (int c : frozen) v += 2.0 * ham.eri_at(i, j, c, c) - ham.eri_at(i, c, c, j);
      out.set_h1(static_cast<int>(a), static_cast<int>(b), v);
    }
  for (size_t a = 0; a < active.size(); ++a)
    for (size_t b = 0; b < active.size(); ++b)
      for (size_t c = 0; c < active.size(); ++c)
        for (size_t d = 0; d < active.size(); ++d)
          out.set_eri(static_cast<int>(a), static_cast<int>(b), static_cast<int>(c),
                      static_cast<int>(d),
                      ham.eri_at(active[a], active[b], active[c], active[d]));
  return out;
}

QubitHamiltonian jordan_wigner(const SpinOrbitalHamiltonian& ham) {
  return jordan_wigner(ham, identity_position(ham.n_spin_orbitals()));
}

QubitHamiltonian jordan_wigner(const SpinOrbitalHamiltonian& ham,
                               const std::vector<int>& mode_position) {
  const int nso = ham.n_spin_orbitals();
  XZSum acc;
  acc.add(XZTerm{0, 0, {ham.e_core(), 0.0}});
  for (const auto& t : ham.one_body_terms()) {
    XZSum prod;
    prod.add_product(jw_creation(t.p, nso, mode_position),
                     jw_annihilation(t.q, nso, mode_position), t.coeff);
    for (const auto& [k, c] : prod.raw())
      acc.add(XZTerm{static_cast<uint32_t>(k >> 32), static_cast<uint32_t>(k), c});
  }
  for (const auto& t : ham.two_body_terms()) {
    XZSum left, right, prod;
    left.add_product(jw_creation(t.p, nso, mode_position),
                     jw_creation(t.q, nso, mode_position), 1.0);
    right.add_product(jw_annihilation(t.r, nso, mode_position),
                      jw_annihilation(t.s, nso, mode_position), 1.0);
    prod.add_product(left, right, t.coeff);
    for (const auto& [k, c] : prod.raw())
      acc.add(XZTerm{static_cast<uint32_t>(k >> 32), static_cast<uint32_t>(k), c});
  }
  return acc.to_hamiltonian(nso);
}

}  // namespace tivqe
