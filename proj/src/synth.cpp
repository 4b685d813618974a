#include "tivqe/synth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "tivqe/passes.hpp"

namespace tivqe {

Circuit synth_bosonic(int qubit_to, int qubit_from, ParamRef theta) {
  if (qubit_to == qubit_from) throw std::invalid_argument("bosonic pair needs two wires");
  // exp[th (s+_to s-_from - h.c.)] = exp[+i th/2 X_to Y_from] exp[-i th/2 Y_to X_from]
  Circuit c;
  c.n_qubits = std::max(qubit_to, qubit_from) + 1;
  ParamRef minus = theta;
  minus.scale = -theta.scale;
  c.append(Gate::sdg(qubit_from));
  c.append(Gate::xx(qubit_to, qubit_from, minus));
  c.append(Gate::s(qubit_from));
  c.append(Gate::sdg(qubit_to));
  c.append(Gate::xx(qubit_to, qubit_from, theta));
  c.append(Gate::s(qubit_to));
  return c;
}

namespace {

void emit_basis_change(Circuit& c, int q, PauliOp op, bool inverse) {
  switch (op) {
    case PauliOp::Z:
      break;
    case PauliOp::X:
      c.append(Gate::h(q));
      break;
    case PauliOp::Y:
      if (inverse) {
        c.append(Gate::h(q));
        c.append(Gate::s(q));
      } else {
        c.append(Gate::sdg(q));
        c.append(Gate::h(q));
      }
      break;
  }
}

Circuit pauli_exponential_impl(const PauliString& pauli, const Gate& rot, int target) {
  const uint32_t support = pauli.support();
  if (support == 0) throw std::invalid_argument("empty Pauli string");
  if (!(support >> target & 1)) throw std::invalid_argument("target not in the support");

  Circuit c;
  c.n_qubits = 32 - std::countl_zero(support);
  std::vector<int> qubits;
  for (uint32_t s = support; s; s &= s - 1) qubits.push_back(std::countr_zero(s));

  for (int q : qubits) emit_basis_change(c, q, pauli.op_at(q), false);
  for (int q : qubits)
    if (q != target) c.append(Gate::cnot(q, target));
  c.append(rot);
  for (auto it = qubits.rbegin(); it != qubits.rend(); ++it)
    if (*it != target) c.append(Gate::cnot(*it, target));
  for (auto it = qubits.rbegin(); it != qubits.rend(); ++it)
    emit_basis_change(c, *it, pauli.op_at(*it), true);
  return c;
}

}  // namespace

Circuit synth_pauli_exponential(const PauliString& pauli, ParamRef angle, int target,
                                int n_qubits) {
  Circuit c = pauli_exponential_impl(pauli, Gate::rz(target, angle), target);
  c.n_qubits = std::max(c.n_qubits, n_qubits);
  return c;
}

Circuit synth_pauli_exponential(const PauliString& pauli, double angle, int target,
                                int n_qubits) {
  Circuit c = pauli_exponential_impl(pauli, Gate::rz(target, angle), target);
  c.n_qubits = std::max(c.n_qubits, n_qubits);
  return c;
}

bool AnsatzSpec::so_is_static(int so) const {
  const int mo = so < n_spatial ? so : so - n_spatial;
  return so_qubit[so] < 0 && !(mo_qubit[mo] >= 0 && mo_pair_encoded[mo]);
}

bool AnsatzSpec::has_nonbosonic() const {
  for (const auto& t : terms)
    if (t.kind == ExcitationKind::NonBosonic) return true;
  return false;
}

NonBosonicOperator expand_nonbosonic(const ExcitationTerm& term, const AnsatzSpec& spec) {
  const int nso = spec.n_spin_orbitals();
  XZSum op;
  {
    XZSum t_left, t_right, fwd, bwd;
    t_left.add_product(jw_creation(term.p, nso, spec.so_position),
                       jw_creation(term.q, nso, spec.so_position), 1.0);
    t_right.add_product(jw_annihilation(term.r, nso, spec.so_position),
                        jw_annihilation(term.s, nso, spec.so_position), 1.0);
    fwd.add_product(t_left, t_right, 1.0);
    // T+ = c+_s c+_r c_q c_p
    XZSum d_left, d_right;
    d_left.add_product(jw_creation(term.s, nso, spec.so_position),
                       jw_creation(term.r, nso, spec.so_position), 1.0);
    d_right.add_product(jw_annihilation(term.q, nso, spec.so_position),
                        jw_annihilation(term.p, nso, spec.so_position), 1.0);
    bwd.add_product(d_left, d_right, 1.0);
    for (const auto& [k, c] : fwd.raw())
      op.add(XZTerm{static_cast<uint32_t>(k >> 32), static_cast<uint32_t>(k), c});
    for (const auto& [k, c] : bwd.raw())
      op.add(XZTerm{static_cast<uint32_t>(k >> 32), static_cast<uint32_t>(k), -c});
  }

  // slot -> spin-orbital
  std::vector<int> so_of_position(nso, -1);
  for (int so = 0; so < nso; ++so) so_of_position[spec.so_position[so]] = so;

  NonBosonicOperator out;
  for (const auto& [ps, coeff] : op.complex_terms()) {
    if (std::abs(coeff.real()) > 1e-12)
      throw std::runtime_error("non-bosonic generator has a real Pauli component");
    PauliString on_wires;
    on_wires.coefficient = 1.0;
    double sign = 1.0;
    for (uint32_t sup = ps.support(); sup; sup &= sup - 1) {
      const int slot = std::countr_zero(sup);
      const int so = so_of_position[slot];
      const int mo = so < spec.n_spatial ? so : so - spec.n_spatial;
      const bool is_x = ps.x_mask >> slot & 1;
      const bool is_z = ps.z_mask >> slot & 1;
      if (spec.so_qubit[so] >= 0) {
        const int w = spec.so_qubit[so];
        if (is_x) on_wires.x_mask ^= 1u << w;
        if (is_z) on_wires.z_mask ^= 1u << w;
      } else if (spec.mo_qubit[mo] >= 0 && spec.mo_pair_encoded[mo]) {
        if (is_x)
          throw std::runtime_error("generator moves one spin-orbital of a paired MO");
        on_wires.z_mask ^= 1u << spec.mo_qubit[mo];
      } else {
        if (is_x)
          throw std::runtime_error("generator touches a static spin-orbital");
        if (spec.reference >> so & 1) sign = -sign;
      }
    }
    out.factors.emplace_back(on_wires, sign * coeff.imag());
  }
  if (out.factors.size() != 8)
    throw std::runtime_error("expected an eight-term expansion, got " +
                             std::to_string(out.factors.size()));
  return out;
}

Circuit synth_nonbosonic(const ExcitationTerm& term, const AnsatzSpec& spec,
                         ParamRef theta) {
  const NonBosonicOperator op = expand_nonbosonic(term, spec);

  // sigma_x / sigma_y sites are common to all eight factors.
  const uint32_t xy_sites = op.factors.front().first.x_mask;
  uint32_t string_sites = op.factors.front().first.z_mask & ~xy_sites;
  for (const auto& [ps, c] : op.factors) {
    if (ps.x_mask != xy_sites || (ps.z_mask & ~xy_sites) != string_sites)
      throw std::runtime_error("inconsistent non-bosonic factor supports");
  }
  if (std::popcount(xy_sites) != 4)
    throw std::runtime_error("non-bosonic term must touch four wires");

  std::vector<int> sites;
  for (uint32_t s = xy_sites; s; s &= s - 1) sites.push_back(std::countr_zero(s));
  const int target = sites[3];
  const std::array<int, 3> controls{sites[0], sites[1], sites[2]};

  auto factor_for = [&](uint32_t y_mask_sites) -> std::pair<PauliString, double> {
    PauliString want;
    want.x_mask = xy_sites;
    want.z_mask = string_sites | y_mask_sites;
    for (const auto& f : op.factors)
      if (f.first.x_mask == want.x_mask && f.first.z_mask == want.z_mask) return f;
    throw std::runtime_error("missing factor in the eight-term expansion");
  };

  Circuit out;
  out.n_qubits = spec.n_qubits;
  // Gray walk over the control letters: bit b of the code flips control[2-b],
  // so the most-flipped control is the highest one.
  for (int k = 0; k < 8; ++k) {
    const int code = k ^ (k >> 1);
    uint32_t y_sites = 0;
    int n_y = 0;
    for (int b = 0; b < 3; ++b)
      if (code >> b & 1) {
        y_sites |= 1u << controls[2 - b];
        ++n_y;
      }
    if (n_y % 2 == 0) y_sites |= 1u << target;  // total Y count stays odd

    const auto [pauli, c] = factor_for(y_sites);
    ParamRef rot = theta;
    rot.scale = -2.0 * c * theta.scale;

    Circuit exp_c;
    exp_c.n_qubits = spec.n_qubits;
    for (int q : sites) emit_basis_change(exp_c, q, pauli.op_at(q), false);
    for (uint32_t s = string_sites; s; s &= s - 1)
      exp_c.append(Gate::cnot(std::countr_zero(s), target));
    for (int q : controls) exp_c.append(Gate::cnot(q, target));
    exp_c.append(Gate::rz(target, rot));
    for (auto it = controls.rbegin(); it != controls.rend(); ++it)
      exp_c.append(Gate::cnot(*it, target));
    {
      std::vector<int> sq;
      for (uint32_t s = string_sites; s; s &= s - 1) sq.push_back(std::countr_zero(s));
      for (auto it = sq.rbegin(); it != sq.rend(); ++it)
        exp_c.append(Gate::cnot(*it, target));
    }
    for (auto it = sites.rbegin(); it != sites.rend(); ++it)
      emit_basis_change(exp_c, *it, pauli.op_at(*it), true);
    out.append(exp_c);
  }
  return cancel_pass(out);
}

namespace {

std::vector<TrotterSlice> product_formula(int n_terms, int order, double lambda);

std::vector<TrotterSlice> s1(int n_terms, double lambda) {
  std::vector<TrotterSlice> out;
  for (int j = 0; j < n_terms; ++j) out.push_back({j, lambda});
  return out;
}

std::vector<TrotterSlice> s2(int n_terms, double lambda) {
  std::vector<TrotterSlice> out;
  for (int j = 0; j < n_terms; ++j) out.push_back({j, lambda / 2});
  for (int j = n_terms - 1; j >= 0; --j) out.push_back({j, lambda / 2});
  return out;
}

std::vector<TrotterSlice> product_formula(int n_terms, int order, double lambda) {
  if (order == 1) return s1(n_terms, lambda);
  if (order == 2) return s2(n_terms, lambda);
  const int k = order / 2;
  const double pk = 1.0 / (4.0 - std::pow(4.0, 1.0 / (2.0 * k - 1.0)));
  std::vector<TrotterSlice> out;
  const auto outer = product_formula(n_terms, order - 2, pk * lambda);
  const auto inner = product_formula(n_terms, order - 2, (1.0 - 4.0 * pk) * lambda);
  for (int rep = 0; rep < 2; ++rep) out.insert(out.end(), outer.begin(), outer.end());
  out.insert(out.end(), inner.begin(), inner.end());
  for (int rep = 0; rep < 2; ++rep) out.insert(out.end(), outer.begin(), outer.end());
  return out;
}

}  // namespace

std::vector<TrotterSlice> trotterize(const AnsatzSpec& spec, TrotterConfig cfg) {
  if (cfg.steps < 1) throw std::invalid_argument("trotter steps must be >= 1");
  if (cfg.order < 1 || (cfg.order > 1 && cfg.order % 2 != 0))
    throw std::invalid_argument("trotter order must be 1 or even");
  const double lambda = 1.0 / cfg.steps;
  std::vector<TrotterSlice> out;
  const auto one = product_formula(static_cast<int>(spec.terms.size()), cfg.order, lambda);
  for (int r = 0; r < cfg.steps; ++r) out.insert(out.end(), one.begin(), one.end());
  return out;
}

Circuit assemble(const AnsatzSpec& spec, TrotterConfig cfg, AssembleOptions opts) {
  for (size_t i = 0; i < spec.terms.size(); ++i)
    if (spec.terms[i].parameter_id != static_cast<int>(i))
      throw std::invalid_argument("parameter ids must be contiguous 0..n-1");

  Circuit c;
  c.n_qubits = spec.n_qubits;

  // Reference preparation.
  uint32_t prep = 0;
  for (int mo = 0; mo < spec.n_spatial; ++mo) {
    if (spec.mo_qubit[mo] < 0) continue;
    const bool occ_a = spec.reference >> mo & 1;
    const bool occ_b = spec.reference >> (mo + spec.n_spatial) & 1;
    if (occ_a != occ_b)
      throw std::invalid_argument("open-shell MO cannot enter the pair encoding");
    if (occ_a) prep |= 1u << spec.mo_qubit[mo];
  }
  for (int so = 0; so < spec.n_spin_orbitals(); ++so) {
    const int mo = so < spec.n_spatial ? so : so - spec.n_spatial;
    if (spec.so_qubit[so] < 0 || spec.mo_qubit[mo] >= 0) continue;
    if (spec.reference >> so & 1) prep |= 1u << spec.so_qubit[so];
  }
  for (int q = 0; q < spec.n_qubits; ++q)
    if (prep >> q & 1) c.append(Gate::x(q));

  const auto slices = trotterize(spec, cfg);
  bool reencoded = false;
  for (const auto& slice : slices) {
    const ExcitationTerm& t = spec.terms[slice.term_index];
    ParamRef theta{t.parameter_id, slice.scale};
    if (t.kind == ExcitationKind::NonBosonic && !reencoded) {
      for (int mo = 0; mo < spec.n_spatial; ++mo)
        if (spec.ancilla_qubit[mo] >= 0)
          c.append(Gate::cnot(spec.mo_qubit[mo], spec.ancilla_qubit[mo]));
      reencoded = true;
    }
    if (t.kind == ExcitationKind::Bosonic) {
      const bool from_paired = spec.mo_pair_encoded[t.mo_from] || !reencoded;
      const bool to_paired = spec.mo_pair_encoded[t.mo_to] || !reencoded;
      if (from_paired && to_paired) {
        c.append(synth_bosonic(spec.mo_qubit[t.mo_to], spec.mo_qubit[t.mo_from], theta));
      } else {
        c.append(synth_nonbosonic(t, spec, theta));
      }
    } else {
      c.append(synth_nonbosonic(t, spec, theta));
    }
  }

  if (opts.cancel) c = cancel_pass(c);
  if (opts.convert_to_xx) c = convert_cnot_to_xx(c);
  if (opts.filled_as_zero) c = encode_filled_as_zero(c, prep);
  return c;
}

}  // namespace tivqe
