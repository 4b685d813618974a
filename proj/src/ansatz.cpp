#include "tivqe/ansatz.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace tivqe {

namespace {

int mo_of(int so, int n_spatial) { return so < n_spatial ? so : so - n_spatial; }

std::set<int> support_sos(const ExcitationTerm& t) {
  return {t.p, t.q, t.r, t.s};
}

}  // namespace

std::vector<ExcitationTerm> order_terms(const std::vector<ExcitationTerm>& terms,
                                        int n_spatial) {
  if (terms.size() < 2) return terms;
  // Support of a compiled term: the four sigma_x/sigma_y spin-orbitals plus
  // the sigma_z string between the index pairs.
  auto string_sos = [&](const ExcitationTerm& t) {
    std::set<int> zs;
    auto add_range = [&](int lo, int hi) {
      for (int v = std::min(lo, hi) + 1; v < std::max(lo, hi); ++v) zs.insert(v);
    };
    add_range(t.s, t.r);
    add_range(t.p, t.q);
    for (int v : support_sos(t)) zs.erase(v);
    (void)n_spatial;
    return zs;
  };

  std::vector<std::set<int>> xy(terms.size()), full(terms.size());
  for (size_t i = 0; i < terms.size(); ++i) {
    xy[i] = support_sos(terms[i]);
    full[i] = xy[i];
    for (int v : string_sos(terms[i])) full[i].insert(v);
  }

  std::vector<bool> used(terms.size(), false);
  std::vector<ExcitationTerm> out;
  size_t current = 0;
  used[0] = true;
  out.push_back(terms[0]);
  for (size_t step = 1; step < terms.size(); ++step) {
    int best = -1, best_overlap = -1;
    bool best_has_xy = false;
    for (size_t j = 0; j < terms.size(); ++j) {
      if (used[j]) continue;
      int overlap = 0;
      for (int v : full[j])
        if (full[current].count(v)) ++overlap;
      bool has_xy = false;
      for (int v : xy[j])
        if (xy[current].count(v)) { has_xy = true; break; }
      if (std::pair(has_xy, overlap) > std::pair(best_has_xy, best_overlap)) {
        best = static_cast<int>(j);
        best_overlap = overlap;
        best_has_xy = has_xy;
      }
    }
    used[best] = true;
    out.push_back(terms[best]);
    current = static_cast<size_t>(best);
  }
  return out;
}

std::vector<int> map_qubits(const std::vector<ExcitationTerm>& terms, int n_orbitals) {
  std::vector<int> identity(n_orbitals);
  for (int i = 0; i < n_orbitals; ++i) identity[i] = i;
  if (terms.empty()) return identity;

  // co-occurrence counts over term supports
  std::map<std::pair<int, int>, int> counts;
  for (const auto& t : terms) {
    std::vector<int> sup(support_sos(t).begin(), support_sos(t).end());
    for (size_t i = 0; i < sup.size(); ++i)
      for (size_t j = i + 1; j < sup.size(); ++j)
        counts[{sup[i], sup[j]}]++;
  }
  std::vector<std::tuple<int, int, int>> pairs;  // (-count, a, b)
  for (const auto& [pq, c] : counts) pairs.emplace_back(-c, pq.first, pq.second);
  std::sort(pairs.begin(), pairs.end());

  // grow chains whose endpoints accept new neighbors
  std::vector<std::vector<int>> chains;
  std::vector<int> chain_of(n_orbitals, -1);
  auto at_end = [&](int orb) {
    const auto& ch = chains[chain_of[orb]];
    return ch.front() == orb || ch.back() == orb;
  };
  for (const auto& [negc, a, b] : pairs) {
    (void)negc;
    const bool pa = chain_of[a] >= 0, pb = chain_of[b] >= 0;
    if (!pa && !pb) {
      chain_of[a] = chain_of[b] = static_cast<int>(chains.size());
      chains.push_back({a, b});
    } else if (pa && !pb && at_end(a)) {
      auto& ch = chains[chain_of[a]];
      if (ch.front() == a) ch.insert(ch.begin(), b);
      else ch.push_back(b);
      chain_of[b] = chain_of[a];
    } else if (pb && !pa && at_end(b)) {
      auto& ch = chains[chain_of[b]];
      if (ch.front() == b) ch.insert(ch.begin(), a);
      else ch.push_back(a);
      chain_of[a] = chain_of[b];
    } else if (pa && pb && chain_of[a] != chain_of[b] && at_end(a) && at_end(b)) {
      auto& ca = chains[chain_of[a]];
      auto& cb = chains[chain_of[b]];
      if (ca.back() != a) std::reverse(ca.begin(), ca.end());
      if (cb.front() != b) std::reverse(cb.begin(), cb.end());
      const int idx_b = chain_of[b];
      for (int v : cb) {
        ca.push_back(v);
        chain_of[v] = chain_of[a];
      }
      chains[idx_b].clear();
    }
  }

  std::vector<int> order;
  for (const auto& ch : chains)
    for (int v : ch) order.push_back(v);
  for (int v = 0; v < n_orbitals; ++v)
    if (chain_of[v] < 0) order.push_back(v);

  std::vector<int> position(n_orbitals, -1);
  for (size_t slot = 0; slot < order.size(); ++slot) position[order[slot]] = static_cast<int>(slot);

  // keep the greedy layout only when it helps
  auto total_string = [&](const std::vector<int>& pos) {
    long sum = 0;
    for (const auto& t : terms) {
      auto span = [&](int u, int v) {
        return std::abs(pos[u] - pos[v]) - 1;
      };
      sum += std::max(0, span(t.s, t.r)) + std::max(0, span(t.p, t.q));
    }
    return sum;
  };
  if (total_string(position) > total_string(identity)) return identity;
  return position;
}

AnsatzSpec build_ucc_ansatz(const std::vector<RankedExcitation>& ranked, size_t n,
                            int n_spatial, uint64_t reference) {
  if (n > ranked.size())
    throw std::invalid_argument("requested more terms than the ranking offers");

  AnsatzSpec spec;
  spec.n_spatial = n_spatial;
  spec.reference = reference;

  std::vector<ExcitationTerm> bos, nonbos;
  for (size_t i = 0; i < n; ++i) {
    const RankedExcitation& r = ranked[i];
    ExcitationTerm t;
    t.kind = r.kind;
    t.p = r.p; t.q = r.q; t.r = r.r; t.s = r.s;
    if (r.kind == ExcitationKind::Bosonic) {
      t.mo_to = mo_of(r.p, n_spatial);
      t.mo_from = mo_of(r.s, n_spatial);
      bos.push_back(t);
    } else {
      nonbos.push_back(t);
    }
  }
  nonbos = order_terms(nonbos, n_spatial);
  spec.terms = bos;
  spec.terms.insert(spec.terms.end(), nonbos.begin(), nonbos.end());
  for (size_t i = 0; i < spec.terms.size(); ++i)
    spec.terms[i].parameter_id = static_cast<int>(i);
  spec.n_parameters = static_cast<int>(spec.terms.size());

  // ---- register layout -----------------------------------------------
  const int nso = 2 * n_spatial;
  std::set<int> bos_mos;
  for (const auto& t : bos) {
    bos_mos.insert(t.mo_from);
    bos_mos.insert(t.mo_to);
  }
  std::set<int> nb_sos;
  for (const auto& t : nonbos)
    for (int v : support_sos(t)) nb_sos.insert(v);

  std::set<int> reencode;  // MOs in the bosonic block touched by non-bosonic supports
  for (int so : nb_sos)
    if (bos_mos.count(mo_of(so, n_spatial))) reencode.insert(mo_of(so, n_spatial));

  spec.mo_qubit.assign(n_spatial, -1);
  spec.ancilla_qubit.assign(n_spatial, -1);
  spec.so_qubit.assign(nso, -1);
  spec.mo_pair_encoded.assign(n_spatial, 0);

  int next = 0;
  for (int mo : bos_mos) spec.mo_qubit[mo] = next++;
  for (int mo : reencode) spec.ancilla_qubit[mo] = next++;
  for (int mo : bos_mos)
    if (!reencode.count(mo)) spec.mo_pair_encoded[mo] = 1;
  for (int mo : reencode) {
    spec.so_qubit[mo] = spec.mo_qubit[mo];               // alpha
    spec.so_qubit[mo + n_spatial] = spec.ancilla_qubit[mo];  // beta
  }
  std::vector<int> direct;
  for (int so : nb_sos)
    if (spec.so_qubit[so] < 0 && !bos_mos.count(mo_of(so, n_spatial))) direct.push_back(so);
  for (int so : direct) spec.so_qubit[so] = next++;
  spec.n_qubits = next;

  // ---- fermionic ordering ---------------------------------------------
  // Dynamic spin-orbitals first (adjacency-optimized over the non-bosonic
  // supports), then the pair-encoded ones, then everything static; strings
  // therefore never cross a static or paired mode.
  std::vector<int> dynamic;
  for (int so = 0; so < nso; ++so)
    if (spec.so_qubit[so] >= 0) dynamic.push_back(so);

  std::vector<ExcitationTerm> nb_renumbered = nonbos;
  std::vector<int> dyn_index(nso, -1);
  for (size_t i = 0; i < dynamic.size(); ++i) dyn_index[dynamic[i]] = static_cast<int>(i);
  for (auto& t : nb_renumbered) {
    t.p = dyn_index[t.p]; t.q = dyn_index[t.q]; t.r = dyn_index[t.r]; t.s = dyn_index[t.s];
  }
  const std::vector<int> dyn_pos = map_qubits(nb_renumbered, static_cast<int>(dynamic.size()));

  spec.so_position.assign(nso, -1);
  for (size_t i = 0; i < dynamic.size(); ++i) spec.so_position[dynamic[i]] = dyn_pos[i];
  int slot = static_cast<int>(dynamic.size());
  for (int so = 0; so < nso; ++so) {
    const int mo = mo_of(so, n_spatial);
    if (spec.so_position[so] < 0 && spec.mo_qubit[mo] >= 0 && spec.mo_pair_encoded[mo])
      spec.so_position[so] = slot++;
  }
  for (int so = 0; so < nso; ++so)
    if (spec.so_position[so] < 0) spec.so_position[so] = slot++;

  return spec;
}

QubitHamiltonian encode_hamiltonian(const AnsatzSpec& spec,
                                    const SpinOrbitalHamiltonian& ham) {
  if (ham.n_spatial() != spec.n_spatial)
    throw std::invalid_argument("ansatz and Hamiltonian disagree on orbital count");
  const QubitHamiltonian full = jordan_wigner(ham, spec.so_position);
  const int nso = spec.n_spin_orbitals();

  std::vector<int> so_of_position(nso, -1);
  for (int so = 0; so < nso; ++so) so_of_position[spec.so_position[so]] = so;

  XZSum acc;
  acc.add(XZTerm{0, 0, {full.constant, 0.0}});
  for (const auto& term : full.terms) {
    uint32_t wx = 0, wz = 0;
    double sign = 1.0;
    // per-MO pair letters for pair-encoded MOs
    std::map<int, std::pair<int, int>> pair_ops;  // mo -> (op_alpha, op_beta); -1 = I
    bool dropped = false;
    for (uint32_t sup = term.support(); sup && !dropped; sup &= sup - 1) {
      const int slot = std::countr_zero(sup);
      const int so = so_of_position[slot];
      const int mo = mo_of(so, spec.n_spatial);
      const PauliOp op = term.op_at(slot);
      if (spec.so_qubit[so] >= 0) {
        const int w = spec.so_qubit[so];
        if (op != PauliOp::Z) wx |= 1u << w;
        if (op != PauliOp::X) wz ^= 1u << w;
      } else if (spec.mo_qubit[mo] >= 0 && spec.mo_pair_encoded[mo]) {
        auto& ops = pair_ops.try_emplace(mo, std::pair<int, int>{-1, -1}).first->second;
        if (so < spec.n_spatial) ops.first = static_cast<int>(op);
        else ops.second = static_cast<int>(op);
      } else {
        if (op != PauliOp::Z) { dropped = true; break; }
        if (spec.reference >> so & 1) sign = -sign;
      }
    }
    if (dropped) continue;
    for (const auto& [mo, ops] : pair_ops) {
      const int w = spec.mo_qubit[mo];
      const int a = ops.first, b = ops.second;
      const int Z = static_cast<int>(PauliOp::Z);
      const int X = static_cast<int>(PauliOp::X);
      const int Y = static_cast<int>(PauliOp::Y);
      if (a == -1 && b == Z) { wz ^= 1u << w; continue; }
      if (b == -1 && a == Z) { wz ^= 1u << w; continue; }
      if (a == Z && b == Z) continue;  // identity on the pair qubit
      if (a == X && b == X) { wx |= 1u << w; continue; }
      if (a == Y && b == Y) { wx |= 1u << w; sign = -sign; continue; }
      if ((a == X && b == Y) || (a == Y && b == X)) {
        wx |= 1u << w;
        wz ^= 1u << w;
        continue;
      }
      dropped = true;  // moves one spin-orbital of the pair: no matrix element
      break;
    }
    if (dropped) continue;
    // rebuild the coefficient: Y letters on wires carry the -i bookkeeping
    // both in `full` and in the wire string, so the real coefficient moves
    // across unchanged up to the collected sign.
    std::complex<double> c = term.coefficient * sign;
    const int ny = std::popcount(wx & wz);
    switch (ny & 3) {  // multiply by i^{ny} to store in X^x Z^z form
      case 0: break;
      case 1: c *= std::complex<double>(0, 1); break;
      case 2: c *= -1.0; break;
      case 3: c *= std::complex<double>(0, -1); break;
    }
    acc.add(XZTerm{wx, wz, c});
  }
  return acc.to_hamiltonian(spec.n_qubits);
}

std::string AnsatzSpec::to_json() const {
  nlohmann::json j;
  j["n_spatial"] = n_spatial;
  j["reference"] = reference;
  j["n_parameters"] = n_parameters;
  j["n_qubits"] = n_qubits;
  auto& terms_j = j["terms"] = nlohmann::json::array();
  for (const auto& t : terms) {
    nlohmann::json tj;
    tj["kind"] = t.kind == ExcitationKind::Bosonic ? "bosonic" : "non-bosonic";
    tj["so_indices"] = {t.p, t.q, t.r, t.s};
    if (t.kind == ExcitationKind::Bosonic) tj["mo_pair"] = {t.mo_from, t.mo_to};
    tj["parameter_id"] = t.parameter_id;
    terms_j.push_back(tj);
  }
  j["mo_qubit"] = mo_qubit;
  j["ancilla_qubit"] = ancilla_qubit;
  j["so_qubit"] = so_qubit;
  j["mo_pair_encoded"] = mo_pair_encoded;
  j["so_position"] = so_position;
  return j.dump(2);
}

AnsatzSpec AnsatzSpec::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  AnsatzSpec s;
  s.n_spatial = j.at("n_spatial").get<int>();
  s.reference = j.at("reference").get<uint64_t>();
  s.n_parameters = j.at("n_parameters").get<int>();
  s.n_qubits = j.at("n_qubits").get<int>();
  for (const auto& tj : j.at("terms")) {
    ExcitationTerm t;
    t.kind = tj.at("kind").get<std::string>() == "bosonic" ? ExcitationKind::Bosonic
                                                           : ExcitationKind::NonBosonic;
    const auto& so = tj.at("so_indices");
    t.p = so.at(0); t.q = so.at(1); t.r = so.at(2); t.s = so.at(3);
    if (tj.contains("mo_pair")) {
      t.mo_from = tj.at("mo_pair").at(0);
      t.mo_to = tj.at("mo_pair").at(1);
    }
    t.parameter_id = tj.at("parameter_id").get<int>();
    s.terms.push_back(t);
  }
  s.mo_qubit = j.at("mo_qubit").get<std::vector<int>>();
  s.ancilla_qubit = j.at("ancilla_qubit").get<std::vector<int>>();
  s.so_qubit = j.at("so_qubit").get<std::vector<int>>();
  s.mo_pair_encoded = j.at("mo_pair_encoded").get<std::vector<uint8_t>>();
  s.so_position = j.at("so_position").get<std::vector<int>>();
  return s;
}

}  // namespace tivqe
