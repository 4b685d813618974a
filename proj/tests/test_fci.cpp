#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "test_util.hpp"
#include "tivqe/fci.hpp"

using namespace tivqe;

namespace {
SpinOrbitalHamiltonian water() {
  std::ifstream in(test::data_path("h2o_sto3g.fcidump"));
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_fcidump(ss.str());
}
}  // namespace

TEST_CASE("determinant basis fixes particle number and Sz") {
  const auto basis = determinant_basis(3, 4);
  CHECK(basis.size() == 9);  // C(3,2)^2
  for (uint64_t d : basis) {
    CHECK(std::popcount(d) == 4);
    CHECK(std::popcount(d & 0b111) == 2);
  }
  // odd electron count: particle number only
  const auto odd = determinant_basis(2, 3);
  CHECK(odd.size() == 4);  // C(4,3)
}

TEST_CASE("single-determinant problem returns the hf energy") {
  SpinOrbitalHamiltonian ham(1, 2);
  ham.set_h1(0, 0, -1.0);
  ham.set_eri(0, 0, 0, 0, 0.5);
  const auto sol = fci_ground_state(ham);
  CHECK(sol.energy == doctest::Approx(-1.5));
  CHECK(sol.basis.size() == 1);
}

TEST_CASE("fci matches dense diagonalization on random problems") {
  for (uint64_t seed : {21u, 22u, 23u}) {
    const auto ham = test::random_spatial_hamiltonian(3, 2, seed);
    const auto sol = fci_ground_state(ham);

    const auto basis = determinant_basis(3, 2);
    const auto mat = determinant_matrix(ham, basis);
    Eigen::MatrixXd m(basis.size(), basis.size());
    for (size_t i = 0; i < basis.size(); ++i)
      for (size_t j = 0; j < basis.size(); ++j) m(i, j) = mat[i * basis.size() + j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    CHECK(sol.energy == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-10));

    // amplitudes agree up to a global sign
    Eigen::VectorXd v = es.eigenvectors().col(0);
    double dot = 0.0;
    for (size_t i = 0; i < basis.size(); ++i) dot += v(i) * sol.amplitudes[i];
    CHECK(std::abs(std::abs(dot) - 1.0) < 1e-9);
  }
}

TEST_CASE("fci is normalized and variationally below hf") {
  for (uint64_t seed : {31u, 32u}) {
    const auto ham = test::random_spatial_hamiltonian(3, 4, seed);
    const auto sol = fci_ground_state(ham);
    double norm = 0.0;
    for (double a : sol.amplitudes) norm += a * a;
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sol.energy <= hf_energy(ham, ham.hartree_fock_reference()) + 1e-12);
  }
}

TEST_CASE("water fci energy and correlation") {
  const auto ham = water();
  const auto sol = fci_ground_state(ham);
  CHECK(std::abs(sol.energy - (-75.0116)) < 1.5e-3);
  const double hf = hf_energy(ham, ham.hartree_fock_reference());
  CHECK(std::abs((sol.energy - hf) - (-49.2e-3)) < 2e-3);
}

TEST_CASE("ranking: the reference never appears and order is by |amplitude|") {
  const auto ham = test::random_spatial_hamiltonian(3, 2, 41);
  const auto sol = fci_ground_state(ham);
  const uint64_t ref = ham.hartree_fock_reference();
  const auto ranked = rank_excitations(sol, ref, 100, ham.n_spatial());
  for (size_t i = 0; i + 1 < ranked.size(); ++i)
    CHECK(std::abs(ranked[i].amplitude) >= std::abs(ranked[i + 1].amplitude) - 1e-15);
  for (const auto& r : ranked) {
    // applying the excitation to ref must leave ref
    const uint64_t moved = (ref & ~((uint64_t{1} << r.s) | (uint64_t{1} << r.r))) |
                           (uint64_t{1} << r.p) | (uint64_t{1} << r.q);
    CHECK(moved != ref);
  }
}

TEST_CASE("toy two-orbital system: the unique double matches the dense vector") {
  SpinOrbitalHamiltonian ham(2, 2);
  ham.set_h1(0, 0, -1.2);
  ham.set_h1(1, 1, -0.4);
  ham.set_eri(0, 0, 0, 0, 0.6);
  ham.set_eri(1, 1, 1, 1, 0.6);
  ham.set_eri(0, 0, 1, 1, 0.3);
  ham.set_eri(0, 1, 1, 0, 0.1);
  ham.set_eri(0, 1, 0, 1, 0.05);
  const auto sol = fci_ground_state(ham);
  const uint64_t ref = ham.hartree_fock_reference();
  const auto ranked = rank_excitations(sol, ref, 10, 2);
  REQUIRE(!ranked.empty());
  CHECK(ranked[0].kind == ExcitationKind::Bosonic);
  CHECK(ranked[0].p == 1);
  CHECK(ranked[0].q == 3);
  CHECK(ranked[0].r == 2);
  CHECK(ranked[0].s == 0);
  // amplitude equals the coefficient of the doubly excited determinant
  const uint64_t excited = 0b1010;
  CHECK(ranked[0].amplitude == doctest::Approx(sol.amplitude_of(excited)).epsilon(1e-12));
}

TEST_CASE("water: the top-ranked excitation is an electron-pair move") {
  const auto ham = water();
  const auto sol = fci_ground_state(ham);
  const auto ranked = rank_excitations(sol, ham.hartree_fock_reference(), 21, 7);
  REQUIRE(ranked.size() == 21);
  CHECK(ranked[0].kind == ExcitationKind::Bosonic);
  // pair excitation out of the in-plane bonding MO into its antibonding partner
  CHECK(ranked[0].s == 2);
  CHECK(ranked[0].p == 6);
}
