#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "test_util.hpp"
#include "tivqe/fci.hpp"
#include "tivqe/hamiltonian.hpp"
#include "tivqe/simulate.hpp"

using namespace tivqe;

namespace {
std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

TEST_CASE("bundled water file parses with the declared sizes") {
  const auto ham = parse_fcidump(slurp(test::data_path("h2o_sto3g.fcidump")));
  CHECK(ham.n_spatial() == 7);
  CHECK(ham.n_spin_orbitals() == 14);
  CHECK(ham.n_electrons() == 10);
}

TEST_CASE("core-only file gives a constant Hamiltonian") {
  const auto ham = parse_fcidump("&FCI NORB=2,NELEC=2,MS2=0,\n&END\n 0.0 0 0 0 0\n");
  CHECK(ham.e_core() == 0.0);
  CHECK(ham.one_body_terms().empty());
  CHECK(ham.two_body_terms().empty());
}

TEST_CASE("single spatial coefficient expands to both spins") {
  const auto ham = parse_fcidump("&FCI NORB=1,NELEC=2,MS2=0,\n&END\n-1.0 1 1 0 0\n");
  CHECK(ham.one_body(0, 0) == doctest::Approx(-1.0));
  CHECK(ham.one_body(1, 1) == doctest::Approx(-1.0));
  CHECK(ham.one_body(0, 1) == 0.0);
}

TEST_CASE("parse errors name the line") {
  CHECK_THROWS_WITH_AS(parse_fcidump("&FCI NELEC=2,\n&END\n"),
                       doctest::Contains("NORB"), FcidumpError);
  CHECK_THROWS_WITH_AS(parse_fcidump("&FCI NORB=2,NELEC=2,\n&END\n1.0 3 1 0 0\n"),
                       doctest::Contains("line 3"), FcidumpError);
  CHECK_THROWS_AS(parse_fcidump("&FCI NORB=2,NELEC=2,\n&END\nxyz 1 1 0 0\n"),
                  FcidumpError);
}

TEST_CASE("parse -> serialize -> parse round-trips coefficients exactly") {
  const auto ham = test::random_spatial_hamiltonian(3, 4, 11);
  const auto again = parse_fcidump(write_fcidump(ham));
  const auto third = parse_fcidump(write_fcidump(again));
  CHECK(again.e_core() == ham.e_core());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(again.h1_at(i, j) == ham.h1_at(i, j));
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          CHECK(again.eri_at(i, j, k, l) == ham.eri_at(i, j, k, l));
          CHECK(third.eri_at(i, j, k, l) == again.eri_at(i, j, k, l));
        }
    }
}

TEST_CASE("hf energy: all-zero Hamiltonian returns the core") {
  SpinOrbitalHamiltonian ham(2, 2);
  ham.set_core(-3.25);
  CHECK(hf_energy(ham, 0b0101) == doctest::Approx(-3.25));
}

TEST_CASE("hf energy: two electrons in one shell") {
  SpinOrbitalHamiltonian ham(1, 2);
  ham.set_h1(0, 0, -1.0);
  ham.set_eri(0, 0, 0, 0, 0.5);
  CHECK(hf_energy(ham, 0b11) == doctest::Approx(-1.5));
}

TEST_CASE("hf energy rejects the wrong particle number") {
  SpinOrbitalHamiltonian ham(2, 2);
  CHECK_THROWS_AS(hf_energy(ham, 0b0111), std::invalid_argument);
}

TEST_CASE("bundled water reference energy") {
  const auto ham = parse_fcidump(slurp(test::data_path("h2o_sto3g.fcidump")));
  const double e = hf_energy(ham, ham.hartree_fock_reference());
  CHECK(std::abs(e - (-74.9624)) < 1.5e-3);
}

TEST_CASE("jw of c0+ c0 on one qubit") {
  SpinOrbitalHamiltonian ham(1, 1);
  ham.set_h1(0, 0, 0.7);
  const auto h = jordan_wigner(ham);
  // n_alpha + n_beta, two qubits; check the alpha part on qubit 0
  CHECK(h.n_qubits == 2);
  CHECK(h.constant == doctest::Approx(0.7));  // 0.35 per spin
  bool found_z0 = false;
  for (const auto& t : h.terms)
    if (t.z_mask == 1 && t.x_mask == 0) {
      found_z0 = true;
      CHECK(t.coefficient == doctest::Approx(-0.35));
    }
  CHECK(found_z0);
}

TEST_CASE("jw expectation of the reference matches hf_energy") {
  for (uint64_t seed : {1u, 2u, 3u}) {
    const auto ham = test::random_spatial_hamiltonian(3, 4, seed);
    const auto h = jordan_wigner(ham);
    const uint64_t ref = ham.hartree_fock_reference();
    const StateVector psi =
        StateVector::basis_state(ham.n_spin_orbitals(), static_cast<uint32_t>(ref));
    CHECK(expectation(psi, h) == doctest::Approx(hf_energy(ham, ref)).epsilon(1e-10));
  }
}

TEST_CASE("jw matches the dense operator-by-operator construction") {
  const auto ham = test::random_spatial_hamiltonian(2, 2, 5);
  const auto h = jordan_wigner(ham);
  const test::Mat lib = test::hamiltonian_matrix(h);
  const test::Mat dense = test::dense_so_hamiltonian(ham);
  CHECK((lib - dense).cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("select_orbitals: empty selections reproduce the Hamiltonian") {
  const auto ham = test::random_spatial_hamiltonian(3, 4, 7);
  const auto same = select_orbitals(ham, {}, {});
  CHECK(same.e_core() == ham.e_core());
  CHECK(same.n_electrons() == ham.n_electrons());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(same.h1_at(i, j) == ham.h1_at(i, j));
}

TEST_CASE("select_orbitals rejects overlapping sets") {
  const auto ham = test::random_spatial_hamiltonian(3, 4, 7);
  CHECK_THROWS_AS(select_orbitals(ham, {0}, {0}), std::invalid_argument);
}

TEST_CASE("frozen-core contraction matches restricted dense diagonalization") {
  // freeze MO0 (doubly occupied); compare the reduced FCI against the full
  // determinant matrix restricted to determinants keeping MO0 filled
  const auto ham = test::random_spatial_hamiltonian(3, 4, 13);
  const auto reduced = select_orbitals(ham, {0}, {});

  const auto full_basis = determinant_basis(3, 4);
  std::vector<uint64_t> restricted;
  for (uint64_t d : full_basis)
    if ((d & 0b001) && (d & 0b001000)) restricted.push_back(d);
  const auto mat = determinant_matrix(ham, restricted);
  Eigen::MatrixXd m(restricted.size(), restricted.size());
  for (size_t i = 0; i < restricted.size(); ++i)
    for (size_t j = 0; j < restricted.size(); ++j)
      m(i, j) = mat[i * restricted.size() + j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);

  const auto sol = fci_ground_state(reduced);
  CHECK(sol.energy == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-10));
}
