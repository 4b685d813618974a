#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"
#include "tivqe/pauli.hpp"

using namespace tivqe;
using test::Mat;

TEST_CASE("xz monomial product tracks the commutation sign") {
  // Z * X = -X * Z on one qubit
  XZTerm zx = mul(XZTerm{0, 1, 1.0}, XZTerm{1, 0, 1.0});
  XZTerm xz = mul(XZTerm{1, 0, 1.0}, XZTerm{0, 1, 1.0});
  CHECK(zx.x == 1);
  CHECK(zx.z == 1);
  CHECK(zx.coeff == std::complex<double>(-1.0, 0.0));
  CHECK(xz.coeff == std::complex<double>(1.0, 0.0));
}

TEST_CASE("jw number operator is (I - Z)/2") {
  const auto pos = identity_position(1);
  XZSum n;
  n.add_product(jw_creation(0, 1, pos), jw_annihilation(0, 1, pos), 1.0);
  const QubitHamiltonian h = n.to_hamiltonian(1);
  CHECK(h.constant == doctest::Approx(0.5));
  REQUIRE(h.terms.size() == 1);
  CHECK(h.terms[0].coefficient == doctest::Approx(-0.5));
  CHECK(h.terms[0].z_mask == 1);
  CHECK(h.terms[0].x_mask == 0);
}

TEST_CASE("jw images anticommute exactly on up to 6 modes") {
  for (int n = 2; n <= 6; ++n) {
    for (int p = 0; p < n; ++p) {
      for (int q = 0; q < n; ++q) {
        const Mat cp = test::jw_operator_matrix(p, n, false);
        const Mat cqd = test::jw_operator_matrix(q, n, true);
        const Mat anti = cp * cqd + cqd * cp;
        Mat want = Mat::Zero(1 << n, 1 << n);
        if (p == q) want = Mat::Identity(1 << n, 1 << n);
        CHECK((anti - want).cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-14));
        // {c_p, c_q} = 0 as well
        const Mat cq = test::jw_operator_matrix(q, n, false);
        CHECK((cp * cq + cq * cp).cwiseAbs().maxCoeff() ==
              doctest::Approx(0.0).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("library jw ladder operators match the dense convention") {
  const int n = 4;
  const auto pos = identity_position(n);
  for (int m = 0; m < n; ++m) {
    for (bool dag : {false, true}) {
      XZSum s = dag ? jw_creation(m, n, pos) : jw_annihilation(m, n, pos);
      Mat lib = Mat::Zero(1 << n, 1 << n);
      for (const auto& [ps, c] : s.complex_terms()) {
        PauliString t = ps;
        t.coefficient = 1.0;
        lib += c * test::pauli_matrix(t, n);
      }
      const Mat want = test::jw_operator_matrix(m, n, dag);
      CHECK((lib - want).cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("pauli string letter accessors") {
  PauliString p;
  p.coefficient = 2.0;
  p.x_mask = 0b011;
  p.z_mask = 0b110;
  CHECK(p.op_at(0) == PauliOp::X);
  CHECK(p.op_at(1) == PauliOp::Y);
  CHECK(p.op_at(2) == PauliOp::Z);
  CHECK(p.to_string(4) == "XYZI");
  CHECK(p.weight() == 3);
}
