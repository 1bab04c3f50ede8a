#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qpi/qmath.hpp"
#include "qpi/states.hpp"

using namespace qpi;

namespace {

cmat random_density(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> g;
  cmat a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = cplx(g(rng), g(rng));
  cmat rho = a * a.adjoint();
  return rho / rho.trace();
}

cmat random_unitary(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> g;
  cmat a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = cplx(g(rng), g(rng));
  Eigen::HouseholderQR<cmat> qr(a);
  return qr.householderQ();
}

}  // namespace

TEST_CASE("binary entropy anchor values") {
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.25) == doctest::Approx(0.811278).epsilon(1e-6));
  CHECK_THROWS_AS(binary_entropy(-0.1), std::domain_error);
  CHECK_THROWS_AS(binary_entropy(1.1), std::domain_error);
}

TEST_CASE("binary entropy symmetry") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    double p = u(rng);
    CHECK(binary_entropy(p) ==
          doctest::Approx(binary_entropy(1.0 - p)).epsilon(1e-12));
  }
}

TEST_CASE("von Neumann entropy anchors") {
  CHECK(von_neumann_entropy(0.5 * identity(2)) ==
        doctest::Approx(1.0).epsilon(1e-12));

  cmat pure = cmat::Zero(2, 2);
  pure(0, 0) = 1.0;
  CHECK(von_neumann_entropy(pure) == doctest::Approx(0.0).epsilon(1e-12));

  auto s = BellDiagonal::from_lambdas(0.75, 0.25, 0, 0);
  CHECK(von_neumann_entropy(to_density_matrix(s)) ==
        doctest::Approx(0.811278).epsilon(1e-6));
}

TEST_CASE("von Neumann entropy rejects invalid input") {
  cmat notherm = (cmat(2, 2) << 1, 1, 0, 0).finished();
  CHECK_THROWS_AS(von_neumann_entropy(notherm), std::invalid_argument);
  CHECK_THROWS_AS(von_neumann_entropy(2.0 * identity(2)),
                  std::invalid_argument);
}

TEST_CASE("entropy is unitarily invariant") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    cmat rho = random_density(rng, 4);
    cmat u = random_unitary(rng, 4);
    CHECK(von_neumann_entropy(u * rho * u.adjoint()) ==
          doctest::Approx(von_neumann_entropy(rho)).epsilon(1e-10));
  }
}

TEST_CASE("tensor products") {
  CHECK((tensor(identity(2), identity(2)) - identity(4))
            .cwiseAbs()
            .maxCoeff() == 0.0);

  cmat zz = tensor(pauli_z(), pauli_z());
  cmat expect = cmat::Zero(4, 4);
  expect(0, 0) = 1;
  expect(1, 1) = -1;
  expect(2, 2) = -1;
  expect(3, 3) = 1;
  CHECK((zz - expect).cwiseAbs().maxCoeff() <= 1e-15);

  // Bloch form with only the xx correlator switched on has antidiagonal
  // quarter blocks.
  cmat rho = 0.25 * (identity(4) + tensor(pauli_x(), pauli_x()));
  CHECK(rho(0, 3).real() == doctest::Approx(0.25));
  CHECK(rho(1, 2).real() == doctest::Approx(0.25));
  CHECK(rho(0, 1) == cplx(0, 0));
}

TEST_CASE("partial trace basics") {
  // Any Bell-diagonal state has maximally mixed marginals.
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    auto s = random_bell_diagonal(rng);
    cmat rho = to_density_matrix(s);
    CHECK((partial_trace(rho, 1, {2, 2}) - 0.5 * identity(2))
              .cwiseAbs()
              .maxCoeff() <= 1e-12);
    CHECK((partial_trace(rho, 0, {2, 2}) - 0.5 * identity(2))
              .cwiseAbs()
              .maxCoeff() <= 1e-12);
  }
}

TEST_CASE("partial trace of a product state factorizes") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    cmat a = random_density(rng, 2), b = random_density(rng, 2);
    CHECK((partial_trace(tensor(a, b), 1, {2, 2}) - a).cwiseAbs().maxCoeff() <=
          1e-12);
    CHECK((partial_trace(tensor(a, b), 0, {2, 2}) - b).cwiseAbs().maxCoeff() <=
          1e-12);
  }
}

TEST_CASE("partial trace of a purification recovers Eve's spectrum") {
  auto s = BellDiagonal::from_lambdas(0.5, 0.5, 0, 0);
  cmat proj = purify(s).projector();
  cmat rho_e = partial_trace(partial_trace(proj, 0, {2, 2, 4}), 0, {2, 4});
  cmat expect = cmat::Zero(4, 4);
  expect(0, 0) = 0.5;
  expect(1, 1) = 0.5;
  CHECK((rho_e - expect).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("partial trace validates dimensions") {
  CHECK_THROWS_AS(partial_trace(identity(4), 0, {2, 3}),
                  std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(identity(4), 2, {2, 2}),
                  std::invalid_argument);
}

TEST_CASE("density eigenvalues sum to one") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 50; ++i) {
    cmat rho = random_density(rng, 8);
    CHECK(hermitian_eigenvalues(rho).sum() ==
          doctest::Approx(1.0).epsilon(1e-10));
  }
}
