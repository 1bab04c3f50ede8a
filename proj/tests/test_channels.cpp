#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "qpi/channels.hpp"
#include "qpi/states.hpp"

using namespace qpi;

namespace {

cmat phi_plus() {
  return to_density_matrix(BellDiagonal::from_lambdas(1, 0, 0, 0));
}

cmat random_density2(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  cmat a(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) a(i, j) = cplx(g(rng), g(rng));
  cmat rho = a * a.adjoint();
  return rho / rho.trace();
}

cmat random_hermitian2(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  cmat a(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) a(i, j) = cplx(g(rng), g(rng));
  return a + a.adjoint();
}

}  // namespace

TEST_CASE("depolarizing channel basics") {
  CHECK_THROWS_AS(depolarizing(-0.01), std::domain_error);
  CHECK_THROWS_AS(depolarizing(0.51), std::domain_error);

  auto id = depolarizing(0.0);
  std::mt19937_64 rng(1);
  cmat rho = random_density2(rng);
  CHECK((apply_channel(id, rho) - rho).cwiseAbs().maxCoeff() <= 1e-14);

  // Fully depolarizing: everything lands on I/2.
  auto full = depolarizing(0.5);
  CHECK((apply_channel(full, rho) - 0.5 * identity(2)).cwiseAbs().maxCoeff() <=
        1e-14);

  // Bloch z is scaled by 1 - 2q.
  cmat zero = cmat::Zero(2, 2);
  zero(0, 0) = 1;
  cmat out = apply_channel(depolarizing(0.25), zero);
  CHECK(out(0, 0).real() == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(out(1, 1).real() == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("channels pass completeness and unitality") {
  for (double q : {0.0, 0.05, 0.3, 0.5}) {
    auto ch = depolarizing(q);
    CHECK_NOTHROW(ch.validate());
    CHECK(ch.is_unital());
  }
  for (double t : {0.0, 0.3, 2.0, std::numbers::pi}) {
    auto ch = rotation_channel(t);
    CHECK_NOTHROW(ch.validate());
    CHECK(ch.is_unital());
  }
}

TEST_CASE("unital channels fix the maximally mixed state") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 0.5);
  for (int i = 0; i < 20; ++i) {
    auto ch = compose(depolarizing(u(rng)), rotation_channel(4 * u(rng)));
    CHECK(ch.is_unital());
    CHECK((apply_channel(ch, 0.5 * identity(2)) - 0.5 * identity(2))
              .cwiseAbs()
              .maxCoeff() <= 1e-14);
  }
}

TEST_CASE("apply_to_bob on the Bell state") {
  CHECK((apply_to_bob(identity_channel(), phi_plus()) - phi_plus())
            .cwiseAbs()
            .maxCoeff() <= 1e-14);

  // Depolarizing scales all three correlations uniformly.
  double q = 0.11;
  cmat out = apply_to_bob(depolarizing(q), phi_plus());
  double s = 1 - 2 * q;
  cmat expect = to_density_matrix(BellDiagonal::from_correlations(s, -s, s));
  CHECK((out - expect).cwiseAbs().maxCoeff() <= 1e-12);

  // Rotation gives Q00 = cos(theta) under Z x Z.
  double theta = 0.4;
  cmat rot = apply_to_bob(rotation_channel(theta), phi_plus());
  double q00 = (rot * tensor(pauli_z(), pauli_z())).trace().real();
  CHECK(q00 == doctest::Approx(std::cos(theta)).epsilon(1e-12));
}

TEST_CASE("composition acts in sequence") {
  std::mt19937_64 rng(9);
  auto e = depolarizing(0.2);
  auto f = rotation_channel(0.7);
  for (int i = 0; i < 20; ++i) {
    cmat rho = random_density2(rng);
    cmat lhs = apply_channel(compose(f, e), rho);
    cmat rhs = apply_channel(f, apply_channel(e, rho));
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("dual channel satisfies the adjoint identity") {
  auto u = rotation_channel(1.1);
  cmat uu = dual(u).ops[0] * u.ops[0];
  CHECK((uu - identity(2)).cwiseAbs().maxCoeff() <= 1e-14);

  std::mt19937_64 rng(13);
  auto ch = compose(depolarizing(0.17), rotation_channel(0.5));
  auto chd = dual(ch);
  for (int i = 0; i < 100; ++i) {
    cmat rho = random_density2(rng);
    cmat m = random_hermitian2(rng);
    cmat md = cmat::Zero(2, 2);
    for (const cmat& e : chd.ops) md += e * m * e.adjoint();
    double lhs = (rho * md).trace().real();
    double rhs = (apply_channel(ch, rho) * m).trace().real();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }

  // Depolarizing has Hermitian elements, so it is self-adjoint.
  auto dep = depolarizing(0.3);
  std::mt19937_64 rng2(14);
  cmat rho = random_density2(rng2);
  CHECK((apply_channel(dual(dep), rho) - apply_channel(dep, rho))
            .cwiseAbs()
            .maxCoeff() <= 1e-14);
}

TEST_CASE("constructive unital map: worked examples") {
  // Pure targets need no noise.
  auto triv = construct_unital_map(1.0, 1.0, 0.0);
  CHECK(triv.theta == doctest::Approx(0.0));
  CHECK((triv.source_a1 - pauli_x()).cwiseAbs().maxCoeff() <= 1e-12);

  auto mid = construct_unital_map(0.8, 0.6, 0.0);
  CHECK(std::tan(mid.theta / 2) ==
        doctest::Approx(std::sqrt(0.64 - 0.36) / 0.6).epsilon(1e-12));
  cmat out = cmat::Zero(2, 2);
  for (const cmat& e : mid.map.ops) out += e * mid.source_a1 * e.adjoint();
  CHECK((out - 0.6 * pauli_x()).cwiseAbs().maxCoeff() <= 1e-12);

  // s1x = 0 takes the theta = pi branch.
  auto edge = construct_unital_map(0.9, 0.0, 0.5);
  CHECK(edge.theta == doctest::Approx(std::numbers::pi));
  cmat out2 = cmat::Zero(2, 2);
  for (const cmat& e : edge.map.ops) out2 += e * edge.source_a1 * e.adjoint();
  CHECK((out2 - 0.5 * pauli_z()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("constructive unital map rejects infeasible targets") {
  CHECK_THROWS_AS(construct_unital_map(0.5, 0.6, 0.3), std::domain_error);
  CHECK_THROWS_AS(construct_unital_map(0.0, 0.0, 0.0), std::domain_error);
}

TEST_CASE("constructive unital map: random feasible targets") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 500; ++i) {
    double s0z = 0.05 + 0.95 * u(rng);
    double r = s0z * std::sqrt(u(rng));
    double ang = 2 * std::numbers::pi * u(rng);
    double s1x = std::abs(r * std::cos(ang));
    double s1z = r * std::sin(ang);
    auto c = construct_unital_map(s0z, s1x, s1z);
    CHECK_NOTHROW(c.map.validate());
    CHECK(c.map.is_unital());
    for (auto [src, tgt] : {std::pair{c.source_a0, c.target_a0},
                            std::pair{c.source_a1, c.target_a1}}) {
      cmat out = cmat::Zero(2, 2);
      for (const cmat& e : c.map.ops) out += e * src * e.adjoint();
      CHECK((out - tgt).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("frame alignment feeds the construction") {
  std::mt19937_64 rng(27);
  std::normal_distribution<double> g;
  for (int i = 0; i < 100; ++i) {
    Eigen::Vector3d v0(g(rng), g(rng), g(rng));
    v0 *= 0.9 / v0.norm();
    Eigen::Vector3d v1(g(rng), g(rng), g(rng));
    v1 *= 0.4 / v1.norm();
    auto fa = frame_align({v0.x(), v0.y(), v0.z()}, {v1.x(), v1.y(), v1.z()});
    CHECK(fa.s0z == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(fa.s1x >= 0.0);
    CHECK(std::sqrt(fa.s1x * fa.s1x + fa.s1z * fa.s1z) ==
          doctest::Approx(0.4).epsilon(1e-12));
    CHECK_NOTHROW(construct_unital_map(fa.s0z, fa.s1x, fa.s1z));
  }
}
