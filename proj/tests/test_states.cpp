#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "qpi/states.hpp"

using namespace qpi;

namespace {

// Sorted spectra agree as multisets.
bool same_spectrum(const cmat& a, const cmat& b, double tol) {
  Eigen::VectorXd ea = hermitian_eigenvalues(a), eb = hermitian_eigenvalues(b);
  if (ea.size() != eb.size()) return false;
  return (ea - eb).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

TEST_CASE("lambda/correlation conversions round-trip") {
  auto s = BellDiagonal::from_lambdas(0.75, 0.25, 0, 0);
  CHECK(s.tx() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s.ty() == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(s.tz() == doctest::Approx(1.0).epsilon(1e-15));

  std::mt19937_64 rng(17);
  for (int i = 0; i < 1000; ++i) {
    auto r = random_bell_diagonal(rng);
    auto back = BellDiagonal::from_correlations(r.tx(), r.ty(), r.tz());
    for (int k = 0; k < 4; ++k)
      CHECK(back.lambdas()[k] ==
            doctest::Approx(r.lambdas()[k]).epsilon(1e-12));
  }
}

TEST_CASE("invalid states are rejected") {
  CHECK_THROWS_AS(BellDiagonal::from_lambdas(0.5, 0.6, 0, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(BellDiagonal::from_lambdas(0.8, 0.4, -0.2, 0),
                  std::invalid_argument);
  // T-cube corner that violates positivity.
  CHECK_THROWS_AS(BellDiagonal::from_correlations(1, 1, 1),
                  std::invalid_argument);
}

TEST_CASE("density matrix anchors") {
  auto phi_plus = BellDiagonal::from_lambdas(1, 0, 0, 0);
  cmat rho = to_density_matrix(phi_plus);
  CHECK(rho(0, 0).real() == doctest::Approx(0.5));
  CHECK(rho(0, 3).real() == doctest::Approx(0.5));
  CHECK(rho(1, 1).real() == doctest::Approx(0.0));

  auto mixed = BellDiagonal::from_correlations(0, 0, 0);
  CHECK((to_density_matrix(mixed) - 0.25 * identity(4)).cwiseAbs().maxCoeff() <=
        1e-15);

  // Bloch form and Bell-projector form agree.
  std::mt19937_64 rng(23);
  for (int i = 0; i < 100; ++i) {
    auto s = random_bell_diagonal(rng);
    cmat bloch = 0.25 * (identity(4) + s.tx() * tensor(pauli_x(), pauli_x()) +
                         s.ty() * tensor(pauli_y(), pauli_y()) +
                         s.tz() * tensor(pauli_z(), pauli_z()));
    CHECK((to_density_matrix(s) - bloch).cwiseAbs().maxCoeff() <= 1e-14);
  }

  auto spec = BellDiagonal::from_lambdas(0.75, 0.25, 0, 0);
  Eigen::VectorXd eigs = hermitian_eigenvalues(to_density_matrix(spec));
  CHECK(eigs(3) == doctest::Approx(0.75));
  CHECK(eigs(2) == doctest::Approx(0.25));
  CHECK(eigs(0) == doctest::Approx(0.0));
}

TEST_CASE("canonicalize worked example") {
  auto s = BellDiagonal::from_correlations(0.3, -0.8, 0.5);
  auto [canon, rec] = canonicalize(s);
  CHECK(canon.tx() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(canon.ty() == doctest::Approx(-0.3).epsilon(1e-12));
  CHECK(canon.tz() == doctest::Approx(0.8).epsilon(1e-12));
  REQUIRE(rec.ops.size() == 3);
  CHECK(to_string(rec.ops[0]) == "H_yz both");
  CHECK(to_string(rec.ops[1]) == "H_xy both");
  CHECK(to_string(rec.ops[2]) == "sigma_x Bob");
}

TEST_CASE("canonicalize leaves canonical states alone") {
  auto s = BellDiagonal::from_correlations(0.5, -0.3, 0.8);
  auto [canon, rec] = canonicalize(s);
  CHECK(rec.empty());
  CHECK(canon.tx() == doctest::Approx(0.5));
}

TEST_CASE("canonicalize the singlet") {
  auto s = BellDiagonal::from_correlations(-1, -1, -1);
  auto [canon, rec] = canonicalize(s);
  CHECK(canon.tz() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(canon.is_canonical());
  Eigen::VectorXd eigs = hermitian_eigenvalues(to_density_matrix(canon));
  CHECK(eigs(3) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eigs(2) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("canonicalize: ordering, spectrum, replay, idempotence") {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 2000; ++i) {
    auto s = random_bell_diagonal(rng);
    // Scramble with random sign patterns to hit all seven cases.
    std::uniform_int_distribution<int> coin(0, 1);
    double tx = s.tx() * (coin(rng) ? 1 : -1);
    double ty = s.ty() * (coin(rng) ? 1 : -1);
    double tz = s.tz() * (coin(rng) ? 1 : -1);
    if (coin(rng)) std::swap(tx, tz);
    if (coin(rng)) std::swap(ty, tz);
    auto scrambled = BellDiagonal::from_correlations(tx, ty, tz);

    auto [canon, rec] = canonicalize(scrambled);
    CHECK(canon.is_canonical());
    CHECK(same_spectrum(to_density_matrix(scrambled), to_density_matrix(canon),
                        1e-12));
    // Replaying the recorded unitaries reproduces the canonical state.
    cmat replayed = replay_frame_record(rec, to_density_matrix(scrambled));
    CHECK((replayed - to_density_matrix(canon)).cwiseAbs().maxCoeff() <=
          1e-12);
    // Idempotence.
    auto [again, rec2] = canonicalize(canon);
    CHECK(rec2.empty());
  }
}

TEST_CASE("purification anchors") {
  auto pure = BellDiagonal::from_lambdas(1, 0, 0, 0);
  auto p = purify(pure);
  CHECK(std::abs(p.amplitudes.norm() - 1.0) <= 1e-12);
  // amplitude on |00>|e1> and |11>|e1>
  CHECK(std::abs(p.amplitudes[0] - cplx(1 / std::sqrt(2.0), 0)) <= 1e-12);
  CHECK(std::abs(p.amplitudes[12] - cplx(1 / std::sqrt(2.0), 0)) <= 1e-12);

  auto two = BellDiagonal::from_lambdas(0.5, 0.5, 0, 0);
  auto p2 = purify(two);
  CHECK(std::abs(p2.amplitudes.norm() - 1.0) <= 1e-12);
  CHECK(std::abs(p2.amplitudes[0] - cplx(0.5, 0)) <= 1e-12);   // |00>|e1>
  CHECK(std::abs(p2.amplitudes[1] - cplx(0.5, 0)) <= 1e-12);   // |00>|e2>
  CHECK(std::abs(p2.amplitudes[13] - cplx(-0.5, 0)) <= 1e-12); // |11>|e2>
}

TEST_CASE("purify then trace Eve round-trips") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 200; ++i) {
    auto s = random_bell_diagonal(rng);
    cmat proj = purify(s).projector();
    cmat back = partial_trace(proj, 2, {2, 2, 4});
    CHECK((back - to_density_matrix(s)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("Eve's entropy equals the Bell-weight entropy") {
  auto s = BellDiagonal::from_lambdas(0.4, 0.3, 0.2, 0.1);
  cmat proj = purify(s).projector();
  cmat rho_e = partial_trace(partial_trace(proj, 0, {2, 2, 4}), 0, {2, 4});
  CHECK(von_neumann_entropy(rho_e) == doctest::Approx(1.84644).epsilon(1e-5));
}
