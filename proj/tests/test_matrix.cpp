#include <catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "eflab/matrix.hpp"

using namespace eflab;
using Catch::Approx;

namespace {

ComplexMatrix gaussian(std::size_t m, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g;
  ComplexMatrix a(m, m);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = {scale * g(rng), scale * g(rng)};
  return a;
}

// Schoolbook product, written out independently of Eigen's kernels.
ComplexMatrix schoolbook(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index k = 0; k < b.cols(); ++k) {
      std::complex<double> s = 0;
      for (Eigen::Index j = 0; j < a.cols(); ++j) s += a(i, j) * b(j, k);
      c(i, k) = s;
    }
  return c;
}

double svd_norm(const ComplexMatrix& a) {
  return Eigen::JacobiSVD<ComplexMatrix>(a).singularValues()(0);
}

ComplexMatrix hermitian(std::size_t m, std::mt19937_64& rng) {
  const ComplexMatrix a = gaussian(m, rng);
  return (a + a.adjoint()) / 2.0;
}

}  // namespace

TEST_CASE("products", "[matrix]") {
  std::mt19937_64 rng(1);
  const ComplexMatrix a = gaussian(3, rng);
  CHECK(matmul(a, identity(3)).isApprox(a));
  CHECK(matmul(identity(3), a).isApprox(a));
  CHECK(matmul(rotation(std::numbers::pi / 2), rotation(std::numbers::pi / 2))
            .isApprox(rotation(std::numbers::pi)));
  for (int t = 0; t < 100; ++t) {
    const ComplexMatrix x = gaussian(3, rng), y = gaussian(3, rng);
    CHECK((matmul(x, y) - schoolbook(x, y)).cwiseAbs().maxCoeff() <= 1e-12);
  }
  CHECK_THROWS_AS(matmul(identity(2), identity(3)), InvalidParameter);
}

TEST_CASE("adjoint", "[matrix]") {
  std::mt19937_64 rng(2);
  CHECK(adjoint(rotation(0.7)).isApprox(rotation(-0.7)));
  CHECK(adjoint(line_projection()) == line_projection());
  for (int t = 0; t < 50; ++t) {
    const ComplexMatrix a = gaussian(4, rng), b = gaussian(4, rng);
    const std::complex<double> s(0.3, -1.2);
    CHECK(adjoint(adjoint(a)) == a);
    CHECK(adjoint(matmul(a, b)).isApprox(matmul(adjoint(b), adjoint(a))));
    CHECK(adjoint(ComplexMatrix(s * a + b)).isApprox(std::conj(s) * adjoint(a) + adjoint(b)));
    for (Eigen::Index i = 0; i < 4; ++i)
      for (Eigen::Index j = 0; j < 4; ++j) CHECK(adjoint(a)(i, j) == std::conj(a(j, i)));
  }
}

TEST_CASE("special matrices", "[matrix]") {
  const ComplexMatrix p = line_projection();
  CHECK(matmul(p, p).isApprox(p));
  CHECK(rotation(0.0) == identity(2));
  Eigen::Vector2cd e1(1, 0);
  const Eigen::Vector2cd r = rotation(std::numbers::pi / 2) * e1;
  CHECK(std::abs(r(0)) < 1e-15);
  CHECK(r(1).real() == Approx(1.0));
}

TEST_CASE("hs_norm", "[matrix]") {
  for (std::size_t m = 1; m <= 9; ++m) CHECK(hs_norm(identity(m)) == 1.0);
  CHECK(hs_norm(ComplexMatrix::Zero(5, 5)) == 0.0);
  for (std::size_t m : {2, 4, 9}) {
    // A single entry sqrt(m) has HS norm 1 and OP norm sqrt(m); a single
    // entry m has HS norm sqrt(m).
    ComplexMatrix a = ComplexMatrix::Zero(m, m);
    a(0, m - 1) = std::sqrt(double(m));
    CHECK(hs_norm(a) == Approx(1.0).epsilon(1e-15));
    CHECK(op_norm(a) == Approx(std::sqrt(double(m))).epsilon(1e-12));
    a(0, m - 1) = double(m);
    CHECK(hs_norm(a) == Approx(std::sqrt(double(m))).epsilon(1e-15));
  }
  // Works on expressions.
  CHECK(hs_norm(identity(3) - identity(3)) == 0.0);
}

TEST_CASE("op_norm", "[matrix]") {
  std::mt19937_64 rng(3);
  for (std::size_t m = 1; m <= 7; ++m) CHECK(op_norm(identity(m)) == Approx(1.0).epsilon(1e-14));
  ComplexMatrix n(2, 2);
  n << 0, 2, 0, 0;
  CHECK(op_norm(n) == Approx(2.0).epsilon(1e-14));
  CHECK(op_norm(ComplexMatrix::Zero(3, 3)) == 0.0);
  CHECK_THROWS_AS(op_norm(n, {.tol = 0.0}), InvalidParameter);

  SECTION("matches the SVD oracle") {
    for (int t = 0; t < 200; ++t) {
      const ComplexMatrix a = gaussian(1 + t % 8, rng);
      CHECK(std::abs(op_norm(a) - svd_norm(a)) <= 1e-8);
    }
  }
  SECTION("nearly repeated top singular value") {
    for (int t = 0; t < 20; ++t) {
      const ComplexMatrix u = Eigen::HouseholderQR<ComplexMatrix>(gaussian(5, rng)).householderQ();
      Eigen::VectorXcd s(5);
      s << 1.0, 1.0 - 1e-9 * t, 0.5, 0.2, 0.0;
      const ComplexMatrix a = u * s.asDiagonal() * u.adjoint();
      CHECK(std::abs(op_norm(a) - 1.0) <= 1e-8);
    }
  }
  SECTION("norm inequalities") {
    for (int t = 0; t < 100; ++t) {
      const std::size_t m = 1 + t % 6;
      const ComplexMatrix a = gaussian(m, rng), b = gaussian(m, rng);
      CHECK(hs_norm(a) <= op_norm(a) + 1e-9);
      CHECK(op_norm(ComplexMatrix(a * b)) <= op_norm(a) * op_norm(b) + 1e-9);
    }
  }
  SECTION("iteration cap is an error") {
    const ComplexMatrix a = gaussian(6, rng);
    CHECK_THROWS_AS(op_norm(a, {.tol = 1e-30, .max_iterations = 5}), ConvergenceError);
  }
}

TEST_CASE("Jacobi eigensolver", "[matrix]") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = 1 + t % 10;
    const ComplexMatrix h = hermitian(m, rng);
    const auto e = hermitian_eigen<double>(h);
    const Eigen::SelfAdjointEigenSolver<ComplexMatrix> oracle(h);
    CHECK((e.values - oracle.eigenvalues()).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((e.vectors.adjoint() * e.vectors - identity(m)).cwiseAbs().maxCoeff() <= 1e-12);
    const ComplexMatrix rebuilt =
        e.vectors * e.values.cast<std::complex<double>>().asDiagonal() * e.vectors.adjoint();
    CHECK((rebuilt - h).cwiseAbs().maxCoeff() <= 1e-10);
    const double top = std::max(std::abs(oracle.eigenvalues()(0)),
                                std::abs(oracle.eigenvalues()(m - 1)));
    CHECK(hermitian_norm<double>(h) == Approx(top).epsilon(1e-10).margin(1e-12));
  }
  // Repeated eigenvalues.
  const auto e = hermitian_eigen<double>(identity(4));
  CHECK(e.values.isApprox(Eigen::Vector4d::Ones()));
}

TEST_CASE("permutations", "[matrix][perm]") {
  std::mt19937_64 rng(5);
  CHECK_THROWS_AS(Permutation({0, 0, 1}), InvalidParameter);
  CHECK_THROWS_AS(Permutation({0, 3}), InvalidParameter);
  CHECK(permutation_matrix(Permutation::identity(5)) == identity(5));
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = 1 + t % 12;
    const Permutation p = random_permutation(m, rng), q = random_permutation(m, rng);
    const ComplexMatrix pm = permutation_matrix(p), qm = permutation_matrix(q);
    CHECK(matmul(pm, qm) == permutation_matrix(p * q));
    for (std::size_t x = 0; x < m; ++x) CHECK((p * q)(x) == p(q(x)));
    CHECK((p * p.inverse()) == Permutation::identity(m));
    CHECK((pm.adjoint() * pm).isApprox(identity(m)));
    CHECK(std::abs(hs_norm(pm - qm) - std::sqrt(2.0 * displacement(p, q) / m)) <= 1e-12);
  }
  CHECK_THROWS_AS(Permutation::identity(2) * Permutation::identity(3), InvalidParameter);
}

TEST_CASE("standard partial isometry", "[matrix]") {
  const ComplexMatrix v2 = standard_partial_isometry(2);
  ComplexMatrix expected(2, 2);
  expected << 0, 1, 0, 0;
  CHECK(v2 == expected);
  CHECK(ComplexMatrix(v2.adjoint() * v2) == Eigen::Vector2cd(0, 1).asDiagonal().toDenseMatrix());
  CHECK(ComplexMatrix(v2 * v2.adjoint()) == Eigen::Vector2cd(1, 0).asDiagonal().toDenseMatrix());
  for (std::size_t m = 2; m <= 12; m += 2) {
    const ComplexMatrix v = standard_partial_isometry(m);
    const auto [d1, d2] = partial_isometry_defects(v);
    CHECK(d1 == 0.0);
    CHECK(d2 == 0.0);
    const ComplexMatrix x = v.adjoint() * v;
    CHECK(x.trace().real() == double(m / 2));
  }
  CHECK_THROWS_AS(standard_partial_isometry(3), InvalidParameter);
  CHECK_THROWS_AS(standard_partial_isometry(0), InvalidParameter);
}

TEST_CASE("rounding to a partial isometry", "[matrix]") {
  std::mt19937_64 rng(6);
  SECTION("exact input comes back") {
    const ComplexMatrix v = standard_partial_isometry(2);
    const ComplexMatrix w = round_to_partial_isometry(v);
    // Equal up to a phase on the source space.
    const std::complex<double> phase = w(0, 1) / v(0, 1);
    CHECK(std::abs(std::abs(phase) - 1.0) <= 1e-12);
    CHECK((w - phase * v).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SECTION("perturbed witnesses in M_4") {
    const ComplexMatrix b = standard_partial_isometry(4) + 0.01 * ComplexMatrix::Ones(4, 4);
    const ComplexMatrix w = round_to_partial_isometry(b);
    const auto [d1, d2] = partial_isometry_defects(w);
    CHECK(d1 <= 1e-10);
    CHECK(d2 <= 1e-10);
    for (int t = 0; t < 50; ++t) {
      const std::size_t m = 2 * (1 + t % 4);
      const ComplexMatrix u =
          Eigen::HouseholderQR<ComplexMatrix>(gaussian(m, rng)).householderQ();
      const ComplexMatrix v = u * standard_partial_isometry(m) * u.adjoint();
      const ComplexMatrix bb = v + gaussian(m, rng, 0.01 / std::sqrt(double(m)));
      const ComplexMatrix ww = round_to_partial_isometry(bb);
      const auto [e1, e2] = partial_isometry_defects(ww);
      CHECK(e1 <= 1e-10);
      CHECK(e2 <= 1e-10);
      CHECK(op_norm(ComplexMatrix(ww - v)) <= 0.1);
    }
  }
  SECTION("preconditions") {
    CHECK_THROWS_AS(round_to_partial_isometry(identity(2)), InvalidParameter);
    CHECK_THROWS_AS(round_to_partial_isometry(ComplexMatrix(gaussian(3, rng))), InvalidParameter);
  }
  SECTION("odd dimensions are impossible") {
    // v_2 (+) sqrt(t) with t the golden-ratio point: both defects equal
    // sqrt(5) - 2 < 1/4, so the preconditions hold, yet nothing rounds.
    ComplexMatrix b = ComplexMatrix::Zero(3, 3);
    b(0, 1) = 1;
    b(2, 2) = std::sqrt((std::sqrt(5.0) - 1) / 2);
    const auto [d1, d2] = partial_isometry_defects(b);
    CHECK(d1 == Approx(std::sqrt(5.0) - 2).epsilon(1e-12));
    CHECK(d2 == Approx(std::sqrt(5.0) - 2).epsilon(1e-12));
    CHECK_THROWS(round_to_partial_isometry(b));

    int eligible = 0;
    for (int t = 0; t < 10'000; ++t) {
      // Samples concentrated near the best odd configurations.
      ComplexMatrix c = b;
      c(2, 2) = std::sqrt(std::uniform_real_distribution<double>(0.0, 1.0)(rng));
      const ComplexMatrix u =
          Eigen::HouseholderQR<ComplexMatrix>(gaussian(3, rng)).householderQ();
      c = u * (c + gaussian(3, rng, 0.02)) * u.adjoint();
      const auto [e1, e2] = partial_isometry_defects(c);
      if (e1 >= 0.25 || e2 >= 0.25) {
        CHECK_THROWS_AS(round_to_partial_isometry(c), InvalidParameter);
        continue;
      }
      ++eligible;
      bool refused = false;
      try {
        round_to_partial_isometry(c);
      } catch (const ImpossibleInput&) {
        refused = true;
      } catch (const InvalidParameter&) {
        refused = true;
      }
      CHECK(refused);
    }
    CHECK(eligible > 0);
  }
}

TEST_CASE("unit ball sampling and clipping", "[matrix]") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 100; ++t) {
    const ComplexMatrix x = random_unit_ball(1 + t % 6, rng);
    CHECK(svd_norm(x) <= 1 + 1e-12);
    const ComplexMatrix y = clip_to_unit_ball(ComplexMatrix(3.0 * x));
    CHECK(svd_norm(y) <= 1 + 1e-12);
  }
}

TEST_CASE("matrix JSON", "[matrix]") {
  std::mt19937_64 rng(8);
  const ComplexMatrix a = gaussian(3, rng);
  CHECK(matrix_from_json(to_json(a)) == a);
  CHECK_THROWS_AS(matrix_from_json(nlohmann::json{{"m", 2}, {"re", {{1, 2}}}}), InvalidParameter);
  const auto j = nlohmann::json::parse(R"({"m":2,"re":[[0,1],[0,0]]})");
  CHECK(matrix_from_json(j) == standard_partial_isometry(2));
  CHECK(permutation_from_json(to_json(Permutation({2, 0, 1}))) == Permutation({2, 0, 1}));
}
