#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "eflab/error.hpp"

namespace eflab {

/// Dense complex matrix over the real type Real.
template <class Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <class Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using ComplexMatrix = CMatrix<double>;

template <class Real = double>
CMatrix<Real> identity(std::size_t m) {
  return CMatrix<Real>::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
}

template <class Derived>
void require_square(const Eigen::MatrixBase<Derived>& a, const char* what) {
  if (a.rows() != a.cols())
    throw InvalidParameter(std::string(what) + ": matrix is " + std::to_string(a.rows()) + "x" +
                           std::to_string(a.cols()) + ", expected square");
}

/// Checked product; Eigen's operator* asserts only in debug builds.
template <class A, class B>
auto matmul(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  if (a.cols() != b.rows())
    throw InvalidParameter("matmul: dimension mismatch " + std::to_string(a.rows()) + "x" +
                           std::to_string(a.cols()) + " times " + std::to_string(b.rows()) +
                           "x" + std::to_string(b.cols()));
  return (a * b).eval();
}

template <class Derived>
auto adjoint(const Eigen::MatrixBase<Derived>& a) {
  return a.adjoint().eval();
}

/// Normalized Hilbert-Schmidt norm sqrt((1/m) sum |a_ij|^2).
template <class Derived>
auto hs_norm(const Eigen::MatrixBase<Derived>& a) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  require_square(a, "hs_norm");
  if (a.rows() == 0) return Real(0);
  return std::sqrt(a.squaredNorm() / static_cast<Real>(a.rows()));
}

// ---------------------------------------------------------------- Hermitian eigensolver

template <class Real>
struct HermitianEigen {
  RVector<Real> values;   // ascending
  CMatrix<Real> vectors;  // columns, unitary
};

/// Cyclic Jacobi rotations on a Hermitian matrix (only the upper triangle's
/// conjugate symmetry is assumed, not checked).
template <class Real>
HermitianEigen<Real> hermitian_eigen(const CMatrix<Real>& h, int max_sweeps = 100) {
  using C = std::complex<Real>;
  require_square(h, "hermitian_eigen");
  const Eigen::Index m = h.rows();
  CMatrix<Real> a = (h + h.adjoint()) / Real(2);
  CMatrix<Real> v = CMatrix<Real>::Identity(m, m);
  const Real scale = std::max(a.norm(), std::numeric_limits<Real>::min());
  const Real eps = std::numeric_limits<Real>::epsilon();
  int sweep = 0;
  for (;; ++sweep) {
    Real off = 0;
    for (Eigen::Index p = 0; p < m; ++p)
      for (Eigen::Index q = p + 1; q < m; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= eps * scale) break;
    if (sweep == max_sweeps) throw ConvergenceError("Jacobi eigensolver did not converge");
    for (Eigen::Index p = 0; p < m; ++p) {
      for (Eigen::Index q = p + 1; q < m; ++q) {
        const C apq = a(p, q);
        const Real r = std::abs(apq);
        if (r <= eps * eps * scale) continue;
        // Phase-rotate column q so that a(p,q) is real, then a real rotation.
        const C phase = apq / r;
        const Real theta = (a(q, q).real() - a(p, p).real()) / (2 * r);
        const Real t = (theta >= 0 ? Real(1) : Real(-1)) /
                       (std::abs(theta) + std::sqrt(theta * theta + 1));
        const Real c = 1 / std::sqrt(t * t + 1);
        const Real s = t * c;
        // J = [[c, s], [-s conj(phase), c conj(phase)]] on (p, q).
        const C jpp = c, jpq = s, jqp = -s * std::conj(phase), jqq = c * std::conj(phase);
        for (Eigen::Index k = 0; k < m; ++k) {
          const C akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
          const C vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * jpp + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * jqq;
        }
        for (Eigen::Index k = 0; k < m; ++k) {
          const C apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        a(p, q) = a(q, p) = C(0);
        a(p, p) = C(a(p, p).real());
        a(q, q) = C(a(q, q).real());
      }
    }
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(),
            [&](auto x, auto y) { return a(x, x).real() < a(y, y).real(); });
  HermitianEigen<Real> out{RVector<Real>(m), CMatrix<Real>(m, m)};
  for (Eigen::Index i = 0; i < m; ++i) {
    out.values(i) = a(order[i], order[i]).real();
    out.vectors.col(i) = v.col(order[i]);
  }
  return out;
}

/// Largest |eigenvalue| of a Hermitian matrix, i.e. its operator norm.
template <class Real>
Real hermitian_norm(const CMatrix<Real>& h) {
  require_square(h, "hermitian_norm");
  const Eigen::Index m = h.rows();
  if (m == 0) return 0;
  if (m == 1) return std::abs(h(0, 0).real());
  if (m == 2) {
    const Real a = h(0, 0).real(), d = h(1, 1).real();
    const Real disc = std::sqrt((a - d) * (a - d) + 4 * std::norm(h(0, 1)));
    return std::max(std::abs((a + d + disc) / 2), std::abs((a + d - disc) / 2));
  }
  const auto e = hermitian_eigen(h);
  return std::max(std::abs(e.values(0)), std::abs(e.values(m - 1)));
}

// ---------------------------------------------------------------- operator norm

struct OpNormOptions {
  double tol = 1e-13;
  int max_iterations = 10'000;
  std::uint64_t seed = 0x5EED;
};

/// Largest singular value by power iteration on a*a. The working matrix is
/// squared every 16 iterations (at most 20 times), which separates nearly
/// equal top singular values; the returned value is the Rayleigh quotient on
/// a*a itself. Stops when the residual on the working matrix is below tol,
/// or when the Rayleigh quotient stops moving after all squarings (a cluster
/// of singular values equal to working precision). Raises ConvergenceError
/// at the iteration cap.
template <class Derived>
auto op_norm(const Eigen::MatrixBase<Derived>& a_in, OpNormOptions opt = {}) {
  using C = typename Derived::Scalar;
  using Real = typename Eigen::NumTraits<C>::Real;
  if (!(opt.tol > 0)) throw InvalidParameter("op_norm: tol must be positive");
  const CMatrix<Real> a = a_in;
  if (a.size() == 0) return Real(0);
  const CMatrix<Real> h = a.adjoint() * a;
  const Real hn = h.norm();
  if (hn == 0) return Real(0);
  CMatrix<Real> w = h / hn;
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<Real> gauss;
  auto restart = [&](CVector<Real>& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = C(gauss(rng), gauss(rng));
    v.normalize();
  };
  CVector<Real> v(h.rows());
  restart(v);
  constexpr int kMaxSquarings = 20;
  int squarings = 0, still = 0;
  Real prev = -1;
  const Real tol = static_cast<Real>(opt.tol);
  bool converged = false;
  for (int it = 1; it <= opt.max_iterations && !converged; ++it) {
    const CVector<Real> wv = w * v;
    const Real mu = std::real(v.dot(wv));
    if (mu > 0 && (wv - mu * v).norm() <= tol * mu) {
      converged = true;
      break;
    }
    const Real len = wv.norm();
    if (len == 0) {
      restart(v);  // start vector in the kernel
      continue;
    }
    v = wv / len;
    const Real lambda = std::real(v.dot(h * v));
    still = squarings == kMaxSquarings && std::abs(lambda - prev) <= tol * lambda ? still + 1 : 0;
    converged = still >= 2;
    prev = lambda;
    if (it % 16 == 0 && squarings < kMaxSquarings) {
      w = w * w;
      const Real wn = w.norm();
      if (wn == 0) throw ConvergenceError("op_norm: working matrix underflowed");
      w /= wn;
      ++squarings;
    }
  }
  if (!converged) throw ConvergenceError("op_norm: power iteration hit its iteration cap");
  return std::sqrt(std::max(Real(0), std::real(v.dot(h * v))));
}

// ---------------------------------------------------------------- special matrices

template <class Real = double>
CMatrix<Real> rotation(Real alpha) {
  CMatrix<Real> r(2, 2);
  r << std::cos(alpha), -std::sin(alpha), std::sin(alpha), std::cos(alpha);
  return r;
}

/// Orthogonal projection of the plane onto the diagonal line.
template <class Real = double>
CMatrix<Real> line_projection() {
  return CMatrix<Real>::Constant(2, 2, std::complex<Real>(Real(0.5)));
}

/// Block shift sending e_{j+m/2} to e_j. For m = 2 this is [[0,1],[0,0]].
template <class Real = double>
CMatrix<Real> standard_partial_isometry(std::size_t m) {
  if (m == 0 || m % 2 != 0)
    throw InvalidParameter("standard_partial_isometry: m must be even and positive, got " +
                           std::to_string(m));
  CMatrix<Real> v = CMatrix<Real>::Zero(m, m);
  for (std::size_t j = 0; j < m / 2; ++j) v(j, j + m / 2) = 1;
  return v;
}

/// (||v*v - (v*v)^2||_OP, ||v*v + vv* - 1||_OP).
template <class Real>
std::pair<Real, Real> partial_isometry_defects(const CMatrix<Real>& v) {
  require_square(v, "partial_isometry_defects");
  const CMatrix<Real> x = v.adjoint() * v;
  const CMatrix<Real> y = v * v.adjoint();
  const CMatrix<Real> one = CMatrix<Real>::Identity(v.rows(), v.rows());
  return {hermitian_norm<Real>(x - x * x), hermitian_norm<Real>(x + y - one)};
}

/// Rounds b to a partial isometry v with v*v + vv* = 1 using the spectral
/// projections of b*b and bb* at 1/2 and the polar part of b between them.
///
/// Requires both defects of b below 1/4. Refuses (InvalidParameter) when
/// b*b has spectrum in [1/3, 2/3], where rounding is not stable. Raises
/// ImpossibleInput when the rounded ranks do not add up to m, which is
/// always the case for odd m.
template <class Real>
CMatrix<Real> round_to_partial_isometry(const CMatrix<Real>& b) {
  require_square(b, "round_to_partial_isometry");
  const Eigen::Index m = b.rows();
  const auto [d1, d2] = partial_isometry_defects(b);
  if (!(d1 < Real(0.25)) || !(d2 < Real(0.25)))
    throw InvalidParameter("round_to_partial_isometry: defects " + std::to_string(d1) + ", " +
                           std::to_string(d2) + " are not both below 1/4");
  const auto ex = hermitian_eigen<Real>(b.adjoint() * b);
  const auto ey = hermitian_eigen<Real>(b * b.adjoint());
  for (Eigen::Index i = 0; i < m; ++i)
    if (ex.values(i) >= Real(1) / 3 && ex.values(i) <= Real(2) / 3)
      throw InvalidParameter("round_to_partial_isometry: unstable spectrum, eigenvalue " +
                             std::to_string(ex.values(i)) + " of b*b lies in [1/3, 2/3]");
  Eigen::Index r = 0, s = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    r += ex.values(i) > Real(0.5);
    s += ey.values(i) > Real(0.5);
  }
  if (r + s != m)
    throw ImpossibleInput("round_to_partial_isometry: rounded ranks " + std::to_string(r) + " + " +
                          std::to_string(s) + " != " + std::to_string(m) +
                          "; no partial isometry with v*v + vv* = 1 exists here");
  // Top-r eigenvectors of b*b span the source, the rest the target.
  const CMatrix<Real> src = ex.vectors.rightCols(r);
  const CMatrix<Real> dst = ex.vectors.leftCols(m - r);
  const CMatrix<Real> p = src * src.adjoint();
  const CMatrix<Real> w = dst * dst.adjoint() * b * p;
  const auto ew = hermitian_eigen<Real>(w.adjoint() * w);
  CMatrix<Real> inv_sqrt = CMatrix<Real>::Zero(m, m);
  for (Eigen::Index i = m - r; i < m; ++i) {
    if (!(ew.values(i) > 0))
      throw ImpossibleInput("round_to_partial_isometry: compressed b lost rank");
    inv_sqrt += ew.vectors.col(i) * ew.vectors.col(i).adjoint() / std::sqrt(ew.values(i));
  }
  return w * inv_sqrt;
}

// ---------------------------------------------------------------- sampling

/// Complex Gaussian entries divided by max(1, op_norm): a full-support sample
/// from the operator unit ball.
template <class Real = double, class Rng>
CMatrix<Real> random_unit_ball(std::size_t m, Rng& rng) {
  std::normal_distribution<Real> gauss;
  CMatrix<Real> x(m, m);
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = {gauss(rng), gauss(rng)};
  return x / std::max(Real(1), op_norm(x));
}

/// Projection onto the operator unit ball: singular values clipped at 1,
/// computed as x·f(x*x) with f(t) = min(1, 1/sqrt(t)).
template <class Real>
CMatrix<Real> clip_to_unit_ball(const CMatrix<Real>& x) {
  const auto e = hermitian_eigen<Real>(x.adjoint() * x);
  if (e.values.size() == 0 || e.values(e.values.size() - 1) <= 1) return x;
  RVector<Real> f(e.values.size());
  for (Eigen::Index i = 0; i < f.size(); ++i)
    f(i) = e.values(i) > 1 ? 1 / std::sqrt(e.values(i)) : Real(1);
  return x * e.vectors * f.template cast<std::complex<Real>>().asDiagonal() *
         e.vectors.adjoint();
}

// ---------------------------------------------------------------- permutations

/// A bijection of {0..m-1}. Products compose right to left:
/// (p * q)(x) = p(q(x)).
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::size_t> images);
  static Permutation identity(std::size_t m);

  std::size_t degree() const { return images_.size(); }
  std::size_t operator()(std::size_t j) const { return images_.at(j); }
  const std::vector<std::size_t>& images() const { return images_; }
  Permutation inverse() const;

  friend Permutation operator*(const Permutation& p, const Permutation& q);
  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> images_;
};

Permutation random_permutation(std::size_t m, std::mt19937_64& rng);

/// Number of points where p and q differ.
std::size_t displacement(const Permutation& p, const Permutation& q);

/// Entry (p(j), j) is 1.
ComplexMatrix permutation_matrix(const Permutation& p);

// ---------------------------------------------------------------- JSON

/// {"m": int, "re": [[...]], "im": [[...]]}
nlohmann::json to_json(const ComplexMatrix& a);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Permutation& p);
Permutation permutation_from_json(const nlohmann::json& j);

}  // namespace eflab
