// Dense 2x2 complex linear algebra in closed form: products, Hermitian
// eigendecomposition, singular values, and the Hopf parametrization of SU(2)
// used by the invariant quadrature rule.
#pragma once

#include <utility>

#include "equikernel/common.hpp"

namespace equikernel {

// Row-major 2x2 complex matrix.
struct Mat2 {
  std::array<cplx, 4> a{};  // [ a[0] a[1] ; a[2] a[3] ]

  static Mat2 identity() { return {{cplx(1), cplx(0), cplx(0), cplx(1)}}; }
  static Mat2 diag(cplx d0, cplx d1) { return {{d0, cplx(0), cplx(0), d1}}; }

  cplx& operator()(int r, int c) { return a[2 * r + c]; }
  const cplx& operator()(int r, int c) const { return a[2 * r + c]; }

  Mat2 operator*(const Mat2& o) const {
    return {{a[0] * o.a[0] + a[1] * o.a[2], a[0] * o.a[1] + a[1] * o.a[3],
             a[2] * o.a[0] + a[3] * o.a[2], a[2] * o.a[1] + a[3] * o.a[3]}};
  }
  Mat2 operator+(const Mat2& o) const {
    return {{a[0] + o.a[0], a[1] + o.a[1], a[2] + o.a[2], a[3] + o.a[3]}};
  }
  Mat2 operator-(const Mat2& o) const {
    return {{a[0] - o.a[0], a[1] - o.a[1], a[2] - o.a[2], a[3] - o.a[3]}};
  }
  Mat2 operator*(cplx s) const { return {{a[0] * s, a[1] * s, a[2] * s, a[3] * s}}; }

  Mat2 adjoint() const {
    return {{std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])}};
  }
  cplx trace() const { return a[0] + a[3]; }
  cplx det() const { return a[0] * a[3] - a[1] * a[2]; }

  double frobenius_norm() const {
    double s = 0.0;
    for (const cplx& z : a) s += std::norm(z);
    return std::sqrt(s);
  }
};

inline bool is_unitary(const Mat2& u, double tolerance = tol::unitarity) {
  return (u.adjoint() * u - Mat2::identity()).frobenius_norm() <= tolerance;
}

// Eigenvalues (descending) and a unitary of eigenvectors for a Hermitian 2x2
// matrix.  The first column's first nonzero entry is made real positive so the
// frame is deterministic.
struct HermEig {
  std::array<double, 2> lambda{};  // lambda[0] >= lambda[1]
  Mat2 vectors;                    // columns are eigenvectors
};

inline HermEig hermitian_eig(const Mat2& m) {
  const double a = m.a[0].real();
  const double d = m.a[3].real();
  const cplx b = m.a[1];  // m is Hermitian: m(1,0) == conj(b)
  const double tr = a + d;
  const double disc = std::sqrt(std::max(0.0, sqr(a - d) + 4.0 * std::norm(b)));
  HermEig out;
  out.lambda = {0.5 * (tr + disc), 0.5 * (tr - disc)};

  // Eigenvector for lambda[0]: pick the better-conditioned of the two rows.
  cplx v0, v1;
  if (std::abs(b) > 1e-300) {
    v0 = b;
    v1 = cplx(out.lambda[0] - a);
  } else if (a >= d) {
    v0 = cplx(1);
    v1 = cplx(0);
  } else {
    v0 = cplx(0);
    v1 = cplx(1);
  }
  double n = std::sqrt(std::norm(v0) + std::norm(v1));
  v0 /= n;
  v1 /= n;
  // Phase convention: first nonzero component of the first column is > 0.
  cplx lead = (std::abs(v0) > 1e-14) ? v0 : v1;
  cplx phase = std::conj(lead) / std::abs(lead);
  v0 *= phase;
  v1 *= phase;
  // Second column: the unique (up to phase) orthogonal unit vector, phased so
  // the matrix has determinant 1 (hence lies in SU(2)).
  out.vectors = {{v0, -std::conj(v1), v1, std::conj(v0)}};
  return out;
}

// Singular values of an arbitrary 2x2 complex matrix (descending).
inline std::array<double, 2> singular_values(const Mat2& m) {
  const Mat2 mm = m.adjoint() * m;
  HermEig e = hermitian_eig(mm);
  return {std::sqrt(std::max(0.0, e.lambda[0])), std::sqrt(std::max(0.0, e.lambda[1]))};
}

// Hopf coordinates on SU(2)/center = SO(3): u(phi, psi) rotates the standard
// flag; together with a torus factor this parametrizes all of U(2).
inline Mat2 hopf_su2(double phi, double psi) {
  const double c = std::cos(0.5 * phi);
  const double s = std::sin(0.5 * phi);
  const cplx e = std::exp(iu * psi);
  return {{cplx(c), -s * std::conj(e), s * e, cplx(c)}};
}

// Haar-uniform SU(2) element (quaternion sphere sampling).
inline Mat2 random_su2(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  double q0 = g(rng), q1 = g(rng), q2 = g(rng), q3 = g(rng);
  double n = std::sqrt(q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3);
  if (n < 1e-12) return Mat2::identity();
  q0 /= n;
  q1 /= n;
  q2 /= n;
  q3 /= n;
  return {{cplx(q0, q1), cplx(q2, q3), cplx(-q2, q3), cplx(q0, -q1)}};
}

// Haar-uniform U(2): SU(2) times an independent central/diagonal phase pair.
inline Mat2 random_u2(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * pi);
  const double t1 = u(rng), t2 = u(rng);
  return Mat2::diag(std::exp(iu * t1), std::exp(iu * t2)) * random_su2(rng);
}

}  // namespace equikernel
