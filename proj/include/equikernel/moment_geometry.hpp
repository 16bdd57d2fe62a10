// Moment-map geometry on the two model spheres: the 2x2 moment matrix and
// its spectral data, the locus classifier built on the spectral invariant
// t(m, nu), fundamental vector fields of the U(2) action, the contact and
// Kähler pairings, the distinguished normal field along the critical locus,
// boundary-locus sampling by root-finding, Heisenberg-type displacements, and
// the evaluation-orthocomplement basis.
//
// Conventions (pinned by the test suite):
//   <u, v> = sum_i u_i conj(v_i)            (first slot linear)
//   alpha(v) = Im<v, x>                     (contact form; alpha(i x) = 1)
//   xi_X(x) = -(xihat . x)                  (generator of the flow exp(-s xi);
//                                            makes alpha(xi_X) = -<Phi, xi>)
//   g = Re<.,.>,  omega = -Im<.,.>          (so d<Phi,xi> = 2 omega(xi_M, .))
// The ambient block action xihat is (xi Z, xi W) plus, on the second model,
// multiplication of the extra coordinate by trace(xi).
#pragma once

#include <optional>

#include "equikernel/common.hpp"
#include "equikernel/linalg2.hpp"
#include "equikernel/weights.hpp"

namespace equikernel {

// ---------------------------------------------------------------------------
// Points and tangent vectors
// ---------------------------------------------------------------------------

struct SpherePoint {
  Example ex = Example::P3;
  std::array<cplx, 5> c{};  // z1, z2, w1, w2, [extra det-weight coordinate]

  double norm() const {
    double s = 0.0;
    for (int i = 0; i < num_vars(ex); ++i) s += std::norm(c[i]);
    return std::sqrt(s);
  }
};

inline SpherePoint make_point(Example ex, std::array<cplx, 5> coords) {
  SpherePoint x{ex, coords};
  if (ex == Example::P3) x.c[4] = cplx(0.0, 0.0);
  if (std::abs(x.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("make_point: coordinates not on the unit sphere");
  return x;
}

inline SpherePoint normalized_point(Example ex, std::array<cplx, 5> coords) {
  SpherePoint x{ex, coords};
  if (ex == Example::P3) x.c[4] = cplx(0.0, 0.0);
  const double n = x.norm();
  if (n < 1e-14) throw std::invalid_argument("normalized_point: zero vector");
  for (auto& z : x.c) z /= n;
  return x;
}

inline SpherePoint random_sphere_point(Example ex, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::array<cplx, 5> c{};
  for (int i = 0; i < num_vars(ex); ++i) c[i] = cplx(g(rng), g(rng));
  return normalized_point(ex, c);
}

// Ambient inner product over the active coordinates (first slot linear).
inline cplx dot(const SpherePoint& x, const std::array<cplx, 5>& u,
                const std::array<cplx, 5>& v) {
  cplx s(0.0, 0.0);
  for (int i = 0; i < num_vars(x.ex); ++i) s += u[i] * std::conj(v[i]);
  return s;
}

struct TangentVector {
  SpherePoint base;
  std::array<cplx, 5> v{};

  double norm() const {
    double s = 0.0;
    for (int i = 0; i < num_vars(base.ex); ++i) s += std::norm(v[i]);
    return std::sqrt(s);
  }
};

inline bool same_base(const TangentVector& a, const TangentVector& b, double tolerance = 1e-12) {
  if (a.base.ex != b.base.ex) return false;
  double s = 0.0;
  for (int i = 0; i < 5; ++i) s += std::norm(a.base.c[i] - b.base.c[i]);
  return std::sqrt(s) <= tolerance;
}

// Component of v along the complex line through the base point, removed:
// the horizontal part (complex-orthogonal to the point, hence tangent and
// transverse to the structure-circle direction i*x).
inline TangentVector horizontal_part(const TangentVector& t) {
  TangentVector out = t;
  const cplx overlap = dot(t.base, t.v, t.base.c);
  for (int i = 0; i < num_vars(t.base.ex); ++i) out.v[i] -= overlap * t.base.c[i];
  return out;
}

inline bool is_horizontal(const TangentVector& t, double tolerance = tol::orthogonality) {
  return std::abs(dot(t.base, t.v, t.base.c)) <= tolerance * std::max(1.0, t.norm());
}

// Contact form: alpha(v) = Im<v, x>; the circle direction i*x pairs to 1.
inline double contact_alpha(const TangentVector& t) {
  return dot(t.base, t.v, t.base.c).imag();
}

// ---------------------------------------------------------------------------
// Group action and moment map
// ---------------------------------------------------------------------------

// Ambient block action of a 2x2 matrix: a acts on (z1,z2) and (w1,w2) as the
// defining representation; the extra coordinate of the second model is scaled
// by scalar (det for group elements, trace for Lie-algebra elements).
inline std::array<cplx, 5> block_apply(Example ex, const Mat2& a, cplx scalar,
                                       const std::array<cplx, 5>& c) {
  std::array<cplx, 5> out{};
  out[0] = a(0, 0) * c[0] + a(0, 1) * c[1];
  out[1] = a(1, 0) * c[0] + a(1, 1) * c[1];
  out[2] = a(0, 0) * c[2] + a(0, 1) * c[3];
  out[3] = a(1, 0) * c[2] + a(1, 1) * c[3];
  if (ex == Example::P4) out[4] = scalar * c[4];
  return out;
}

inline SpherePoint apply_group(const Mat2& g, const SpherePoint& x) {
  assert(is_unitary(g, 1e-9));
  SpherePoint out = x;
  out.c = block_apply(x.ex, g, g.det(), x.c);
  return out;
}

// Skew-Hermitian moment matrix Phi(x) = i (Z Z* + W W* [+ |t|^2 I]) together
// with its spectral data.
struct MomentValue {
  Mat2 matrix;        // Phi(x), skew-Hermitian
  double lambda1 = 0.0;  // eigenvalues of -i Phi, descending
  double lambda2 = 0.0;
  Mat2 h;             // special-unitary diagonalizer: -i Phi = h diag(lambda) h*
  bool degenerate = false;  // lambda1 == lambda2 within tolerance (h = I)
};

struct MomentDiag {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  Mat2 h;
  bool degenerate = false;
};

inline bool is_skew_hermitian(const Mat2& m, double tolerance = tol::unitarity) {
  return (m + m.adjoint()).frobenius_norm() <= tolerance * std::max(1.0, m.frobenius_norm());
}

// Eigen-data of a skew-Hermitian matrix: eigenvalues of -i xi (descending)
// and a special-unitary diagonalizer whose first column's leading entry is
// real positive.  Degenerate spectrum returns h = I with a flag.
inline MomentDiag diagonalize_moment(const Mat2& xi, double degen_tol = tol::degenerate_eig) {
  if (!is_skew_hermitian(xi))
    throw std::invalid_argument("diagonalize_moment: input not skew-Hermitian");
  const Mat2 herm = xi * cplx(0.0, -1.0);
  const HermEig eig = hermitian_eig(herm);
  MomentDiag out;
  out.lambda1 = eig.lambda[0];
  out.lambda2 = eig.lambda[1];
  if (eig.lambda[0] - eig.lambda[1] <= degen_tol) {
    out.h = Mat2::identity();
    out.degenerate = true;
  } else {
    out.h = eig.vectors;
  }
  return out;
}

inline Mat2 moment_matrix(const SpherePoint& x) {
  // (Z Z* + W W*)_{jk} = z_j conj(z_k) + w_j conj(w_k), plus |t|^2 I on P4.
  Mat2 p;
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k)
      p(j, k) = x.c[j] * std::conj(x.c[k]) + x.c[2 + j] * std::conj(x.c[2 + k]);
  if (x.ex == Example::P4) {
    const double tt = std::norm(x.c[4]);
    p(0, 0) += tt;
    p(1, 1) += tt;
  }
  return p * iu;
}

inline MomentValue moment_map(const SpherePoint& x) {
  MomentValue out;
  out.matrix = moment_matrix(x);
  const MomentDiag d = diagonalize_moment(out.matrix);
  out.lambda1 = d.lambda1;
  out.lambda2 = d.lambda2;
  out.h = d.h;
  out.degenerate = d.degenerate;
  return out;
}

// Diagonal (torus) part of -i Phi: (|z1|^2 + |w1|^2 [+|t|^2], |z2|^2 + ...).
inline std::array<double, 2> torus_moment(const SpherePoint& x) {
  const Mat2 phi = moment_matrix(x);
  return {(phi(0, 0) * cplx(0.0, -1.0)).real(), (phi(1, 1) * cplx(0.0, -1.0)).real()};
}

// Pairing <b1, b2> = trace(b1 b2*) on 2x2 matrices; real for skew-Hermitian
// pairs.
inline double moment_pairing(const Mat2& b1, const Mat2& b2) {
  const cplx tr = (b1 * b2.adjoint()).trace();
  assert(std::abs(tr.imag()) <= 1e-9 * std::max(1.0, std::abs(tr)));
  return tr.real();
}

inline double moment_norm(const SpherePoint& x) {
  const MomentValue mv = moment_map(x);
  return std::hypot(mv.lambda1, mv.lambda2);
}

// ---------------------------------------------------------------------------
// Locus classification
// ---------------------------------------------------------------------------

enum class LocusTag { Outer_A, Boundary_MGO, Inner_B };

inline const char* tag_name(LocusTag t) {
  switch (t) {
    case LocusTag::Outer_A: return "Outer_A";
    case LocusTag::Boundary_MGO: return "Boundary_MGO";
    case LocusTag::Inner_B: return "Inner_B";
  }
  return "?";
}

struct LocusClass {
  LocusTag tag = LocusTag::Outer_A;
  std::optional<double> t_value;  // empty when the spectrum is degenerate
  bool degenerate = false;
  bool torus_locus = false;  // nu2 * (Phi_T)_1 == nu1 * (Phi_T)_2
  bool core = false;         // boundary and torus locus simultaneously
};

// Spectral invariant t(m, nu) = (lambda1 nu2 - lambda2 nu1) /
// ((nu1 + nu2)(lambda1 - lambda2)).  Zero exactly on the critical
// hypersurface, positive inside the saturated torus locus, negative outside.
inline double t_invariant(double lambda1, double lambda2, Weight nu) {
  return (lambda1 * nu.nu2 - lambda2 * nu.nu1) /
         ((nu.nu1 + nu.nu2) * (lambda1 - lambda2));
}

inline LocusClass classify(const SpherePoint& x, Weight nu, double tol_t = tol::locus_t) {
  if (!(nu.nu1 > nu.nu2 && nu.nu2 >= 1))
    throw std::invalid_argument("classify: label must satisfy nu1 > nu2 >= 1");
  const MomentValue mv = moment_map(x);
  LocusClass out;
  out.degenerate = mv.degenerate;
  if (mv.degenerate) {
    // Scalar moment matrix: the point lies outside the saturation, and the
    // spectral invariant is undefined.
    out.tag = LocusTag::Outer_A;
  } else {
    const double t = t_invariant(mv.lambda1, mv.lambda2, nu);
    out.t_value = t;
    if (std::abs(t) <= tol_t)
      out.tag = LocusTag::Boundary_MGO;
    else if (t > tol_t && t < 0.5)
      out.tag = LocusTag::Inner_B;
    else
      out.tag = LocusTag::Outer_A;
  }
  const std::array<double, 2> pt = torus_moment(x);
  out.torus_locus = std::abs(nu.nu2 * pt[0] - nu.nu1 * pt[1]) <= tol_t * (nu.nu1 + nu.nu2);
  out.core = out.torus_locus && out.tag == LocusTag::Boundary_MGO;
  return out;
}

// lambda_nu(m) = ||Phi(m)|| / ||nu||; on the critical locus this also equals
// trace(-i Phi)/(nu1 + nu2).
inline double lambda_nu(const SpherePoint& x, Weight nu) {
  return moment_norm(x) / weight_norm(nu);
}

// Point with prescribed diagonal moment profile (lambda1, 1 - lambda1):
// Z = (sqrt(lambda1), 0), W = (0, sqrt(1 - lambda1)) gives
// -i Phi = diag(lambda1, 1 - lambda1) exactly (the extra coordinate stays 0).
inline SpherePoint diagonal_profile_point(Example ex, double lambda1) {
  assert(lambda1 >= 0.0 && lambda1 <= 1.0);
  return make_point(ex, {cplx(std::sqrt(lambda1), 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0),
                         cplx(std::sqrt(1.0 - lambda1), 0.0), cplx(0.0, 0.0)});
}

// Inverts the spectral invariant along the diagonal profile family:
// t((l, 1-l), nu) = t0 solves to l = (nu1 - t0 (nu1+nu2)) / ((nu1+nu2)(1 - 2 t0)).
// t0 in (0, 1/2) lands strictly inside the saturated locus, t0 = 0 on its
// boundary, small t0 < 0 outside.
inline SpherePoint inner_profile_point(Example ex, Weight nu, double t0) {
  assert(t0 < 0.5);
  const double s = nu.nu1 + nu.nu2;
  const double l1 = (nu.nu1 - t0 * s) / (s * (1.0 - 2.0 * t0));
  return diagonal_profile_point(ex, l1);
}

// ---------------------------------------------------------------------------
// Fundamental vector fields, metric, normal field
// ---------------------------------------------------------------------------

// Generator of the flow s -> exp(-s xi) . x.  The sign makes the contact
// pairing alpha(xi_X) = -<Phi, xi> hold identically, which every downstream
// Hamiltonian identity in this library assumes.
inline TangentVector fundamental_vector_field(const Mat2& xi, const SpherePoint& x) {
  assert(is_skew_hermitian(xi, 1e-9));
  TangentVector out{x, block_apply(x.ex, xi, xi.trace(), x.c)};
  for (int i = 0; i < num_vars(x.ex); ++i) out.v[i] = -out.v[i];
  return out;
}

// Riemannian and symplectic pairings of horizontal vectors:
// g = Re<u,v>, omega = -Im<u,v>.  Throws unless both inputs are horizontal
// at the same base point.
struct MetricPair {
  double g = 0.0;
  double omega = 0.0;
};

inline MetricPair metric_pair(const TangentVector& u, const TangentVector& v) {
  if (!same_base(u, v)) throw std::invalid_argument("metric_pair: base points differ");
  if (!is_horizontal(u) || !is_horizontal(v))
    throw std::invalid_argument("metric_pair: inputs must be horizontal");
  const cplx ip = dot(u.base, u.v, v.v);
  return {ip.real(), -ip.imag()};
}

// The normal field along the critical hypersurface: Upsilon = i . rho_X(x)
// with rho = i h D_perp h*, D_perp = diag(-nu2, nu1).  Horizontal on the
// locus because <Phi, rho> is proportional to the spectral invariant there.
// Points toward the outer region (the invariant decreases along it).
inline TangentVector upsilon(const SpherePoint& x, Weight nu, double tol_t = tol::locus_t) {
  const LocusClass cls = classify(x, nu, tol_t);
  if (cls.tag != LocusTag::Boundary_MGO)
    throw std::domain_error("upsilon: point is not on the critical locus");
  if (cls.degenerate) throw std::domain_error("upsilon: degenerate moment spectrum");
  const MomentValue mv = moment_map(x);
  const Mat2 d_perp = Mat2::diag(cplx(-nu.nu2), cplx(nu.nu1));
  const Mat2 rho = (mv.h * d_perp * mv.h.adjoint()) * iu;
  TangentVector raw = fundamental_vector_field(rho, x);
  for (int i = 0; i < num_vars(x.ex); ++i) raw.v[i] *= iu;
  // On the locus the field is already horizontal; project to remove the
  // tolerance-sized residual so callers can rely on exact horizontality.
  TangentVector out = horizontal_part(raw);
  assert((out.norm() == 0.0) ||
         std::abs(dot(x, raw.v, x.c)) <= 1e-6 * std::max(1.0, raw.norm()));
  return out;
}

// Local density factor ||nu|| / ||horizontal part of (i h D_perp h*)-field||,
// the invariant entering every leading-term formula on the locus.
inline double d_nu_invariant(const SpherePoint& x, Weight nu, double tol_t = tol::locus_t) {
  const LocusClass cls = classify(x, nu, tol_t);
  if (cls.tag != LocusTag::Boundary_MGO)
    throw std::domain_error("d_nu_invariant: point is not on the critical locus");
  if (cls.degenerate) throw std::domain_error("d_nu_invariant: degenerate moment spectrum");
  const MomentValue mv = moment_map(x);
  const Mat2 d_perp = Mat2::diag(cplx(-nu.nu2), cplx(nu.nu1));
  const Mat2 rho = (mv.h * d_perp * mv.h.adjoint()) * iu;
  const TangentVector field = horizontal_part(fundamental_vector_field(rho, x));
  const double den = field.norm();
  if (den < 1e-10) throw std::domain_error("d_nu_invariant: vanishing generator norm");
  return weight_norm(nu) / den;
}

// ---------------------------------------------------------------------------
// Boundary-locus sampling via singular-value deformation
// ---------------------------------------------------------------------------

struct Svd2 {
  Mat2 u, v;                    // m = u * diag(sigma) * v.adjoint()
  std::array<double, 2> sigma;  // descending, >= 0
};

inline Svd2 svd2(const Mat2& m) {
  const HermEig left = hermitian_eig(m * m.adjoint());
  Svd2 out;
  out.u = left.vectors;
  out.sigma = {std::sqrt(std::max(0.0, left.lambda[0])),
               std::sqrt(std::max(0.0, left.lambda[1]))};
  // Right singular vectors: v_j = m* u_j / sigma_j, completed to a unitary
  // when a singular value vanishes.
  const Mat2 mu = m.adjoint() * out.u;
  std::array<cplx, 2> v0 = {mu(0, 0), mu(1, 0)};
  std::array<cplx, 2> v1 = {mu(0, 1), mu(1, 1)};
  if (out.sigma[0] > 1e-14) {
    v0[0] /= out.sigma[0];
    v0[1] /= out.sigma[0];
  } else {
    v0 = {cplx(1), cplx(0)};
  }
  if (out.sigma[1] > 1e-14) {
    v1[0] /= out.sigma[1];
    v1[1] /= out.sigma[1];
  } else {
    v1 = {-std::conj(v0[1]), std::conj(v0[0])};
  }
  out.v = {{v0[0], v1[0], v0[1], v1[1]}};
  return out;
}

// Columns Z = (z1, z2), W = (w1, w2) assembled as a 2x2 matrix; its singular
// values sigma give the moment eigenvalues lambda_j = sigma_j^2 + |t|^2, and
// |det| = |Z /\ W|.
inline Mat2 zw_matrix(const SpherePoint& x) {
  return {{x.c[0], x.c[2], x.c[1], x.c[3]}};
}

namespace detail {

// Rescales interpolated singular values so the point stays on the unit
// sphere (the extra coordinate, if any, is kept fixed).
inline std::array<double, 2> renormalize_sigma(std::array<double, 2> s, double mass) {
  const double cur = s[0] * s[0] + s[1] * s[1];
  const double f = std::sqrt(mass / cur);
  return {s[0] * f, s[1] * f};
}

}  // namespace detail

// Deforms x along its singular-value profile until the spectral invariant
// t(m, nu) vanishes; frame (singular vectors) and the extra coordinate are
// held fixed, so the deformation stays within one group orbit family.
// Throws after max_iter bisection steps without meeting the tolerance.
inline SpherePoint deform_to_boundary(const SpherePoint& x, Weight nu,
                                      double target_tol = 1e-10, int max_iter = 100) {
  const double tt = (x.ex == Example::P4) ? std::norm(x.c[4]) : 0.0;
  const double mass = 1.0 - tt;  // |Z|^2 + |W|^2
  if (mass < 1e-12)
    throw std::domain_error("deform_to_boundary: no mass in the vector blocks");
  const Svd2 sv = svd2(zw_matrix(x));

  // t as a function of the singular values (frame-independent).
  const auto t_of = [&](const std::array<double, 2>& s) {
    const double l1 = s[0] * s[0] + tt;
    const double l2 = s[1] * s[1] + tt;
    return t_invariant(l1, l2, nu);
  };
  // One-parameter family: u = 0 is the balanced profile (t < 0 strictly),
  // u = 1 the decomposable profile (t > 0 strictly); bisection on u.
  const double bal = std::sqrt(mass / 2.0);
  const auto sigma_at = [&](double u) {
    std::array<double, 2> s = {(1.0 - u) * bal + u * std::sqrt(mass),
                               (1.0 - u) * bal};
    return detail::renormalize_sigma(s, mass);
  };

  double lo = 0.0, hi = 1.0;
  if (!(t_of(sigma_at(lo)) < 0.0 && t_of(sigma_at(hi)) > 0.0))
    throw std::runtime_error("deform_to_boundary: bracket endpoints do not straddle the locus");
  std::array<double, 2> s_mid{};
  bool converged = false;
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    s_mid = sigma_at(mid);
    const double t = t_of(s_mid);
    if (std::abs(t) <= target_tol * 0.01) {
      converged = true;
      break;
    }
    (t < 0.0 ? lo : hi) = mid;
  }
  if (!converged) throw std::runtime_error("deform_to_boundary: no convergence in 100 iterations");

  const Mat2 m_new = sv.u * Mat2::diag(cplx(s_mid[0]), cplx(s_mid[1])) * sv.v.adjoint();
  std::array<cplx, 5> c = {m_new(0, 0), m_new(1, 0), m_new(0, 1), m_new(1, 1), x.c[4]};
  return normalized_point(x.ex, c);
}

// n seeded points on the critical locus of the chosen model: random sphere
// draws deformed onto the locus, where the moment spectrum is proportional
// to nu.  On the three-fold model (no extra coordinate) this pins
// |Z /\ W| / (|Z|^2 + |W|^2) = sqrt(nu1 nu2)/(nu1 + nu2) within 1e-10.
// Every returned point classifies as Boundary_MGO; per-point root-finding
// failures are thrown with an index.
inline std::vector<SpherePoint> sample_boundary(Weight nu, int n, std::uint64_t seed,
                                                Example ex = Example::P3) {
  if (!(nu.nu1 > nu.nu2 && nu.nu2 >= 1))
    throw std::invalid_argument("sample_boundary: label must satisfy nu1 > nu2 >= 1");
  if (n < 0) throw std::invalid_argument("sample_boundary: negative count");
  std::vector<SpherePoint> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::mt19937_64 rng = item_rng(seed, static_cast<std::uint64_t>(i));
    SpherePoint x = random_sphere_point(ex, rng);
    if (ex == Example::P4) {
      // The singular-profile deformation reaches the locus only when the
      // extra coordinate's share |t|^2 is below nu2/nu1: at the decomposable
      // endpoint the spectral invariant is (nu2 - |t|^2 nu1) / ((nu1+nu2) *
      // mass), which must be positive for the bisection bracket.  Redraw
      // outside that region (with margin for root-finding headroom).
      const double share_cap = 0.95 * static_cast<double>(nu.nu2) / nu.nu1;
      while (std::norm(x.c[4]) >= share_cap) x = random_sphere_point(ex, rng);
    }
    try {
      SpherePoint b = deform_to_boundary(x, nu);
      if (classify(b, nu).tag != LocusTag::Boundary_MGO)
        throw std::runtime_error("post-check failed");
      out.push_back(b);
    } catch (const std::exception& e) {
      throw std::runtime_error("sample_boundary: point " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Heisenberg displacement and evaluation orthocomplement
// ---------------------------------------------------------------------------

// x + (theta, v): phase rotation by theta composed with the unit-speed
// sphere geodesic from x in the horizontal direction v.
inline SpherePoint heisenberg_displace(const SpherePoint& x, double theta,
                                       const TangentVector& v) {
  if (!same_base(v, TangentVector{x, {}}))
    throw std::invalid_argument("heisenberg_displace: vector not based at x");
  if (!is_horizontal(v)) throw std::invalid_argument("heisenberg_displace: vector not horizontal");
  const double r = v.norm();
  if (r >= 0.5 * pi) throw std::invalid_argument("heisenberg_displace: |v| must be < pi/2");
  const cplx phase = std::exp(iu * theta);
  std::array<cplx, 5> c{};
  if (r == 0.0) {
    for (int i = 0; i < 5; ++i) c[i] = phase * x.c[i];
  } else {
    const double cr = std::cos(r), sr = std::sin(r);
    for (int i = 0; i < 5; ++i) c[i] = phase * (cr * x.c[i] + sr * v.v[i] / r);
  }
  SpherePoint out = x;
  out.c = c;
  // Geodesics preserve the sphere exactly up to roundoff.
  assert(std::abs(out.norm() - 1.0) <= 1e-12);
  return out;
}

// The four standard generators of the skew-Hermitian 2x2 matrices.
inline std::array<Mat2, 4> u2_basis() {
  return {Mat2{{iu, 0, 0, 0}}, Mat2{{0, 0, 0, iu}}, Mat2{{0, cplx(1), cplx(-1), 0}},
          Mat2{{0, iu, iu, 0}}};
}

namespace detail {

// Modified Gram-Schmidt over the ambient Hermitian product restricted to the
// active coordinates; appends the normalized residual if it is non-negligible.
inline bool gs_append(const SpherePoint& base, std::vector<std::array<cplx, 5>>& basis,
                      std::array<cplx, 5> v, double keep_tol) {
  double orig = 0.0;
  for (int i = 0; i < num_vars(base.ex); ++i) orig += std::norm(v[i]);
  orig = std::sqrt(orig);
  if (orig < 1e-300) return false;
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis) {
      const cplx overlap = dot(base, v, b);
      for (int i = 0; i < num_vars(base.ex); ++i) v[i] -= overlap * b[i];
    }
  }
  double res = 0.0;
  for (int i = 0; i < num_vars(base.ex); ++i) res += std::norm(v[i]);
  res = std::sqrt(res);
  if (res <= keep_tol * std::max(1.0, orig)) return false;
  for (int i = 0; i < num_vars(base.ex); ++i) v[i] /= res;
  basis.push_back(v);
  return true;
}

}  // namespace detail

// Complex-orthonormal basis of the orthocomplement, inside the horizontal
// space, of the complex span of the four descended generators.  Empty at
// points where the generators already span the horizontal space.
inline std::vector<TangentVector> perp_h_basis(const SpherePoint& x, double rank_tol = 1e-8) {
  std::vector<std::array<cplx, 5>> span;
  span.push_back(x.c);  // quotient out the complex line through x itself
  for (const Mat2& xi : u2_basis()) {
    const TangentVector f = horizontal_part(fundamental_vector_field(xi, x));
    detail::gs_append(x, span, f.v, rank_tol);
  }
  std::vector<std::array<cplx, 5>> full = span;
  std::vector<TangentVector> out;
  for (int i = 0; i < num_vars(x.ex); ++i) {
    std::array<cplx, 5> e{};
    e[i] = cplx(1.0, 0.0);
    if (detail::gs_append(x, full, e, rank_tol)) out.push_back({x, full.back()});
  }
  return out;
}

// Complex rank of the span of the descended generators inside the horizontal
// space (the action is locally free exactly when the real rank of the four
// generators is 4; on the first model that happens iff Z /\ W != 0).
inline int generator_span_rank(const SpherePoint& x, double rank_tol = 1e-8) {
  std::vector<std::array<cplx, 5>> span;
  span.push_back(x.c);
  int rank = 0;
  for (const Mat2& xi : u2_basis()) {
    const TangentVector f = horizontal_part(fundamental_vector_field(xi, x));
    if (detail::gs_append(x, span, f.v, rank_tol)) ++rank;
  }
  return rank;
}

// Real rank of the four generator fields as tangent vectors (Gram-Schmidt
// over the real inner product Re<.,.>); 4 exactly on the locally free set.
inline int generator_real_rank(const SpherePoint& x, double rank_tol = 1e-8) {
  std::vector<std::array<double, 10>> basis;
  const int nv = num_vars(x.ex);
  for (const Mat2& xi : u2_basis()) {
    const TangentVector f = fundamental_vector_field(xi, x);
    std::array<double, 10> r{};
    for (int i = 0; i < nv; ++i) {
      r[2 * i] = f.v[i].real();
      r[2 * i + 1] = f.v[i].imag();
    }
    double orig = 0.0;
    for (double t : r) orig += t * t;
    orig = std::sqrt(orig);
    if (orig < 1e-300) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        double ov = 0.0;
        for (int i = 0; i < 2 * nv; ++i) ov += r[i] * b[i];
        for (int i = 0; i < 2 * nv; ++i) r[i] -= ov * b[i];
      }
    }
    double res = 0.0;
    for (double t : r) res += t * t;
    res = std::sqrt(res);
    if (res > rank_tol * std::max(1.0, orig)) {
      for (int i = 0; i < 2 * nv; ++i) r[i] /= res;
      basis.push_back(r);
    }
  }
  return static_cast<int>(basis.size());
}

// A complex-orthonormal basis of the full horizontal space at x.
inline std::vector<TangentVector> horizontal_basis(const SpherePoint& x) {
  std::vector<std::array<cplx, 5>> basis;
  basis.push_back(x.c);
  std::vector<TangentVector> out;
  for (int i = 0; i < num_vars(x.ex); ++i) {
    std::array<cplx, 5> e{};
    e[i] = cplx(1.0, 0.0);
    if (detail::gs_append(x, basis, e, 1e-12)) out.push_back({x, basis.back()});
  }
  return out;
}

// Euclidean norm of the gradient of the spectral invariant along the
// horizontal (descended) directions, by central finite differences over a
// real orthonormal horizontal frame.  Used as the co-area factor when
// converting band-sampling averages into surface integrals.
inline double locus_t_gradient_norm(const SpherePoint& x, Weight nu, double step = 1e-5) {
  const std::vector<TangentVector> hb = horizontal_basis(x);
  const auto t_at = [&](const TangentVector& dir, double s) {
    TangentVector d = dir;
    for (auto& z : d.v) z *= s;
    const SpherePoint y = heisenberg_displace(x, 0.0, d);
    const MomentValue mv = moment_map(y);
    return t_invariant(mv.lambda1, mv.lambda2, nu);
  };
  double sum = 0.0;
  for (const TangentVector& h : hb) {
    // Real and imaginary directions of each complex basis vector.
    for (int part = 0; part < 2; ++part) {
      TangentVector dir = h;
      if (part == 1)
        for (auto& z : dir.v) z *= iu;
      const double deriv = (t_at(dir, step) - t_at(dir, -step)) / (2.0 * step);
      sum += deriv * deriv;
    }
  }
  return std::sqrt(sum);
}

// Extremes of ||Phi|| over the model, found by dense sampling of the
// reachable eigenvalue profiles followed by local refinement.  Used to
// truncate the level window of the quadrature projector.
struct MomentNormRange {
  double min_norm = 0.0;  // attained at the balanced profile
  double max_norm = 0.0;  // attained at the most concentrated profile
};

inline MomentNormRange moment_norm_range(Example ex) {
  // The eigenvalue pair of -i Phi is (s1^2 + tau^2, s2^2 + tau^2) with
  // s1^2 + s2^2 + tau^2 = 1 (tau = 0 on the first model); every profile in
  // that triangle is attained.  Scan it densely, then refine the extremes by
  // shrinking grid steps around the best cell.
  const bool has_extra = (ex == Example::P4);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  auto norm_at = [](double mu1, double tau2) {
    const double l1 = mu1 + tau2;
    const double l2 = (1.0 - tau2 - mu1) + tau2;
    return std::hypot(l1, l2);
  };
  const int n = 400;
  double best_lo_mu = 0, best_lo_tau = 0, best_hi_mu = 0, best_hi_tau = 0;
  for (int a = 0; a <= (has_extra ? n : 0); ++a) {
    const double tau2 = has_extra ? static_cast<double>(a) / n : 0.0;
    for (int b = 0; b <= n; ++b) {
      const double mass = 1.0 - tau2;
      const double mu1 = mass * (0.5 + 0.5 * static_cast<double>(b) / n);
      const double v = norm_at(mu1, tau2);
      if (v < lo) { lo = v; best_lo_mu = mu1; best_lo_tau = tau2; }
      if (v > hi) { hi = v; best_hi_mu = mu1; best_hi_tau = tau2; }
    }
  }
  // Refinement: coordinate-wise golden-section-style shrinking around each
  // extremum candidate.
  auto refine = [&](double mu, double tau2, bool minimize) {
    double step_mu = 1.0 / n, step_tau = has_extra ? 1.0 / n : 0.0;
    double best = norm_at(mu, tau2);
    for (int it = 0; it < 60; ++it) {
      bool improved = false;
      for (int dm = -1; dm <= 1; ++dm)
        for (int dt = -1; dt <= 1; ++dt) {
          const double t2 = std::clamp(tau2 + dt * step_tau, 0.0, 1.0);
          const double mass = 1.0 - t2;
          const double m1 = std::clamp(mu + dm * step_mu, 0.5 * mass, mass);
          const double v = norm_at(m1, t2);
          if (minimize ? (v < best) : (v > best)) {
            best = v;
            mu = m1;
            tau2 = t2;
            improved = true;
          }
        }
      if (!improved) {
        step_mu *= 0.5;
        step_tau *= 0.5;
      }
    }
    return best;
  };
  MomentNormRange out;
  out.min_norm = refine(best_lo_mu, best_lo_tau, true);
  out.max_norm = refine(best_hi_mu, best_hi_tau, false);
  // Closed-form anchors: balanced profile gives 1/sqrt(2) on both models;
  // the concentrated profile gives 1 resp. sqrt(2).
  assert(std::abs(out.min_norm - 1.0 / std::sqrt(2.0)) < 1e-6);
  assert(std::abs(out.max_norm - (has_extra ? std::sqrt(2.0) : 1.0)) < 1e-6);
  return out;
}

}  // namespace equikernel
