// Moment geometry on the model spheres: moment map laws, locus
// classification, fundamental vector fields, the contact/Hamiltonian sign
// package, the normal field and its density invariant, boundary sampling,
// Heisenberg displacement, and the evaluation orthocomplement.
#include <catch2/catch_amalgamated.hpp>

#include "equikernel/moment_geometry.hpp"

using namespace equikernel;
using Catch::Approx;

namespace {

// exp(-s xi) for skew-Hermitian xi via its spectral data.
Mat2 group_exp(const Mat2& xi, double s) {
  const MomentDiag d = diagonalize_moment(xi);
  const Mat2 h = d.degenerate ? Mat2::identity() : d.h;
  const Mat2 phase = Mat2::diag(std::exp(-iu * s * d.lambda1), std::exp(-iu * s * d.lambda2));
  return h * phase * h.adjoint();
}

TangentVector scaled_vec(const TangentVector& v, cplx s) {
  TangentVector out = v;
  for (auto& c : out.v) c *= s;
  return out;
}

}  // namespace

TEST_CASE("sphere points: construction and sampling") {
  std::mt19937_64 rng(11);
  SECTION("make_point enforces unit norm and zeroes the inactive coordinate") {
    REQUIRE_THROWS_AS(make_point(Example::P3, {cplx(0.5, 0), 0, 0, 0, 0}), std::invalid_argument);
    const SpherePoint x = make_point(Example::P3, {cplx(1, 0), 0, 0, 0, 0});
    REQUIRE(x.c[4] == cplx(0.0, 0.0));
  }
  SECTION("random points are unit and fill all active coordinates statistically") {
    for (int i = 0; i < 50; ++i) {
      const SpherePoint x = random_sphere_point(Example::P4, rng);
      REQUIRE(x.norm() == Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("moment map: spectra, trace and determinant laws, equivariance") {
  std::mt19937_64 rng(12);

  SECTION("ordered spectrum and the trace law on both models") {
    for (int i = 0; i < 50; ++i) {
      const SpherePoint x3 = random_sphere_point(Example::P3, rng);
      const MomentValue m3 = moment_map(x3);
      REQUIRE(m3.lambda1 >= m3.lambda2);
      REQUIRE(m3.lambda2 >= -1e-14);
      REQUIRE(m3.lambda1 + m3.lambda2 == Approx(1.0).epsilon(1e-12));

      const SpherePoint x4 = random_sphere_point(Example::P4, rng);
      const MomentValue m4 = moment_map(x4);
      const double tr = m4.lambda1 + m4.lambda2;
      REQUIRE(tr >= 1.0 - 1e-12);
      REQUIRE(tr <= 2.0 + 1e-12);
    }
  }

  SECTION("equivariance: Phi(g.x) = g Phi(x) g^{-1} for 20 random pairs") {
    for (const Example ex : {Example::P3, Example::P4}) {
      for (int i = 0; i < 20; ++i) {
        const SpherePoint x = random_sphere_point(ex, rng);
        const Mat2 g = random_u2(rng);
        const Mat2 lhs = moment_map(apply_group(g, x)).matrix;
        const Mat2 rhs = g * moment_map(x).matrix * g.adjoint();
        REQUIRE((lhs - rhs).frobenius_norm() < 1e-10);
      }
    }
  }

  SECTION("determinant law on the three-fold model: lambda1*lambda2 = |Z /\\ W|^2") {
    for (int i = 0; i < 30; ++i) {
      const SpherePoint x = random_sphere_point(Example::P3, rng);
      const MomentValue m = moment_map(x);
      const double wedge = std::norm(x.c[0] * x.c[3] - x.c[1] * x.c[2]);
      REQUIRE(m.lambda1 * m.lambda2 == Approx(wedge).margin(1e-10));
    }
  }

  SECTION("torus moment is the diagonal of -i Phi") {
    for (int i = 0; i < 10; ++i) {
      const SpherePoint x = random_sphere_point(Example::P4, rng);
      const Mat2 p = moment_map(x).matrix * (-iu);
      const std::array<double, 2> pt = torus_moment(x);
      REQUIRE(pt[0] == Approx(p(0, 0).real()).margin(1e-12));
      REQUIRE(pt[1] == Approx(p(1, 1).real()).margin(1e-12));
    }
  }
}

TEST_CASE("locus classification: constructed profiles and invariances") {
  const Weight nu{2, 1};

  SECTION("moment ray profile (2/3, 1/3): boundary, torus locus, core") {
    const SpherePoint x = diagonal_profile_point(Example::P3, 2.0 / 3.0);
    const LocusClass c = classify(x, nu);
    REQUIRE(c.tag == LocusTag::Boundary_MGO);
    REQUIRE(c.torus_locus);
    REQUIRE(c.core);
    REQUIRE(c.t_value.has_value());
    REQUIRE(*c.t_value == Approx(0.0).margin(1e-12));
  }

  SECTION("balanced profile (1/2, 1/2): degenerate spectrum, outer class") {
    const LocusClass c = classify(diagonal_profile_point(Example::P3, 0.5), nu);
    REQUIRE(c.tag == LocusTag::Outer_A);
    REQUIRE(c.degenerate);
    REQUIRE(!c.t_value.has_value());
    REQUIRE(!c.core);
  }

  SECTION("profile (0.6, 0.4): spectral invariant exactly -1/3, outer class") {
    const LocusClass c = classify(diagonal_profile_point(Example::P3, 0.6), nu);
    REQUIRE(c.tag == LocusTag::Outer_A);
    REQUIRE(*c.t_value == Approx(-1.0 / 3.0).epsilon(1e-12));
  }

  SECTION("hand-placed inner point with t = 1/4 at profile (5/6, 1/6)") {
    const SpherePoint x = inner_profile_point(Example::P3, nu, 0.25);
    const MomentValue m = moment_map(x);
    REQUIRE(m.lambda1 == Approx(5.0 / 6.0).epsilon(1e-12));
    const LocusClass c = classify(x, nu);
    REQUIRE(c.tag == LocusTag::Inner_B);
    REQUIRE(*c.t_value == Approx(0.25).epsilon(1e-12));
  }

  SECTION("classification tags are invariant under the group action") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 20; ++i) {
      const SpherePoint x = random_sphere_point(Example::P3, rng);
      const Mat2 g = random_su2(rng);  // unit determinant keeps the spectrum
      REQUIRE(classify(x, nu).tag == classify(apply_group(g, x), nu).tag);
    }
  }

  SECTION("core points satisfy the set relations: core => boundary and torus locus") {
    for (SpherePoint& x : sample_boundary(nu, 10, 404)) {
      const LocusClass c = classify(x, nu);
      REQUIRE(c.tag == LocusTag::Boundary_MGO);
      if (c.core) REQUIRE(c.torus_locus);
    }
  }

  SECTION("lambda_nu consistency on the boundary locus") {
    for (SpherePoint& x : sample_boundary(nu, 10, 405)) {
      const MomentValue m = moment_map(x);
      REQUIRE(lambda_nu(x, nu) ==
              Approx((m.lambda1 + m.lambda2) / (nu.nu1 + nu.nu2)).epsilon(1e-9));
    }
  }

  SECTION("labels outside the cone are rejected") {
    const SpherePoint x = diagonal_profile_point(Example::P3, 0.7);
    REQUIRE_THROWS_AS(classify(x, {1, 0}, 1e-9), std::invalid_argument);
  }
}

TEST_CASE("fundamental vector fields and the contact/Hamiltonian package") {
  std::mt19937_64 rng(14);

  SECTION("the field is the derivative of the flow s -> exp(-s xi).x") {
    const double h = 1e-4;
    for (const Example ex : {Example::P3, Example::P4}) {
      for (int trial = 0; trial < 8; ++trial) {
        const SpherePoint x = random_sphere_point(ex, rng);
        for (const Mat2& xi : u2_basis()) {
          const TangentVector f = fundamental_vector_field(xi, x);
          const SpherePoint xp = apply_group(group_exp(xi, h), x);
          const SpherePoint xm = apply_group(group_exp(xi, -h), x);
          for (int i = 0; i < num_vars(ex); ++i) {
            const cplx fd = (xp.c[i] - xm.c[i]) / (2.0 * h);
            REQUIRE(std::abs(fd - f.v[i]) < 1e-7);
          }
        }
      }
    }
  }

  SECTION("contact pairing: alpha(xi_X) = -<Phi, xi> exactly") {
    for (const Example ex : {Example::P3, Example::P4}) {
      for (int trial = 0; trial < 20; ++trial) {
        const SpherePoint x = random_sphere_point(ex, rng);
        for (const Mat2& xi : u2_basis()) {
          const double lhs = contact_alpha(fundamental_vector_field(xi, x));
          const double rhs = -moment_pairing(moment_map(x).matrix, xi);
          REQUIRE(lhs == Approx(rhs).margin(1e-12));
        }
      }
    }
  }

  SECTION("the vertical generator: alpha(i x) = 1") {
    const SpherePoint x = random_sphere_point(Example::P3, rng);
    TangentVector vert{x, {}};
    for (int i = 0; i < 4; ++i) vert.v[i] = iu * x.c[i];
    REQUIRE(contact_alpha(vert) == Approx(1.0).epsilon(1e-12));
  }

  SECTION("Hamiltonian normalization: d<Phi,xi>(v) = 2 omega(xi_M, v) by central differences") {
    const double h = 1e-5;
    for (const Example ex : {Example::P3, Example::P4}) {
      for (int trial = 0; trial < 6; ++trial) {
        const SpherePoint x = random_sphere_point(ex, rng);
        const auto hb = horizontal_basis(x);
        for (const Mat2& xi : u2_basis()) {
          const TangentVector xi_m = horizontal_part(fundamental_vector_field(xi, x));
          for (const TangentVector& v : hb) {
            const auto pair_at = [&](double s) {
              const SpherePoint y = heisenberg_displace(x, 0.0, scaled_vec(v, s));
              return moment_pairing(moment_map(y).matrix, xi);
            };
            const double fd = (pair_at(h) - pair_at(-h)) / (2.0 * h);
            REQUIRE(fd == Approx(2.0 * metric_pair(xi_m, v).omega).margin(1e-6));
          }
        }
      }
    }
  }
}

TEST_CASE("metric pair: symmetry, J-compatibility, and gating") {
  std::mt19937_64 rng(15);
  const SpherePoint x = random_sphere_point(Example::P3, rng);
  const auto hb = horizontal_basis(x);
  REQUIRE(hb.size() == 3);
  const TangentVector v = hb[0], w = hb[1];

  SECTION("J-invariance and antisymmetry") {
    const MetricPair p = metric_pair(v, w);
    const MetricPair pj = metric_pair(scaled_vec(v, iu), scaled_vec(w, iu));
    REQUIRE(pj.g == Approx(p.g).margin(1e-14));
    REQUIRE(pj.omega == Approx(p.omega).margin(1e-14));
    REQUIRE(metric_pair(v, v).omega == Approx(0.0).margin(1e-14));
    REQUIRE(metric_pair(scaled_vec(v, iu), scaled_vec(v, iu)).g == Approx(1.0).epsilon(1e-12));
  }

  SECTION("compatibility: omega(v, w) = g(i v, w)") {
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 10; ++trial) {
      TangentVector a{x, {}}, b{x, {}};
      for (const TangentVector& e : hb) {
        const cplx ca(gauss(rng), gauss(rng)), cb(gauss(rng), gauss(rng));
        for (int i = 0; i < 5; ++i) {
          a.v[i] += ca * e.v[i];
          b.v[i] += cb * e.v[i];
        }
      }
      REQUIRE(metric_pair(a, b).omega ==
              Approx(metric_pair(scaled_vec(a, iu), b).g).margin(1e-12));
    }
  }

  SECTION("base mismatch and non-horizontal inputs are rejected") {
    const SpherePoint y = random_sphere_point(Example::P3, rng);
    REQUIRE_THROWS_AS(metric_pair(v, TangentVector{y, hb[1].v}), std::invalid_argument);
    TangentVector vert{x, {}};
    for (int i = 0; i < 4; ++i) vert.v[i] = iu * x.c[i];
    REQUIRE_THROWS_AS(metric_pair(v, vert), std::invalid_argument);
  }
}

TEST_CASE("normal field: closed form at the model point, tangency, orientation") {
  const Weight nu{2, 1};
  const SpherePoint x0 = diagonal_profile_point(Example::P3, 2.0 / 3.0);

  SECTION("value at the moment-ray intersection point") {
    const TangentVector ups = upsilon(x0, nu);
    REQUIRE(is_horizontal(ups));
    // i * rho_X with rho = i h diag(-nu2, nu1) h^{-1}, h = I here.
    const std::array<cplx, 5> expected{cplx(-std::sqrt(2.0 / 3.0), 0), 0, 0,
                                       cplx(2.0 * std::sqrt(1.0 / 3.0), 0), 0};
    for (int i = 0; i < 4; ++i) REQUIRE(std::abs(ups.v[i] - expected[i]) < 1e-9);
    REQUIRE(ups.norm() == Approx(std::sqrt(2.0)).epsilon(1e-12));
  }

  SECTION("nonvanishing at 50 sampled boundary points") {
    for (SpherePoint& x : sample_boundary(nu, 50, 406)) {
      REQUIRE(upsilon(x, nu).norm() > 0.1);
    }
  }

  SECTION("g-orthogonality to numerically sampled locus tangents") {
    std::mt19937_64 rng(16);
    std::vector<SpherePoint> pts{x0};
    for (SpherePoint& x : sample_boundary(nu, 2, 407)) pts.push_back(x);
    const double s = 1e-3;
    for (const SpherePoint& x : pts) {
      const TangentVector ups = upsilon(x, nu);
      const auto hb = horizontal_basis(x);
      for (int trial = 0; trial < 3; ++trial) {
        std::normal_distribution<double> gauss;
        TangentVector u{x, {}};
        for (const TangentVector& e : hb) {
          const cplx c(gauss(rng), gauss(rng));
          for (int i = 0; i < 5; ++i) u.v[i] += c * e.v[i];
        }
        const double un = u.norm();
        for (auto& c : u.v) c /= un;
        // Secant of the locus through deformations of nearby displaced points.
        const SpherePoint gp = deform_to_boundary(heisenberg_displace(x, 0.0, scaled_vec(u, s)), nu);
        const SpherePoint gm =
            deform_to_boundary(heisenberg_displace(x, 0.0, scaled_vec(u, -s)), nu);
        std::array<cplx, 5> wvec{};
        for (int i = 0; i < 5; ++i) wvec[i] = (gp.c[i] - gm.c[i]) / (2.0 * s);
        double wnorm = 0.0;
        for (const cplx& c : wvec) wnorm += std::norm(c);
        wnorm = std::sqrt(wnorm);
        if (wnorm < 1e-6) continue;  // the draw was essentially normal to the locus
        const double g_val = dot(x, ups.v, wvec).real();
        REQUIRE(std::abs(g_val) <= 1e-4 * ups.norm() * wnorm);
      }
    }
  }

  SECTION("orientation: the spectral invariant decreases along the normal field") {
    std::vector<SpherePoint> pts{x0};
    for (SpherePoint& x : sample_boundary(nu, 5, 408)) pts.push_back(x);
    for (const SpherePoint& x : pts) {
      TangentVector ups = upsilon(x, nu);
      const double n = ups.norm();
      for (auto& c : ups.v) c /= n;
      const double s = 1e-4;
      const MomentValue mp = moment_map(heisenberg_displace(x, 0.0, scaled_vec(ups, s)));
      const MomentValue mm = moment_map(heisenberg_displace(x, 0.0, scaled_vec(ups, -s)));
      const double dt = (t_invariant(mp.lambda1, mp.lambda2, nu) -
                         t_invariant(mm.lambda1, mm.lambda2, nu)) /
                        (2.0 * s);
      REQUIRE(dt < -0.1);  // consistently outer-pointing
    }
  }

  SECTION("off-locus points are rejected") {
    REQUIRE_THROWS_AS(upsilon(diagonal_profile_point(Example::P3, 0.6), nu), std::domain_error);
  }
}

TEST_CASE("density invariant: model value, homogeneity, positivity, gating") {
  const Weight nu{2, 1};
  const SpherePoint x0 = diagonal_profile_point(Example::P3, 2.0 / 3.0);

  SECTION("value sqrt(5/2) at the moment-ray intersection point") {
    REQUIRE(d_nu_invariant(x0, nu) == Approx(std::sqrt(2.5)).epsilon(1e-10));
  }

  SECTION("doubling the label leaves the invariant unchanged") {
    // Both the numerator ||nu|| and the denominator field scale linearly.
    REQUIRE(d_nu_invariant(x0, {4, 2}) == Approx(d_nu_invariant(x0, nu)).epsilon(1e-12));
  }

  SECTION("positive denominator at 50 sampled boundary points") {
    for (SpherePoint& x : sample_boundary(nu, 50, 409)) {
      const double v = d_nu_invariant(x, nu);
      REQUIRE(v > 0.0);
      REQUIRE(std::isfinite(v));
    }
  }

  SECTION("off-locus points are rejected") {
    REQUIRE_THROWS_AS(d_nu_invariant(diagonal_profile_point(Example::P3, 0.8), nu),
                      std::domain_error);
  }
}

TEST_CASE("boundary sampling and deformation") {
  const Weight nu{2, 1};

  SECTION("wedge ratio sqrt(nu1 nu2)/(nu1+nu2) within 1e-10, all classified boundary") {
    const double target = std::sqrt(2.0) / 3.0;
    for (SpherePoint& x : sample_boundary(nu, 25, 410)) {
      const double wedge = std::abs(x.c[0] * x.c[3] - x.c[1] * x.c[2]);
      REQUIRE(wedge == Approx(target).margin(1e-10));
      REQUIRE(classify(x, nu).tag == LocusTag::Boundary_MGO);
    }
  }

  SECTION("empty draw and determinism") {
    REQUIRE(sample_boundary(nu, 0, 1).empty());
    const auto a = sample_boundary(nu, 5, 42), b = sample_boundary(nu, 5, 42);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) REQUIRE(a[i].c[j] == b[i].c[j]);
  }

  SECTION("four-fold model points deform onto the locus as well") {
    for (SpherePoint& x : sample_boundary(nu, 5, 411, Example::P4)) {
      REQUIRE(classify(x, nu).tag == LocusTag::Boundary_MGO);
      REQUIRE(x.norm() == Approx(1.0).epsilon(1e-12));
    }
    // Regression: draws whose extra-coordinate share exceeds nu2/nu1 cannot
    // reach the locus along the singular profile and must be redrawn; this
    // seed used to produce such a draw at index 5.
    for (SpherePoint& x : sample_boundary(nu, 8, 2024, Example::P4)) {
      REQUIRE(std::norm(x.c[4]) < static_cast<double>(nu.nu2) / nu.nu1);
      REQUIRE(classify(x, nu).tag == LocusTag::Boundary_MGO);
    }
  }

  SECTION("deform_to_boundary lands within tolerance and is deterministic") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 10; ++i) {
      const SpherePoint x = random_sphere_point(Example::P3, rng);
      const SpherePoint b = deform_to_boundary(x, nu);
      const LocusClass c = classify(b, nu);
      REQUIRE(c.tag == LocusTag::Boundary_MGO);
      REQUIRE(std::abs(*c.t_value) <= 1e-11);
    }
  }
}

TEST_CASE("heisenberg displacement: identities, geodesics, gating") {
  std::mt19937_64 rng(18);
  const SpherePoint x = random_sphere_point(Example::P3, rng);
  const auto hb = horizontal_basis(x);

  SECTION("zero displacement is the identity; pure phase multiplies") {
    const SpherePoint same = heisenberg_displace(x, 0.0, TangentVector{x, {}});
    for (int i = 0; i < 4; ++i) REQUIRE(same.c[i] == x.c[i]);
    const double theta = 0.83;
    const SpherePoint rot = heisenberg_displace(x, theta, TangentVector{x, {}});
    for (int i = 0; i < 4; ++i)
      REQUIRE(std::abs(rot.c[i] - std::exp(iu * theta) * x.c[i]) < 1e-15);
  }

  SECTION("stays on the unit sphere and realizes geodesic distance ||v||") {
    for (const double r : {1e-2, 1e-3}) {
      const TangentVector v = scaled_vec(hb[0], r);
      const SpherePoint y = heisenberg_displace(x, 0.0, v);
      REQUIRE(y.norm() == Approx(1.0).epsilon(1e-14));
      const double dist = std::acos(std::clamp(dot(x, y.c, x.c).real(), -1.0, 1.0));
      REQUIRE(dist == Approx(r).margin(1e-8));
    }
  }

  SECTION("rejects long, vertical, or foreign vectors") {
    REQUIRE_THROWS_AS(heisenberg_displace(x, 0.0, scaled_vec(hb[0], 2.0)), std::invalid_argument);
    TangentVector vert{x, {}};
    for (int i = 0; i < 4; ++i) vert.v[i] = 0.3 * iu * x.c[i];
    REQUIRE_THROWS_AS(heisenberg_displace(x, 0.0, vert), std::invalid_argument);
    const SpherePoint y = random_sphere_point(Example::P3, rng);
    REQUIRE_THROWS_AS(heisenberg_displace(y, 0.0, hb[0]), std::invalid_argument);
  }
}

TEST_CASE("evaluation orthocomplement and local freeness") {
  std::mt19937_64 rng(19);

  SECTION("defining property and orthonormality wherever the complement is nontrivial") {
    const SpherePoint pole = make_point(Example::P3, {cplx(1, 0), 0, 0, 0, 0});
    const auto perp = perp_h_basis(pole);
    REQUIRE(perp.size() == 2);
    for (const TangentVector& v : perp) {
      REQUIRE(is_horizontal(v, 1e-9));
      for (const Mat2& xi : u2_basis()) {
        const TangentVector f = horizontal_part(fundamental_vector_field(xi, pole));
        // Hermitian orthogonality encodes both g- and omega-orthogonality.
        REQUIRE(std::abs(dot(pole, v.v, f.v)) < 1e-9);
      }
    }
    for (std::size_t a = 0; a < perp.size(); ++a)
      for (std::size_t b = 0; b < perp.size(); ++b) {
        const cplx ip = dot(pole, perp[a].v, perp[b].v);
        REQUIRE(std::abs(ip - (a == b ? cplx(1, 0) : cplx(0, 0))) < 1e-10);
      }
  }

  SECTION("dimension bookkeeping: complement size = horizontal dim - generator span rank") {
    for (const Example ex : {Example::P3, Example::P4}) {
      const int d = base_dim(ex);
      for (int i = 0; i < 10; ++i) {
        const SpherePoint x = random_sphere_point(ex, rng);
        REQUIRE(static_cast<int>(perp_h_basis(x).size()) == d - generator_span_rank(x));
      }
    }
  }

  SECTION("on the three-fold model the complement is trivial wherever the action is free") {
    for (int i = 0; i < 20; ++i) {
      const SpherePoint x = random_sphere_point(Example::P3, rng);
      const double wedge = std::abs(x.c[0] * x.c[3] - x.c[1] * x.c[2]);
      REQUIRE(wedge > 1e-6);  // random points are free with probability one
      REQUIRE(generator_span_rank(x) == 3);
      REQUIRE(perp_h_basis(x).empty());
      REQUIRE(generator_real_rank(x) == 4);
    }
  }

  SECTION("freeness characterization: real rank drops exactly where Z /\\ W = 0") {
    const SpherePoint pole = make_point(Example::P3, {cplx(1, 0), 0, 0, 0, 0});
    REQUIRE(generator_real_rank(pole) == 3);
    // Z and W parallel: (e1, e1)/sqrt(2) has vanishing wedge, rank below 4.
    const SpherePoint par = make_point(
        Example::P3, {cplx(std::sqrt(0.5), 0), 0, cplx(std::sqrt(0.5), 0), 0, 0});
    REQUIRE(std::abs(par.c[0] * par.c[3] - par.c[1] * par.c[2]) < 1e-15);
    REQUIRE(generator_real_rank(par) == 3);
  }

  SECTION("the extra-coordinate pole of the four-fold model: all generators vertical") {
    const SpherePoint tpole = make_point(Example::P4, {0, 0, 0, 0, cplx(1, 0)});
    REQUIRE(generator_span_rank(tpole) == 0);
    REQUIRE(perp_h_basis(tpole).size() == 4);
    const MomentValue m = moment_map(tpole);
    REQUIRE(m.degenerate);
    REQUIRE(m.lambda1 + m.lambda2 == Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("moment norm extremes used by the level window") {
  const MomentNormRange r3 = moment_norm_range(Example::P3);
  REQUIRE(r3.min_norm == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
  REQUIRE(r3.max_norm == Approx(1.0).epsilon(1e-6));
  const MomentNormRange r4 = moment_norm_range(Example::P4);
  REQUIRE(r4.min_norm == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
  REQUIRE(r4.max_norm == Approx(std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("locus gradient norm is positive and stable at boundary points") {
  const Weight nu{2, 1};
  const SpherePoint x0 = diagonal_profile_point(Example::P3, 2.0 / 3.0);
  const double g1 = locus_t_gradient_norm(x0, nu, 1e-5);
  const double g2 = locus_t_gradient_norm(x0, nu, 1e-4);
  REQUIRE(g1 > 0.5);
  REQUIRE(g1 == Approx(g2).epsilon(1e-4));  // Richardson-style step stability
}
