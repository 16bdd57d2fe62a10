// Exact construction of the scaled isotypical components inside the graded
// polynomial algebra, and evaluation of their reproducing kernels.
//
// Sections are built by applying the lowering operator F = z2 d/dz1 + w2 d/dw1
// to highest-weight vectors (powers of the 2x2 determinant times leading
// monomials), so all coefficients are integers and all squared norms are
// exact rationals times pi^d.  Floating point enters only at the final
// coordinate substitution.
#pragma once

#include <gmpxx.h>

#include <map>
#include <set>
#include <tuple>

#include "equikernel/moment_geometry.hpp"
#include "equikernel/weyl_quadrature.hpp"

namespace equikernel {

// ---------------------------------------------------------------------------
// Exact polynomials in z1, z2, w1, w2 [, t] with integer coefficients
// ---------------------------------------------------------------------------

// Exponent vectors are packed 12 bits per variable (total degree < 4096).
using MonoKey = std::uint64_t;

inline MonoKey pack_exponents(const std::array<int, 5>& e) {
  MonoKey k = 0;
  for (int i = 0; i < 5; ++i) {
    assert(e[i] >= 0 && e[i] < 4096);
    k |= static_cast<MonoKey>(e[i]) << (12 * i);
  }
  return k;
}

inline std::array<int, 5> unpack_exponents(MonoKey k) {
  std::array<int, 5> e{};
  for (int i = 0; i < 5; ++i) e[i] = static_cast<int>((k >> (12 * i)) & 0xfff);
  return e;
}

// Ordered map keeps every downstream artifact (JSON exports, compiled tables)
// byte-deterministic.
using Poly = std::map<MonoKey, mpz_class>;

inline void poly_add_term(Poly& p, MonoKey key, const mpz_class& c) {
  if (c == 0) return;
  auto [it, inserted] = p.emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) p.erase(it);
  }
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ka, ca] : a)
    for (const auto& [kb, cb] : b) poly_add_term(out, ka + kb, ca * cb);
  return out;
}

inline int poly_degree(const Poly& p) {
  int deg = -1;
  for (const auto& [k, c] : p) {
    const auto e = unpack_exponents(k);
    deg = std::max(deg, e[0] + e[1] + e[2] + e[3] + e[4]);
  }
  return deg;
}

// Applies c * x_src d/dx_dst summed over the two block pairs:
// lowering F: (src,dst) = (z2<-z1, w2<-w1); raising E the reverse.
inline Poly ladder_apply(const Poly& p, bool lowering) {
  // index pairs (from, to): F maps exponent e_from -> e_from - 1, e_to + 1.
  const std::array<std::pair<int, int>, 2> moves =
      lowering ? std::array<std::pair<int, int>, 2>{{{0, 1}, {2, 3}}}
               : std::array<std::pair<int, int>, 2>{{{1, 0}, {3, 2}}};
  Poly out;
  for (const auto& [k, c] : p) {
    const auto e = unpack_exponents(k);
    for (const auto& [from, to] : moves) {
      if (e[from] == 0) continue;
      auto e2 = e;
      e2[from] -= 1;
      e2[to] += 1;
      poly_add_term(out, pack_exponents(e2), c * e[from]);
    }
  }
  return out;
}

inline Poly lower_F(const Poly& p) { return ladder_apply(p, true); }
inline Poly raise_E(const Poly& p) { return ladder_apply(p, false); }

// Torus weight of a monomial: first coordinates of each block plus the
// det-weight variable count in slot 1, the rest in slot 2.
inline std::array<int, 2> monomial_torus_weight(MonoKey k) {
  const auto e = unpack_exponents(k);
  return {e[0] + e[2] + e[4], e[1] + e[3] + e[4]};
}

// ---------------------------------------------------------------------------
// Exact monomial norms on the sphere
// ---------------------------------------------------------------------------

inline const mpz_class& cached_factorial(int n) {
  static std::vector<mpz_class> table = [] {
    std::vector<mpz_class> t(601);
    t[0] = 1;
    for (int i = 1; i <= 600; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  assert(n >= 0 && n <= 600);
  return table[static_cast<std::size_t>(n)];
}

// Rational part of the monomial norm: integral of |x^alpha|^2 over the model
// sphere equals pi^d * alpha! / (d + |alpha|)!  (volume normalized to pi^d/d!).
inline mpq_class monomial_norm_sq(Example ex, const std::array<int, 5>& alpha) {
  const int d = base_dim(ex);
  int total = 0;
  mpz_class num = 1;
  for (int i = 0; i < num_vars(ex); ++i) {
    if (alpha[i] < 0) throw std::invalid_argument("monomial_norm_sq: negative exponent");
    num *= cached_factorial(alpha[i]);
    total += alpha[i];
  }
  mpq_class q(num, cached_factorial(d + total));
  q.canonicalize();
  return q;
}

inline double pi_pow_d(Example ex) {
  return base_dim(ex) == 3 ? pi * pi * pi : pi * pi * pi * pi;
}

inline double volume_of_model(Example ex) {
  // vol(X) = pi^d / d!
  return pi_pow_d(ex) / (base_dim(ex) == 3 ? 6.0 : 24.0);
}

// ---------------------------------------------------------------------------
// Highest-weight vectors and the isotype basis
// ---------------------------------------------------------------------------

// (z1 w2 - z2 w1)^a expanded by the binomial theorem.
inline Poly det_power(int a) {
  Poly out;
  for (int m = 0; m <= a; ++m) {
    mpz_class c;
    mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(a), static_cast<unsigned long>(m));
    if (m & 1) c = -c;
    // (z1 w2)^{a-m} (z2 w1)^m
    poly_add_term(out, pack_exponents({a - m, m, m, a - m, 0}), c);
  }
  return out;
}

struct HwBlock {
  int p = 0;  // degree in the z-block
  int q = 0;  // degree in the w-block
  int r = 0;  // degree in the det-weight variable (second model only)
};

// Highest-weight vector det^a z1^{p-a} w1^{q-a} t^r; raising-operator
// annihilation is verified on construction.
inline Poly highest_weight_vector(Example ex, HwBlock block, int a) {
  if (a < 0 || a > std::min(block.p, block.q))
    throw std::invalid_argument("highest_weight_vector: need 0 <= a <= min(p, q)");
  if (block.r < 0 || (ex == Example::P3 && block.r != 0))
    throw std::invalid_argument("highest_weight_vector: invalid det-weight degree");
  Poly out = det_power(a);
  Poly shift;
  poly_add_term(shift, pack_exponents({block.p - a, 0, block.q - a, 0, block.r}), mpz_class(1));
  out = poly_mul(out, shift);
  if (!raise_E(out).empty())
    throw std::logic_error("highest_weight_vector: raising operator does not annihilate");
  return out;
}

struct Section {
  Poly poly;
  mpq_class norm_sq;  // rational part; the transcendental factor is pi^d
  int level = 0;
  int z_degree = 0;  // block multidegree, preserved by the ladder operators
  int w_degree = 0;
  int t_degree = 0;
  std::array<int, 2> torus_weight{};
};

struct IsotypeBasis {
  Example ex = Example::P3;
  int k = 1;
  Weight nu;
  int level_min = 0;
  int level_max = 0;
  std::vector<Section> sections;
};

namespace detail {

inline mpq_class section_norm_sq(Example ex, const Poly& p, int level) {
  // Common denominator (d + level)! over the whole section.
  mpz_class acc = 0;
  for (const auto& [k, c] : p) {
    const auto e = unpack_exponents(k);
    mpz_class term = c * c;
    for (int i = 0; i < 5; ++i) term *= cached_factorial(e[i]);
    acc += term;
  }
  mpq_class q(acc, cached_factorial(base_dim(ex) + level));
  q.canonicalize();
  return q;
}

inline std::array<int, 2> section_weight_checked(const Poly& p) {
  auto it = p.begin();
  const std::array<int, 2> w = monomial_torus_weight(it->first);
  for (; it != p.end(); ++it)
    if (monomial_torus_weight(it->first) != w)
      throw std::logic_error("section is not a torus weight vector");
  return w;
}

}  // namespace detail

// Exact basis of the isotypical component with label k*nu: for each
// contributing block the full lowering ladder F^j, j = 0 .. k(nu1-nu2)-1.
// Pairwise orthogonality holds because any two sections differ in block
// multidegree or torus weight; this is asserted, not assumed.
inline IsotypeBasis isotype_basis(Example ex, int k, Weight nu, long long cap = 100000) {
  if (!(nu.nu1 > nu.nu2 && nu.nu2 >= 1))
    throw std::invalid_argument("isotype_basis: label must satisfy nu1 > nu2 >= 1");
  if (k < 1) throw std::invalid_argument("isotype_basis: k must be >= 1");
  const int ladder = k * (nu.nu1 - nu.nu2);  // irrep dimension = ladder length
  const int l_top = k * (nu.nu1 + nu.nu2) - 1;

  // Enumerate contributing blocks: (level, p, q, r, a).
  struct BlockSpec {
    HwBlock block;
    int a = 0;
    int level = 0;
  };
  std::vector<BlockSpec> blocks;
  if (ex == Example::P3) {
    const int a = k * nu.nu2;
    for (int h = k * nu.nu2; h <= k * nu.nu1 - 1; ++h)
      blocks.push_back({{h, l_top - h, 0}, a, l_top});
  } else {
    for (int r = 0; r <= k * nu.nu2; ++r) {
      const int a = k * nu.nu2 - r;
      const int pq = k * (nu.nu1 + nu.nu2) - 1 - 2 * r;
      for (int p = a; p <= pq - a; ++p)
        blocks.push_back({{p, pq - p, r}, a, pq + r});
    }
  }
  const long long count = static_cast<long long>(blocks.size()) * ladder;
  if (count > cap)
    throw std::length_error("isotype_basis: dimension " + std::to_string(count) +
                            " exceeds cap " + std::to_string(cap));

  IsotypeBasis out;
  out.ex = ex;
  out.k = k;
  out.nu = nu;
  out.sections.reserve(static_cast<std::size_t>(count));
  out.level_min = l_top;
  out.level_max = 0;

  std::set<std::tuple<int, int, int, int>> identity;  // (zdeg, wdeg, tdeg, weight1)
  for (const BlockSpec& bs : blocks) {
    Poly current = highest_weight_vector(ex, bs.block, bs.a);
    for (int j = 0; j < ladder; ++j) {
      if (j > 0) current = lower_F(current);
      Section s;
      s.poly = current;
      s.level = bs.level;
      s.z_degree = bs.block.p;
      s.w_degree = bs.block.q;
      s.t_degree = bs.block.r;
      s.torus_weight = detail::section_weight_checked(current);
      s.norm_sq = detail::section_norm_sq(ex, current, bs.level);
      if (!(s.norm_sq > 0)) throw std::logic_error("isotype_basis: non-positive norm");
      if (!identity.insert({s.z_degree, s.w_degree, s.t_degree, s.torus_weight[0]}).second)
        throw std::logic_error("isotype_basis: orthogonality certificate failed");
      out.level_min = std::min(out.level_min, bs.level);
      out.level_max = std::max(out.level_max, bs.level);
      out.sections.push_back(std::move(s));
    }
  }
  return out;
}

// Exact inner product of two sections (rational part; zero off-diagonal).
inline mpq_class exact_inner(Example ex, const Section& a, const Section& b) {
  if (a.level != b.level) return mpq_class(0);
  mpz_class acc = 0;
  for (const auto& [k, c] : a.poly) {
    auto it = b.poly.find(k);
    if (it == b.poly.end()) continue;
    mpz_class term = c * it->second;
    const auto e = unpack_exponents(k);
    for (int i = 0; i < 5; ++i) term *= cached_factorial(e[i]);
    acc += term;
  }
  mpq_class q(acc, cached_factorial(base_dim(ex) + a.level));
  q.canonicalize();
  return q;
}

// ---------------------------------------------------------------------------
// Compiled (floating-point) form for kernel evaluation
// ---------------------------------------------------------------------------

struct CompiledSection {
  std::vector<std::pair<MonoKey, double>> terms;
  double inv_norm = 0.0;  // 1 / (norm_sq * pi^d)
  int level = 0;
};

struct CompiledBasis {
  Example ex = Example::P3;
  int k = 1;
  Weight nu;
  int level_min = 0;
  int level_max = 0;
  std::array<int, 5> max_exp{};
  std::vector<CompiledSection> sections;

  // Values of all sections at a point, sharing per-variable power tables.
  void evaluate_sections(const SpherePoint& x, std::vector<cplx>& out) const {
    std::array<std::vector<cplx>, 5> pows;
    for (int i = 0; i < 5; ++i) {
      pows[i].resize(static_cast<std::size_t>(max_exp[i]) + 1);
      pows[i][0] = cplx(1.0, 0.0);
      for (int e = 1; e <= max_exp[i]; ++e) pows[i][static_cast<std::size_t>(e)] = pows[i][static_cast<std::size_t>(e - 1)] * x.c[i];
    }
    out.assign(sections.size(), cplx(0.0, 0.0));
    for (std::size_t s = 0; s < sections.size(); ++s) {
      cplx acc(0.0, 0.0);
      for (const auto& [key, coeff] : sections[s].terms) {
        const auto e = unpack_exponents(key);
        acc += coeff * pows[0][static_cast<std::size_t>(e[0])] * pows[1][static_cast<std::size_t>(e[1])] *
               pows[2][static_cast<std::size_t>(e[2])] * pows[3][static_cast<std::size_t>(e[3])] *
               pows[4][static_cast<std::size_t>(e[4])];
      }
      out[s] = acc;
    }
  }

  cplx kernel(const SpherePoint& x, const SpherePoint& y) const {
    std::vector<cplx> vx, vy;
    evaluate_sections(x, vx);
    evaluate_sections(y, vy);
    cplx acc(0.0, 0.0);
    for (std::size_t s = 0; s < sections.size(); ++s)
      acc += vx[s] * std::conj(vy[s]) * sections[s].inv_norm;
    return acc;
  }

  double kernel_diag(const SpherePoint& x) const {
    std::vector<cplx> vx;
    evaluate_sections(x, vx);
    double acc = 0.0;
    for (std::size_t s = 0; s < sections.size(); ++s)
      acc += std::norm(vx[s]) * sections[s].inv_norm;
    return acc;
  }

  long long dim() const { return static_cast<long long>(sections.size()); }
};

inline CompiledBasis compile_basis(const IsotypeBasis& basis) {
  CompiledBasis out;
  out.ex = basis.ex;
  out.k = basis.k;
  out.nu = basis.nu;
  out.level_min = basis.level_min;
  out.level_max = basis.level_max;
  out.sections.reserve(basis.sections.size());
  const double pd = pi_pow_d(basis.ex);
  for (const Section& s : basis.sections) {
    CompiledSection cs;
    cs.level = s.level;
    cs.inv_norm = 1.0 / (s.norm_sq.get_d() * pd);
    cs.terms.reserve(s.poly.size());
    for (const auto& [key, c] : s.poly) {
      cs.terms.emplace_back(key, c.get_d());
      const auto e = unpack_exponents(key);
      for (int i = 0; i < 5; ++i) out.max_exp[i] = std::max(out.max_exp[i], e[i]);
    }
    out.sections.push_back(std::move(cs));
  }
  return out;
}

inline CompiledBasis build_kernel_basis(Example ex, int k, Weight nu, long long cap = 2000000) {
  return compile_basis(isotype_basis(ex, k, nu, cap));
}

// ---------------------------------------------------------------------------
// Level kernels and the quadrature projector oracle
// ---------------------------------------------------------------------------

// Reproducing kernel of the full degree-l component:
// Pi_l(x, y) = (d!/pi^d) binom(l+d, d) <x, y>^l.
inline cplx level_kernel(Example ex, int l, const SpherePoint& x, const SpherePoint& y) {
  if (l < 0) throw std::invalid_argument("level_kernel: negative level");
  const int d = base_dim(ex);
  const double dfact = (d == 3) ? 6.0 : 24.0;
  const cplx ip = dot(x, x.c, y.c);
  return (dfact / pi_pow_d(ex)) * binomial(l + d, d) * ipow(ip, l);
}

// Level window [L2(k), L1(k)] outside which the scaled isotype cannot occur,
// from the moment-norm extremes a_G (min) and A_G (max):
//   L1 = ceil((||nu||/a_G) k + 1/a_G),  L2 = floor((||nu||/A_G) k - 1/A_G).
struct LevelWindow {
  int l_min = 0;
  int l_max = 0;
};

inline LevelWindow level_window(Example ex, int k, Weight nu) {
  static const MomentNormRange range_p3 = moment_norm_range(Example::P3);
  static const MomentNormRange range_p4 = moment_norm_range(Example::P4);
  const MomentNormRange& r = (ex == Example::P3) ? range_p3 : range_p4;
  const double n = weight_norm(nu);
  LevelWindow w;
  w.l_max = static_cast<int>(std::ceil((n / r.min_norm) * k + 1.0 / r.min_norm));
  w.l_min = std::max(0, static_cast<int>(std::floor((n / r.max_norm) * k - 1.0 / r.max_norm)));
  if (w.l_min > w.l_max) throw std::runtime_error("level_window: empty truncation range");
  return w;
}

// Independent computation of the isotype kernel as a group average:
//   d_{k nu} * integral_G chi_{k nu}(g) Pi_window(g^{-1} x, y) dg.
// The weight is the character at g itself (not its conjugate): under the
// pullback action on functions the sections of the scaled label transform by
// the conjugated representation, so this weight isolates the component.
// Validated against the exact kernel (see the projector-equality tests).
inline cplx quadrature_kernel(Example ex, int k, Weight nu, const SpherePoint& x,
                              const SpherePoint& y, int n_torus, int n_flag) {
  const LevelWindow w = level_window(ex, k, nu);
  const Weight knu = scaled(nu, k);
  const int d = base_dim(ex);
  const double dfact = (d == 3) ? 6.0 : 24.0;
  const double front = dfact / pi_pow_d(ex);
  std::vector<double> binoms(static_cast<std::size_t>(w.l_max - w.l_min) + 1);
  for (int l = w.l_min; l <= w.l_max; ++l)
    binoms[static_cast<std::size_t>(l - w.l_min)] = binomial(l + d, d);

  const cplx value = weyl_integrate_eigen(
      [&](const Mat2& g, cplx t1, cplx t2) {
        const SpherePoint gx = apply_group(g.adjoint(), x);
        const cplx ip = dot(gx, gx.c, y.c);
        // sum over the level window of Pi_l(g^{-1}x, y)
        cplx pw = ipow(ip, w.l_min);
        cplx acc(0.0, 0.0);
        for (int l = w.l_min; l <= w.l_max; ++l) {
          acc += binoms[static_cast<std::size_t>(l - w.l_min)] * pw;
          pw *= ip;
        }
        return character(knu, t1, t2) * acc * front;
      },
      n_torus, n_flag);
  return static_cast<double>(irrep_dim(knu)) * value;
}

// Monte Carlo trace of the diagonal: vol(X) * E[Pi(x,x)] estimates the
// complex dimension of the isotype.
inline MeanStdErr dim_by_trace(const CompiledBasis& basis, int n_mc, std::uint64_t seed) {
  if (n_mc < 2) throw std::invalid_argument("dim_by_trace: need at least 2 samples");
  std::vector<double> vals(static_cast<std::size_t>(n_mc));
  parallel_for(static_cast<std::size_t>(n_mc), [&](std::size_t i) {
    std::mt19937_64 rng = item_rng(seed, i);
    const SpherePoint x = random_sphere_point(basis.ex, rng);
    vals[i] = basis.kernel_diag(x);
  });
  MeanStdErr ms = mean_std_err(vals);
  const double vol = volume_of_model(basis.ex);
  return {ms.mean * vol, ms.std_error * vol};
}

}  // namespace equikernel
