// Representation theory of U(2) in shifted highest-weight labels: characters,
// tensor-product decomposition, level-by-level branching of the polynomial
// algebra on the ambient space, and dimensions of scaled isotypes.
//
// Label convention: an irreducible representation is written nu = (nu1, nu2)
// with nu1 > nu2 >= 0 and has dimension nu1 - nu2.  In this convention the
// p-th symmetric power of the defining representation is (p+1, 0) and the
// determinant character is (2, 1); tensoring with det shifts both entries
// by one.
#pragma once

#include <map>
#include <vector>

#include "equikernel/common.hpp"
#include "equikernel/linalg2.hpp"

namespace equikernel {

struct Weight {
  int nu1 = 0;
  int nu2 = 0;
  auto operator<=>(const Weight&) const = default;
};

inline int irrep_dim(Weight nu) { return nu.nu1 - nu.nu2; }
inline bool is_dominant(Weight nu) { return nu.nu1 > nu.nu2 && nu.nu2 >= 0; }
inline Weight scaled(Weight nu, int k) { return {k * nu.nu1, k * nu.nu2}; }
inline double weight_norm(Weight nu) { return std::hypot<double>(nu.nu1, nu.nu2); }

inline std::string weight_str(Weight nu) {
  return "(" + std::to_string(nu.nu1) + "," + std::to_string(nu.nu2) + ")";
}

// z^n for non-negative n by binary powering (deterministic, no log branch).
inline cplx ipow(cplx z, int n) {
  assert(n >= 0);
  cplx out(1.0, 0.0);
  while (n > 0) {
    if (n & 1) out *= z;
    z *= z;
    n >>= 1;
  }
  return out;
}

// Character of the label nu at a torus element with eigenvalues (t1, t2):
//   chi_nu(t) = (t1^nu1 t2^nu2 - t1^nu2 t2^nu1) / (t1 - t2).
// Near the diagonal the ratio degenerates; the equivalent geometric sum
//   (t1 t2)^nu2 * sum_{j<nu1-nu2} t1^j t2^{nu1-nu2-1-j}
// is used instead.  Both expressions are symmetric in (t1, t2).
inline cplx character(Weight nu, cplx t1, cplx t2) {
  assert(is_dominant(nu));
  if (std::abs(t1 - t2) < 1e-9) {
    const int d = nu.nu1 - nu.nu2;
    cplx sum(0.0, 0.0);
    for (int j = 0; j < d; ++j) sum += ipow(t1, j) * ipow(t2, d - 1 - j);
    return ipow(t1 * t2, nu.nu2) * sum;
  }
  return (ipow(t1, nu.nu1) * ipow(t2, nu.nu2) - ipow(t1, nu.nu2) * ipow(t2, nu.nu1)) /
         (t1 - t2);
}

// Character evaluated at a group element via its eigenvalue pair.  The
// eigenvalues solve lambda^2 - tr(g) lambda + det(g) = 0; the square-root
// branch is irrelevant because characters are symmetric in the pair.
inline cplx character_at(Weight nu, const Mat2& g) {
  const cplx tr = g.trace();
  const cplx root = std::sqrt(tr * tr - 4.0 * g.det());
  return character(nu, 0.5 * (tr + root), 0.5 * (tr - root));
}

// Decomposition of Sym^p (x) Sym^q of the defining representation.  The sum
// is multiplicity-free: one copy of det^a (x) Sym^{p+q-2a} for each
// a = 0..min(p,q), i.e. labels (p+q+1-a, a).
inline std::vector<Weight> clebsch_gordan(int p, int q) {
  if (p < 0 || q < 0) throw std::invalid_argument("clebsch_gordan: negative degree");
  std::vector<Weight> out;
  out.reserve(static_cast<std::size_t>(std::min(p, q)) + 1);
  for (int a = 0; a <= std::min(p, q); ++a) out.push_back({p + q + 1 - a, a});
  return out;
}

// Multiset of irreducible labels (with multiplicities) in the space of
// homogeneous polynomials of the given total degree on the ambient space.
using BranchingTable = std::map<Weight, long long>;

inline BranchingTable branch_level(Example ex, int level) {
  if (level < 0) throw std::invalid_argument("branch_level: negative level");
  BranchingTable out;
  // Degree-m polynomials in the two vector blocks decompose through pairs
  // (p, q) with p + q = m; the extra determinant-weight variable in the
  // second example shifts every label diagonally by its exponent r.
  const int r_max = (ex == Example::P4) ? level : 0;
  for (int r = 0; r <= r_max; ++r) {
    const int m = level - r;
    for (int p = 0; p <= m; ++p) {
      const int q = m - p;
      for (int a = 0; a <= std::min(p, q); ++a) out[{m + 1 - a + r, a + r}] += 1;
    }
  }
  return out;
}

// Dimension data of the isotypical component with label k*nu inside the full
// polynomial algebra: per_level maps a degree to the number of irreducible
// copies it contributes; total is the complex dimension (copies times the
// irrep dimension, summed over levels).
struct IsotypeDimensions {
  long long total = 0;
  std::map<int, long long> per_level;
};

inline IsotypeDimensions isotype_dimension(Example ex, Weight nu, int k) {
  if (!(nu.nu1 > nu.nu2 && nu.nu2 >= 1))
    throw std::invalid_argument("isotype_dimension: label must satisfy nu1 > nu2 >= 1");
  if (k < 1) throw std::invalid_argument("isotype_dimension: k must be >= 1");
  const Weight target = scaled(nu, k);
  // A label (K1, K2) can only occur at degrees <= K1 + K2 - 1, so a finite
  // scan over the branching tables is exhaustive.
  const int level_max = target.nu1 + target.nu2 - 1;
  IsotypeDimensions out;
  for (int l = 0; l <= level_max; ++l) {
    BranchingTable table = branch_level(ex, l);
    auto it = table.find(target);
    if (it != table.end() && it->second > 0) {
      out.per_level[l] = it->second;
      out.total += it->second * irrep_dim(target);
    }
  }
  return out;
}

}  // namespace equikernel
