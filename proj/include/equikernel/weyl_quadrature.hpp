// Invariant integration over U(2) by the Weyl integration formula:
//   integral_G f = 1/2 * integral_T |t1 - t2|^2 [flag average of f(u t u*)] dt,
// with the torus discretized by an equispaced product rule (exact for
// trigonometric polynomials below the Nyquist degree) and the flag sphere by
// Gauss-Legendre in cos(phi) times an equispaced rule in the Hopf angle psi.
// Total mass is 1 (probability Haar measure).
#pragma once

#include <functional>

#include "equikernel/common.hpp"
#include "equikernel/linalg2.hpp"

namespace equikernel {

struct QuadNode {
  double x = 0.0;
  double w = 0.0;
};

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on the
// Legendre recurrence.  Exact for polynomials of degree <= 2n - 1.
inline std::vector<QuadNode> gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need n >= 1");
  std::vector<QuadNode> nodes(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // Chebyshev-based initial guess, then Newton on P_n.
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[static_cast<std::size_t>(i)].x = x;
    nodes[static_cast<std::size_t>(i)].w = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return nodes;
}

// Weyl-formula quadrature; the callback also receives the torus eigenvalues
// of g (handy for hoisting class functions such as characters).
inline cplx weyl_integrate_eigen(const std::function<cplx(const Mat2&, cplx, cplx)>& f,
                                 int n_torus, int n_flag) {
  if (n_torus < 2 || n_flag < 2)
    throw std::invalid_argument("weyl_integrate: grids must be >= 2");
  const int n_psi = std::max(2, n_flag / 2);

  // Flag frames u(phi, psi) and their adjoints, fixed across torus points.
  const std::vector<QuadNode> gl = gauss_legendre(n_flag);
  struct Frame {
    Mat2 u, u_adj;
    double w;  // normalized flag weight, sums to 1
  };
  std::vector<Frame> frames;
  frames.reserve(static_cast<std::size_t>(n_flag) * static_cast<std::size_t>(n_psi));
  for (const QuadNode& node : gl) {
    const double phi = std::acos(std::clamp(node.x, -1.0, 1.0));
    for (int m = 0; m < n_psi; ++m) {
      const double psi = 2.0 * pi * m / n_psi;
      Frame fr;
      fr.u = hopf_su2(phi, psi);
      fr.u_adj = fr.u.adjoint();
      fr.w = 0.5 * node.w / n_psi;
      frames.push_back(fr);
    }
  }

  // One work item per torus point; partial sums are reduced in index order so
  // the result does not depend on the worker count.
  const std::size_t n_items = static_cast<std::size_t>(n_torus) * n_torus;
  std::vector<cplx> partial(n_items, cplx(0.0, 0.0));
  parallel_for(n_items, [&](std::size_t item) {
    const int j1 = static_cast<int>(item) / n_torus;
    const int j2 = static_cast<int>(item) % n_torus;
    const cplx t1 = std::exp(iu * (2.0 * pi * j1 / n_torus));
    const cplx t2 = std::exp(iu * (2.0 * pi * j2 / n_torus));
    const double torus_w = 0.5 * std::norm(t1 - t2) / (static_cast<double>(n_torus) * n_torus);
    if (torus_w == 0.0) return;
    const Mat2 d = Mat2::diag(t1, t2);
    cplx acc(0.0, 0.0);
    for (const Frame& fr : frames) {
      const Mat2 g = fr.u * d * fr.u_adj;
      acc += fr.w * f(g, t1, t2);
    }
    partial[item] = torus_w * acc;
  });
  cplx total(0.0, 0.0);
  for (const cplx& v : partial) total += v;
  return total;
}

inline cplx weyl_integrate(const std::function<cplx(const Mat2&)>& f, int n_torus,
                           int n_flag) {
  return weyl_integrate_eigen([&f](const Mat2& g, cplx, cplx) { return f(g); }, n_torus,
                              n_flag);
}

}  // namespace equikernel
