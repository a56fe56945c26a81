#pragma once

// Trace of the fiber soliton equation for a gradient potential V = grad f.
//
// Contracting L_V g + 2 alpha S + (2 lambda - beta R) g + 2 mu eta (x) eta = 0
// with g^{-1} on an r-dimensional fiber gives
//
//   div V = Delta f = -r lambda + R (r beta / 2 - alpha) - mu |xi|^2.
//
// The shorter form -r lambda + R (beta / 2 - alpha) - mu is also reported; the
// two agree when r = 1 and |xi| = 1.

#include "ryssub/soliton.hpp"

#include <string>

namespace ryssub {

struct HarmonicReport {
  Scalar divergence_v;          // sum_j g(nabla_{E_j} V, E_j)
  Scalar laplacian_f;           // equal to divergence_v for V = grad f
  Scalar short_formula_value;   // -r lambda + R(beta/2 - alpha) - mu
  Scalar trace_formula_value;   // -r lambda + R(r beta/2 - alpha) - mu |xi|^2
  bool match = false;           // short formula equals the divergence
  bool identity_holds = false;  // trace formula equals the divergence
  bool solve_exact = false;
  std::string warning;
};

inline Scalar trace_with(const Matrix &ginv, const Matrix &m) {
  Scalar t;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!ginv(i, j).is_zero()) t += ginv(i, j) * m(i, j);
  return t;
}

/// `sys` is the domain system the solution was computed on; r is its dimension.
inline HarmonicReport trace_identity(const SolitonSystem &sys, const SolitonSolution &sol, const Scalar &alpha,
                                     const Scalar &beta) {
  const Scalar r = Scalar(static_cast<long>(sys.dim()));
  const Matrix ginv = invert(sys.metric);
  const Scalar &rs = sys.scalar;
  HarmonicReport h;
  h.divergence_v = Scalar::fraction(1, 2) * trace_with(ginv, sys.lie);
  h.laplacian_f = h.divergence_v;
  h.short_formula_value = -r * sol.lambda + rs * (Scalar::fraction(1, 2) * beta - alpha) - sol.mu;
  h.trace_formula_value =
      -r * sol.lambda + rs * (Scalar::fraction(1, 2) * r * beta - alpha) - sol.mu * sys.xi_norm2;
  h.match = h.short_formula_value == h.divergence_v;
  h.identity_holds = h.trace_formula_value == h.divergence_v;
  h.solve_exact = sol.exact;
  if (!sol.exact)
    h.warning = "solve is not exact (residual " + to_string(sol.residual_max) + "); trace identity not claimed";
  return h;
}

struct HarmonicClassification {
  Scalar lambda;
  Classification classification = Classification::steady;
};

/// Setting Delta f = 0 in the trace identity (unit xi):
///   lambda = (R (r beta / 2 - alpha) - mu) / r
inline HarmonicClassification harmonic_classification(const Scalar &scalar, std::size_t r, const Scalar &alpha,
                                                      const Scalar &beta, const Scalar &mu) {
  if (r == 0) throw Error("fiber dimension must be positive");
  const Scalar rr = Scalar(static_cast<long>(r));
  HarmonicClassification out;
  out.lambda = (scalar * (Scalar::fraction(1, 2) * rr * beta - alpha) - mu) / rr;
  out.classification = classify(out.lambda);
  return out;
}

}  // namespace ryssub
