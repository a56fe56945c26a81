#pragma once

// The eta-Ricci-Yamabe soliton equation of type (alpha, beta)
//
//   L_V g + 2 alpha S + (2 lambda - beta R) g + 2 mu eta (x) eta = 0,
//   eta(X) = g(X, xi),
//
// posed on the total space, a fiber, or the base of a split, and solved exactly
// for the constants (lambda, mu).

#include "ryssub/submersion.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ryssub {

enum class Domain { total, fiber, horizontal };

inline std::string to_string(Domain d) {
  switch (d) {
    case Domain::total: return "total";
    case Domain::fiber: return "fiber";
    case Domain::horizontal: return "horizontal";
  }
  return "total";
}

inline Domain parse_domain(const std::string &s) {
  if (s == "total") return Domain::total;
  if (s == "fiber") return Domain::fiber;
  if (s == "horizontal") return Domain::horizontal;
  throw Error("unknown domain '" + s + "' (expected total, fiber or horizontal)");
}

enum class Classification { shrinking, expanding, steady };

inline std::string to_string(Classification c) {
  switch (c) {
    case Classification::shrinking: return "shrinking";
    case Classification::expanding: return "expanding";
    case Classification::steady: return "steady";
  }
  return "steady";
}

/// lambda > 0 shrinking, lambda < 0 expanding, lambda = 0 steady.
inline Classification classify(const Scalar &lambda) {
  const int s = lambda.sign();
  return s > 0 ? Classification::shrinking : (s < 0 ? Classification::expanding : Classification::steady);
}

struct SolitonParams {
  Scalar alpha;
  Scalar beta;
  FrameVectorField potential;  // ambient components
  FrameVectorField xi;         // ambient components
  Domain domain = Domain::total;
};

/// Everything the equation needs on one domain, in domain-local indices.
struct SolitonSystem {
  Domain domain = Domain::total;
  std::vector<std::size_t> frame;  // local -> ambient index
  Matrix metric;
  Matrix ricci;
  Scalar scalar;
  Matrix lie;  // L_V g on the domain
  std::vector<Scalar> eta;
  Scalar xi_norm2;

  std::size_t dim() const noexcept { return metric.rows(); }
};

/// Claimed Ricci/scalar values that replace the computed ones in claimed-tensor mode.
struct ClaimedTensors {
  std::optional<Matrix> ricci;
  std::optional<Scalar> scalar;
};

namespace detail {

inline void require_support(const FrameVectorField &v, const std::vector<std::size_t> &block, const char *what,
                            Domain d) {
  if (!v.supported_on(block))
    throw Error(std::string(what) + " must lie in the " + (d == Domain::fiber ? "vertical" : "horizontal") +
                " block for domain " + to_string(d));
}

}  // namespace detail

/// Builds the domain system: geometry from the engine (or claims), L_V g with the
/// domain connection, and eta = G xi.
inline SolitonSystem build_system(const FrameManifold &m, const std::optional<SubmersionSplit> &split,
                                  const SolitonParams &p, const ClaimedTensors &claimed = {}) {
  if (p.potential.size() != m.dim() || p.xi.size() != m.dim())
    throw Error("potential and xi must have " + std::to_string(m.dim()) + " components");
  if (p.xi.is_zero()) throw Error("xi must be nonzero");
  const CurvaturePackage total = curvature(m);
  CurvaturePackage geom;
  switch (p.domain) {
    case Domain::total: geom = total; break;
    case Domain::fiber:
      if (!split) throw Error("domain fiber requires a split");
      detail::require_support(p.potential, split->vertical(), "potential", p.domain);
      detail::require_support(p.xi, split->vertical(), "xi", p.domain);
      geom = fiber_geometry(m, total.gamma, *split);
      break;
    case Domain::horizontal: {
      if (!split) throw Error("domain horizontal requires a split");
      detail::require_support(p.potential, split->horizontal(), "potential", p.domain);
      detail::require_support(p.xi, split->horizontal(), "xi", p.domain);
      const ONeillTensors t = oneill_tensors(m, total.gamma, *split);
      geom = base_geometry(m, total, t, *split);
      break;
    }
  }
  SolitonSystem s;
  s.domain = p.domain;
  s.frame = geom.frame;
  s.metric = geom.metric;
  s.ricci = geom.ricci;
  s.scalar = geom.scalar;
  const FrameVectorField v = p.potential.restrict_to(geom.frame);
  const FrameVectorField xi = p.xi.restrict_to(geom.frame);
  s.lie = lie_derivative_metric(geom.metric, geom.gamma, v);
  s.eta = mat_vec(geom.metric, xi.coeffs);
  s.xi_norm2 = bilinear(geom.metric, xi.coeffs, xi.coeffs);
  if (claimed.ricci) {
    if (claimed.ricci->rows() != s.dim() || claimed.ricci->cols() != s.dim())
      throw Error("claimed Ricci matrix does not match the domain dimension " + std::to_string(s.dim()));
    s.ricci = *claimed.ricci;
  }
  if (claimed.scalar) s.scalar = *claimed.scalar;
  return s;
}

inline Matrix eta_outer(const std::vector<Scalar> &eta) {
  Matrix m(eta.size(), eta.size());
  for (std::size_t i = 0; i < eta.size(); ++i)
    for (std::size_t j = 0; j < eta.size(); ++j) m(i, j) = eta[i] * eta[j];
  return m;
}

/// M = L_V g + 2 alpha S + (2 lambda - beta R) G + 2 mu eta eta^T
inline Matrix soliton_residual(const SolitonSystem &s, const Scalar &alpha, const Scalar &beta, const Scalar &lambda,
                               const Scalar &mu) {
  Matrix out = s.lie;
  out += Scalar(2) * alpha * s.ricci;
  out += (Scalar(2) * lambda - beta * s.scalar) * s.metric;
  out += Scalar(2) * mu * eta_outer(s.eta);
  return out;
}

/// Result of fitting target = x P + y Q over the entries i <= j.
struct TwoTermFit {
  Scalar x;
  Scalar y;
  bool exact = false;
  bool y_fixed = false;  // P and Q are dependent; y set to 0 and only x fitted
  Scalar residual_max;
};

/// Exact solution when one exists, otherwise the least-squares solution from
/// the normal equations over Q(sqrt2).
inline TwoTermFit fit_two_terms(const Matrix &p, const Matrix &q, const Matrix &target, bool allow_dependent) {
  const std::size_t n = p.rows();
  Scalar pp, pq, qq, pt, qt;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      pp += p(i, j) * p(i, j);
      pq += p(i, j) * q(i, j);
      qq += q(i, j) * q(i, j);
      pt += p(i, j) * target(i, j);
      qt += q(i, j) * target(i, j);
    }
  TwoTermFit fit;
  const Scalar det = pp * qq - pq * pq;
  if (!det.is_zero()) {
    fit.x = (pt * qq - qt * pq) / det;
    fit.y = (pp * qt - pq * pt) / det;
  } else {
    if (!allow_dependent)
      throw Error("the eta (x) eta term is proportional to the metric; mu is not identifiable");
    if (pp.is_zero()) throw Error("metric term vanishes; system is degenerate");
    fit.y_fixed = true;
    fit.x = pt / pp;
  }
  Matrix res = fit.x * p + fit.y * q - target;
  fit.residual_max = res.max_abs();
  fit.exact = res.is_zero();
  return fit;
}

struct SolitonSolution {
  Scalar lambda;
  Scalar mu;
  Scalar residual_max;
  Classification classification = Classification::steady;
  bool exact = false;
  bool mu_by_convention = false;  // one-dimensional domain: mu fixed to 0
  std::string special_type;
};

inline std::string special_type(const Scalar &alpha, const Scalar &beta, const Scalar &mu) {
  if (alpha == Scalar(1) && beta.is_zero()) return mu.is_zero() ? "Ricci soliton" : "eta-Ricci soliton";
  if (alpha.is_zero() && beta == Scalar(1)) return mu.is_zero() ? "quasi-Yamabe soliton" : "eta-Yamabe soliton";
  if (alpha == Scalar(1) && beta == Scalar::fraction(1, 2)) return "Einstein soliton";
  return "eta-Ricci-Yamabe soliton";
}

inline SolitonSolution soliton_solve(const SolitonSystem &s, const Scalar &alpha, const Scalar &beta) {
  // M = K + 2 lambda G + 2 mu eta eta^T with K independent of (lambda, mu).
  Matrix k = s.lie;
  k += Scalar(2) * alpha * s.ricci;
  k -= beta * s.scalar * s.metric;
  Matrix neg_k = Scalar(-1) * k;
  const TwoTermFit fit = fit_two_terms(Scalar(2) * s.metric, Scalar(2) * eta_outer(s.eta), neg_k, s.dim() == 1);
  SolitonSolution sol;
  sol.lambda = fit.x;
  sol.mu = fit.y;
  sol.mu_by_convention = fit.y_fixed;
  sol.exact = fit.exact;
  sol.residual_max = fit.residual_max;
  sol.classification = classify(sol.lambda);
  sol.special_type = special_type(alpha, beta, sol.mu);
  return sol;
}

struct AffineForm {
  Scalar c0;
  Scalar c_alpha;
  Scalar c_beta;

  Scalar at(const Scalar &alpha, const Scalar &beta) const { return c0 + c_alpha * alpha + c_beta * beta; }
  friend bool operator==(const AffineForm &, const AffineForm &) = default;
};

inline std::string to_string(const AffineForm &f) {
  std::string out = to_string(f.c0);
  auto term = [&](const Scalar &c, const char *name) {
    if (c.is_zero()) return;
    const bool simple = c.is_rational() || c.rational_part() == 0;
    const std::string lit = to_string(c);
    if (out == "0") {
      out = simple ? (lit + "*" + name) : ("(" + lit + ")*" + name);
      return;
    }
    if (simple && c.sign() < 0)
      out += " - " + to_string(-c) + "*" + name;
    else
      out += " + " + (simple ? lit : "(" + lit + ")") + "*" + name;
  };
  term(f.c_alpha, "alpha");
  term(f.c_beta, "beta");
  return out;
}

struct AffineSolution {
  AffineForm lambda;
  AffineForm mu;
  bool exact = false;
  Scalar worst_residual;
};

/// Recovers lambda(alpha, beta) and mu(alpha, beta) from solves at (0,0), (1,0),
/// (0,1) and validates the form at (1,1).
inline AffineSolution soliton_affine_form(const SolitonSystem &s) {
  const SolitonSolution s00 = soliton_solve(s, 0, 0);
  const SolitonSolution s10 = soliton_solve(s, 1, 0);
  const SolitonSolution s01 = soliton_solve(s, 0, 1);
  const SolitonSolution s11 = soliton_solve(s, 1, 1);
  AffineSolution a;
  a.lambda = {s00.lambda, s10.lambda - s00.lambda, s01.lambda - s00.lambda};
  a.mu = {s00.mu, s10.mu - s00.mu, s01.mu - s00.mu};
  a.exact = s00.exact && s10.exact && s01.exact && s11.exact && a.lambda.at(1, 1) == s11.lambda &&
            a.mu.at(1, 1) == s11.mu;
  for (const auto *x : {&s00, &s10, &s01, &s11})
    if (x->residual_max > a.worst_residual) a.worst_residual = x->residual_max;
  return a;
}

struct EtaEinstein {
  Scalar a;
  Scalar b;
  bool exact = false;
};

/// S = a G + b eta eta^T, exact when possible and least squares otherwise.
inline EtaEinstein eta_einstein_solve(const Matrix &ricci, const Matrix &metric, const FrameVectorField &xi) {
  if (xi.is_zero()) throw Error("xi must be nonzero");
  const auto eta = mat_vec(metric, xi.coeffs);
  const TwoTermFit fit = fit_two_terms(metric, eta_outer(eta), ricci, metric.rows() == 1);
  return {fit.x, fit.y, fit.exact};
}

struct KillingReport {
  bool killing = false;
  bool conformal = false;
  std::optional<Scalar> conformal_factor;  // rho with L g = 2 rho g
};

/// Killing and conformal-Killing tests for xi, restricted to horizontal pairs when a split is given.
inline KillingReport killing_checks(const FrameManifold &m, const Tensor3 &gamma, const FrameVectorField &xi,
                                    const SubmersionSplit *split = nullptr) {
  Matrix lie = lie_derivative_metric(m, gamma, xi);
  Matrix g = m.metric();
  if (split) {
    lie = lie.restrict_to(split->horizontal());
    g = g.restrict_to(split->horizontal());
  }
  KillingReport r;
  r.killing = lie.is_zero();
  // rho from the first diagonal entry, then verify every entry.
  const Scalar rho = lie(0, 0) / (Scalar(2) * g(0, 0));
  if ((lie - Scalar(2) * rho * g).is_zero()) {
    r.conformal = true;
    r.conformal_factor = rho;
  }
  return r;
}

class HypothesisFailed : public Error {
public:
  explicit HypothesisFailed(const std::string &flag) : Error("hypothesis not satisfied: " + flag), flag_(flag) {}
  const std::string &flag() const noexcept { return flag_; }

private:
  std::string flag_;
};

struct AlmostSoliton {
  Scalar coefficient;  // r |W|^2 - div(W) + 2 lambda - beta R_hat
  Matrix residual;
  bool residual_zero = false;
};

/// Coefficient of the fiber metric in the almost-soliton equation for umbilical
/// fibers with integrable horizontal distribution, and the residual
///   L_V g_hat + 2 alpha S_hat + c g_hat + 2 mu eta eta^T
/// at the supplied (lambda, mu).
inline AlmostSoliton almost_soliton_coefficient(const FrameManifold &m, const SubmersionSplit &split,
                                                const ONeillTensors &t, const CurvaturePackage &fiber,
                                                const SolitonParams &p, const Scalar &lambda, const Scalar &mu) {
  const CurvaturePackage total = curvature(m);
  const StructuralFlags flags = structural_flags(m, total.gamma, split, t);
  if (!flags.fibers_totally_umbilical) throw HypothesisFailed("fibers_totally_umbilical");
  if (!flags.horizontal_integrable) throw HypothesisFailed("horizontal_integrable");
  const MeanCurvature mc = mean_curvature(m, t, split);
  const Scalar r = Scalar(static_cast<long>(split.fiber_dim()));
  const Scalar div_w = horizontal_divergence(m, total.gamma, mc.W, split);
  AlmostSoliton out;
  out.coefficient = r * m.inner(mc.W, mc.W) - div_w + Scalar(2) * lambda - p.beta * fiber.scalar;
  const FrameVectorField v = p.potential.restrict_to(fiber.frame);
  const FrameVectorField xi = p.xi.restrict_to(fiber.frame);
  const auto eta = mat_vec(fiber.metric, xi.coeffs);
  out.residual = lie_derivative_metric(fiber.metric, fiber.gamma, v);
  out.residual += Scalar(2) * p.alpha * fiber.ricci;
  out.residual += out.coefficient * fiber.metric;
  out.residual += Scalar(2) * mu * eta_outer(eta);
  out.residual_zero = out.residual.is_zero();
  return out;
}

// ---------------------------------------------------------------------------
// Hypothesis -> conclusion checks for the submersion results

struct TheoremCheck {
  std::string name;
  std::vector<std::pair<std::string, bool>> hypotheses;
  bool hypotheses_hold = false;
  std::optional<bool> conclusion;  // empty when the conclusion could not be evaluated
  std::string detail;
};

inline std::vector<TheoremCheck> theorem_checks(const FrameManifold &m, const SubmersionSplit &split,
                                                const SolitonParams &p) {
  const CurvaturePackage total = curvature(m);
  const ONeillTensors t = oneill_tensors(m, total.gamma, split);
  const StructuralFlags f = structural_flags(m, total.gamma, split, t);
  const MeanCurvature mc = mean_curvature(m, t, split);
  const bool v_vertical = p.potential.supported_on(split.vertical());
  const bool xi_vertical = p.xi.supported_on(split.vertical());
  const bool xi_horizontal = p.xi.supported_on(split.horizontal());

  SolitonParams tp = p;
  tp.domain = Domain::total;
  const SolitonSystem total_sys = build_system(m, split, tp);
  const SolitonSolution total_sol = soliton_solve(total_sys, p.alpha, p.beta);

  auto finish = [](TheoremCheck &c) {
    c.hypotheses_hold = true;
    for (const auto &h : c.hypotheses) c.hypotheses_hold = c.hypotheses_hold && h.second;
  };
  std::vector<TheoremCheck> out;

  {
    TheoremCheck c{"fiber_soliton"};
    c.hypotheses = {{"total_space_soliton", total_sol.exact},
                    {"vertical_parallel", f.vertical_parallel},
                    {"potential_vertical", v_vertical},
                    {"xi_vertical", xi_vertical}};
    finish(c);
    if (f.vertical_integrable && v_vertical && xi_vertical) {
      SolitonParams fp = p;
      fp.domain = Domain::fiber;
      const SolitonSolution s = soliton_solve(build_system(m, split, fp), p.alpha, p.beta);
      c.conclusion = s.exact;
      c.detail = "fiber " + s.special_type + ": lambda = " + to_string(s.lambda) + ", mu = " + to_string(s.mu);
    }
    out.push_back(std::move(c));
  }

  {
    TheoremCheck c{"almost_fiber_soliton"};
    c.hypotheses = {{"total_space_soliton", total_sol.exact},
                    {"fibers_totally_umbilical", f.fibers_totally_umbilical},
                    {"horizontal_integrable", f.horizontal_integrable},
                    {"potential_vertical", v_vertical},
                    {"xi_vertical", xi_vertical}};
    finish(c);
    if (c.hypotheses_hold && f.vertical_integrable) {
      const CurvaturePackage fiber = fiber_geometry(m, total.gamma, split);
      const AlmostSoliton a = almost_soliton_coefficient(m, split, t, fiber, p, total_sol.lambda, total_sol.mu);
      c.conclusion = a.residual_zero;
      c.detail = "coefficient = " + to_string(a.coefficient);
    }
    out.push_back(std::move(c));
  }

  {
    TheoremCheck c{"eta_einstein_base"};
    c.hypotheses = {{"total_space_soliton", total_sol.exact},
                    {"horizontal_parallel", f.horizontal_parallel},
                    {"potential_vertical", v_vertical}};
    finish(c);
    const CurvaturePackage base = base_geometry(m, total, t, split);
    FrameVectorField xi_h = split.horizontal_part(p.xi).restrict_to(split.horizontal());
    if (xi_h.is_zero()) xi_h = FrameVectorField::basis(split.base_dim(), 0);
    const EtaEinstein e = eta_einstein_solve(base.ricci, base.metric, xi_h);
    c.conclusion = e.exact;
    const Scalar a_formula = -(total_sol.lambda - Scalar::fraction(1, 2) * total.scalar);
    const Scalar b_formula = -total_sol.mu;
    c.detail = "a = " + to_string(e.a) + ", b = " + to_string(e.b) + "; closed form a = -(lambda - R/2) = " +
               to_string(a_formula) + ", b = -mu = " + to_string(b_formula);
    out.push_back(std::move(c));
  }

  {
    TheoremCheck c{"mean_curvature_killing_on_horizontal"};
    c.hypotheses = {{"total_space_soliton", total_sol.exact},
                    {"horizontal_parallel", f.horizontal_parallel},
                    {"xi_horizontal", xi_horizontal}};
    finish(c);
    c.conclusion = killing_checks(m, total.gamma, mc.N, &split).killing;
    out.push_back(std::move(c));
  }

  {
    TheoremCheck c{"xi_conformal_killing_on_horizontal"};
    const CurvaturePackage base = base_geometry(m, total, t, split);
    FrameVectorField xi_h = split.horizontal_part(p.xi).restrict_to(split.horizontal());
    const bool base_eta_einstein = !xi_h.is_zero() && eta_einstein_solve(base.ricci, base.metric, xi_h).exact;
    c.hypotheses = {{"total_space_soliton", total_sol.exact},
                    {"horizontal_parallel", f.horizontal_parallel},
                    {"xi_horizontal", xi_horizontal},
                    {"base_eta_einstein", base_eta_einstein}};
    finish(c);
    const KillingReport k = killing_checks(m, total.gamma, p.xi, &split);
    c.conclusion = k.conformal;
    if (k.conformal_factor) c.detail = "rho = " + to_string(*k.conformal_factor);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace ryssub
