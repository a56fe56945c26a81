#include "fixtures.hpp"

#include <gtest/gtest.h>

using namespace ryssub;
using fixtures::e;
using fixtures::q;

namespace {

/// The 6-dim frame times a line: fibers are copies of the hyperbolic frame.
FrameManifold frame6_times_line() {
  std::vector<Bracket> b;
  for (std::size_t i = 0; i < 5; ++i) b.push_back({i, 5, {{i, Scalar(1)}}});
  return FrameManifold(7, Matrix::identity(7), b, Strictness::jacobi);
}

struct FiberRun {
  SolitonSystem sys;
  SolitonSolution sol;
};

FiberRun fiber_run(const FrameManifold &m, const SubmersionSplit &split, FrameVectorField v, FrameVectorField xi,
                   const Scalar &alpha, const Scalar &beta) {
  const SolitonParams p{alpha, beta, std::move(v), std::move(xi), Domain::fiber};
  auto sys = build_system(m, split, p);
  auto sol = soliton_solve(sys, alpha, beta);
  return {std::move(sys), std::move(sol)};
}

}  // namespace

TEST(TraceIdentity, AbelianFiber) {
  const auto m = fixtures::abelian();
  const SubmersionSplit split(m, {0, 1}, {2});
  const auto run = fiber_run(m, split, FrameVectorField(3), e(3, 0), 0, 0);
  const auto h = trace_identity(run.sys, run.sol, 0, 0);
  EXPECT_TRUE(h.divergence_v.is_zero());
  EXPECT_TRUE(h.short_formula_value.is_zero());
  EXPECT_TRUE(h.trace_formula_value.is_zero());
  EXPECT_TRUE(h.match);
  EXPECT_TRUE(h.identity_holds);
  EXPECT_TRUE(h.warning.empty());
}

TEST(TraceIdentity, HeisenbergWholeSpace) {
  const auto m = fixtures::heisenberg();
  const auto sys = build_system(m, std::nullopt, {1, 0, FrameVectorField(3), e(3, 2)});
  const auto sol = soliton_solve(sys, 1, 0);
  const auto h = trace_identity(sys, sol, 1, 0);
  EXPECT_TRUE(h.divergence_v.is_zero());
  // -3 (1/2) + (0 - 1)(-1/2) - (-1) = 0
  EXPECT_TRUE(h.trace_formula_value.is_zero());
  EXPECT_TRUE(h.identity_holds);
}

TEST(TraceIdentity, Frame6WholeSpace) {
  const auto m = fixtures::frame6();
  const auto sys = build_system(m, std::nullopt, {0, 0, e(6, 5), e(6, 5)});
  const auto sol = soliton_solve(sys, 0, 0);
  const auto h = trace_identity(sys, sol, 0, 0);
  // sum_j g(nabla_{E_j} E6, E_j) = 5
  EXPECT_EQ(h.divergence_v, Scalar(5));
  EXPECT_EQ(h.laplacian_f, Scalar(5));
  EXPECT_EQ(h.trace_formula_value, Scalar(5));  // -6(-1) + 0 - 1
  EXPECT_TRUE(h.identity_holds);
}

TEST(TraceIdentity, CurvedFiberSeparatesTheFormulas) {
  const auto m = frame6_times_line();
  const SubmersionSplit split(m, {0, 1, 2, 3, 4, 5}, {6});
  const auto run = fiber_run(m, split, e(7, 5), e(7, 5), 0, 1);
  ASSERT_TRUE(run.sol.exact);
  EXPECT_EQ(run.sol.lambda, Scalar(-16));
  const auto h = trace_identity(run.sys, run.sol, 0, 1);
  EXPECT_EQ(h.divergence_v, Scalar(5));
  EXPECT_TRUE(h.identity_holds);
  // The short form misses the factor r on the beta term: -6(-16) + (-30)(1/2) - 1 = 80.
  EXPECT_EQ(h.short_formula_value, Scalar(80));
  EXPECT_FALSE(h.match);
}

TEST(TraceIdentity, InexactSolveCarriesWarning) {
  const auto m = fixtures::abelian();
  auto sys = build_system(m, std::nullopt, {1, 0, FrameVectorField(3), e(3, 2)},
                          ClaimedTensors{Matrix::diagonal(std::vector<Scalar>{1, 2, 3}), Scalar(6)});
  const auto sol = soliton_solve(sys, 1, 0);
  ASSERT_FALSE(sol.exact);
  const auto h = trace_identity(sys, sol, 1, 0);
  EXPECT_FALSE(h.solve_exact);
  EXPECT_NE(h.warning.find("not exact"), std::string::npos);
}

TEST(HarmonicClassification, Examples) {
  const auto a = harmonic_classification(0, 4, 1, 1, 0);
  EXPECT_TRUE(a.lambda.is_zero());
  EXPECT_EQ(a.classification, Classification::steady);
  const auto b = harmonic_classification(q(-1, 2), 3, 1, 0, 0);
  EXPECT_EQ(b.lambda, q(1, 6));
  EXPECT_EQ(b.classification, Classification::shrinking);
  const auto c = harmonic_classification(0, 5, 0, 0, 1);
  EXPECT_EQ(c.lambda, q(-1, 5));
  EXPECT_EQ(c.classification, Classification::expanding);
  EXPECT_THROW(harmonic_classification(0, 0, 0, 0, 0), Error);
}

TEST(HarmonicProperty, ClassificationFollowsSign) {
  fixtures::Gen gen(51);
  for (int trial = 0; trial < 1000; ++trial) {
    const Scalar rs = gen.scalar(), alpha = gen.scalar(), beta = gen.scalar(), mu = gen.scalar();
    const std::size_t r = static_cast<std::size_t>(gen.integer(1, 7));
    const auto h = harmonic_classification(rs, r, alpha, beta, mu);
    const Scalar rr(static_cast<long>(r));
    // Oracle: the trace identity with Delta f = 0 and |xi| = 1.
    EXPECT_TRUE((-rr * h.lambda + rs * (q(1, 2) * rr * beta - alpha) - mu).is_zero());
    EXPECT_EQ(h.classification, classify(h.lambda));
  }
}

TEST(HarmonicProperty, TraceIdentityOnExactFiberSolves) {
  fixtures::Gen gen(52);
  const auto big = frame6_times_line();
  const SubmersionSplit big_split(big, {0, 1, 2, 3, 4, 5}, {6});
  const auto flat = fixtures::flat6();
  const auto flat_split = fixtures::flat6_split(flat);
  const auto f6 = fixtures::frame6();
  const auto f6_split = fixtures::frame6_split(f6);
  const auto h3 = fixtures::heisenberg();
  const auto h3_split = fixtures::heisenberg_split(h3);
  int exact = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const Scalar alpha(gen.rational()), beta(gen.rational());
    const FrameManifold *m = nullptr;
    const SubmersionSplit *split = nullptr;
    switch (trial % 4) {
      case 0: m = &big, split = &big_split; break;
      case 1: m = &flat, split = &flat_split; break;
      case 2: m = &f6, split = &f6_split; break;
      default: m = &h3, split = &h3_split; break;
    }
    const std::size_t n = m->dim();
    FrameVectorField v(n), xi(n);
    for (auto i : split->vertical()) {
      v[i] = Scalar(gen.rational(2, 2));
      xi[i] = gen.scalar();
    }
    // Keep the fiber solve exact: V along E6 on the curved fiber, xi a single basis direction.
    if (m == &big) {
      v = Scalar(gen.rational(2, 2)) * e(n, 5);
      xi = gen.nonzero_scalar() * e(n, 5);
    } else if (split->fiber_dim() > 1) {
      xi = gen.nonzero_scalar() * e(n, split->vertical()[0]);
    } else if (xi.is_zero()) {
      xi = e(n, split->vertical()[0]);
    }
    const auto run = fiber_run(*m, *split, v, xi, alpha, beta);
    if (!run.sol.exact) continue;
    ++exact;
    const auto h = trace_identity(run.sys, run.sol, alpha, beta);
    EXPECT_TRUE(h.identity_holds) << trial;
    if (split->fiber_dim() == 1 && run.sys.xi_norm2 == Scalar(1))
      EXPECT_EQ(h.short_formula_value, h.trace_formula_value);
  }
  EXPECT_GE(exact, 60);
}

TEST(HarmonicProperty, OneDimensionalUnitFiberFormulasCoincide) {
  fixtures::Gen gen(53);
  const auto m = fixtures::heisenberg();
  const auto split = fixtures::heisenberg_split(m);
  for (int trial = 0; trial < 50; ++trial) {
    const Scalar alpha = gen.scalar(), beta = gen.scalar();
    const auto run = fiber_run(m, split, Scalar(gen.rational()) * e(3, 2), e(3, 2), alpha, beta);
    ASSERT_TRUE(run.sol.exact);
    const auto h = trace_identity(run.sys, run.sol, alpha, beta);
    EXPECT_EQ(h.short_formula_value, h.trace_formula_value);
    EXPECT_TRUE(h.identity_holds);
    EXPECT_TRUE(h.match);
  }
}
