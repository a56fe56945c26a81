#include "chart_oracle.hpp"
#include "fixtures.hpp"

#include <gtest/gtest.h>

using namespace ryssub;
using fixtures::e;
using fixtures::q;

namespace {

const IdentityResidual &find(const std::vector<IdentityResidual> &rs, const std::string &id, const std::string &reading) {
  for (const auto &r : rs)
    if (r.identity == id && r.reading == reading) return r;
  throw std::runtime_error("missing residual " + id + "/" + reading);
}

/// Random Lie algebras whose splits are genuine submersions, with block-diagonal random metrics.
struct Sample {
  FrameManifold m;
  SubmersionSplit split;
};

Matrix block_metric(fixtures::Gen &gen, std::size_t n, const std::vector<std::size_t> &a, const std::vector<std::size_t> &b) {
  Matrix g(n, n);
  for (const auto *blk : {&a, &b}) {
    const Matrix s = gen.spd_matrix(blk->size());
    for (std::size_t i = 0; i < blk->size(); ++i)
      for (std::size_t j = 0; j < blk->size(); ++j) g((*blk)[i], (*blk)[j]) = s(i, j);
  }
  return g;
}

Sample random_submersion(fixtures::Gen &gen, int kind) {
  auto r = [&] { return Scalar(gen.rational(3, 3)); };
  switch (kind % 4) {
    case 0: {  // [E1,E2] = a E3, vertical {3}
      const std::vector<std::size_t> v{2}, h{0, 1};
      const std::vector<Bracket> b{{0, 1, {{2, gen.nonzero_scalar(false)}}}};
      FrameManifold m(3, block_metric(gen, 3, v, h), b, Strictness::jacobi);
      return {m, SubmersionSplit(m, v, h)};
    }
    case 1: {  // filiform: [E1,E2] = a E3 + b E4, [E1,E3] = c E4; vertical {3,4}
      const std::vector<std::size_t> v{2, 3}, h{0, 1};
      const std::vector<Bracket> b{{0, 1, {{2, r()}, {3, r()}}}, {0, 2, {{3, r()}}}};
      FrameManifold m(4, block_metric(gen, 4, v, h), b, Strictness::jacobi);
      return {m, SubmersionSplit(m, v, h)};
    }
    case 2: {  // [E3,E1] = a E1, [E3,E2] = c E1 + d E2; vertical {1}, fibers not minimal
      const std::vector<std::size_t> v{0}, h{1, 2};
      const std::vector<Bracket> b{{2, 0, {{0, gen.nonzero_scalar(false)}}}, {2, 1, {{0, r()}, {1, gen.nonzero_scalar(false)}}}};
      FrameManifold m(3, block_metric(gen, 3, v, h), b, Strictness::jacobi);
      return {m, SubmersionSplit(m, v, h)};
    }
    default: {  // filiform, vertical {4}
      const std::vector<std::size_t> v{3}, h{0, 1, 2};
      const std::vector<Bracket> b{{0, 1, {{2, r()}, {3, r()}}}, {0, 2, {{3, r()}}}};
      FrameManifold m(4, block_metric(gen, 4, v, h), b, Strictness::jacobi);
      return {m, SubmersionSplit(m, v, h)};
    }
  }
}

}  // namespace

TEST(Split, Validation) {
  const auto m = fixtures::abelian();
  EXPECT_THROW(SubmersionSplit(m, {}, {0, 1, 2}), Error);
  EXPECT_THROW(SubmersionSplit(m, {0, 1}, {1, 2}), Error);
  EXPECT_THROW(SubmersionSplit(m, {0}, {1}), Error);
  EXPECT_THROW(SubmersionSplit(m, {0}, {1, 5}), Error);
  const FrameManifold skew(2, Matrix{{2, 1}, {1, 2}}, {});
  EXPECT_THROW(SubmersionSplit(skew, {0}, {1}), Error);
  const SubmersionSplit s(m, {2, 0}, {1});
  EXPECT_EQ(s.vertical(), (std::vector<std::size_t>{0, 2}));
}

TEST(ONeill, AbelianVanishes) {
  const auto m = fixtures::abelian();
  const SubmersionSplit split(m, {0}, {1, 2});
  const auto t = oneill_tensors(m, levi_civita(m), split);
  EXPECT_TRUE(t.T.is_zero());
  EXPECT_TRUE(t.A.is_zero());
  EXPECT_TRUE(mean_curvature(m, t, split).N.is_zero());
  const auto f = structural_flags(m, levi_civita(m), split, t);
  EXPECT_TRUE(f.vertical_parallel && f.horizontal_parallel && f.horizontal_integrable && f.vertical_integrable &&
              f.fibers_minimal && f.fibers_totally_umbilical && f.fibers_totally_geodesic && f.horizontal_isometry);
  for (const auto &r : oneill_identity_residuals(m, split)) EXPECT_TRUE(r.vanishes()) << r.identity << r.reading;
}

TEST(ONeill, HeisenbergAIsHalfVerticalBracket) {
  const auto m = fixtures::heisenberg();
  const auto split = fixtures::heisenberg_split(m);
  const auto gamma = levi_civita(m);
  const auto t = oneill_tensors(m, gamma, split);
  EXPECT_TRUE(t.T.is_zero());
  // Oracle: A_X Y = 1/2 V[X,Y] read off the structure constants.
  for (auto x : split.horizontal())
    for (auto y : split.horizontal())
      for (auto k : split.vertical()) EXPECT_EQ(t.A(x, y, k), q(1, 2) * m.brackets()(x, y, k));
  EXPECT_EQ(t.a(0, 1), q(1, 2) * e(3, 2));
  EXPECT_EQ(t.a(0, 2), q(-1, 2) * e(3, 1));
  EXPECT_EQ(t.a(1, 2), q(1, 2) * e(3, 0));
  const auto f = structural_flags(m, gamma, split, t);
  EXPECT_TRUE(f.fibers_totally_geodesic);
  EXPECT_FALSE(f.horizontal_integrable);
  EXPECT_TRUE(f.horizontal_isometry);
  EXPECT_TRUE(mean_curvature(m, t, split).N.is_zero());
  EXPECT_TRUE(horizontal_divergence(m, gamma, e(3, 0), split).is_zero());
}

TEST(ONeill, HeisenbergBaseIsFlat) {
  const auto m = fixtures::heisenberg();
  const auto split = fixtures::heisenberg_split(m);
  const auto total = curvature(m);
  const auto t = oneill_tensors(m, total.gamma, split);
  const auto base = base_geometry(m, total, t, split);
  EXPECT_TRUE(base.riemann.is_zero());
  EXPECT_TRUE(base.ricci.is_zero());
  EXPECT_TRUE(base.scalar.is_zero());
  // -3/4 = 0 - 3 g(A_{E1}E2, A_{E1}E2)
  EXPECT_EQ(lower_riemann(total.riemann, m.metric())(0, 1, 1, 0), q(-3, 4));
  EXPECT_EQ(Scalar(3) * m.inner(t.a(0, 1), t.a(0, 1)), q(3, 4));
  const auto rs = oneill_identity_residuals(m, split);
  const auto &b = find(rs, "base", "literal");
  EXPECT_TRUE(b.vanishes());
  EXPECT_EQ(b.tuples, 16u);
  EXPECT_TRUE(find(rs, "gauss", "literal").vanishes());
  const auto fiber = fiber_geometry(m, total.gamma, split);
  EXPECT_TRUE(fiber.ricci.is_zero());
  EXPECT_TRUE(fiber.scalar.is_zero());
}

TEST(ONeill, Frame6UmbilicalFibers) {
  const auto m = fixtures::frame6();
  const auto split = fixtures::frame6_split(m);
  const auto gamma = levi_civita(m);
  const auto t = oneill_tensors(m, gamma, split);
  const chart::Oracle oracle(chart::exponential_frame6());
  chart::Vec x(6);
  x << 0.3, 0.1, 0.2, -0.4, 0.0, -0.6;
  const auto conn = oracle.frame_connection(x);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(t.t(i, i), Scalar(-1) * e(6, 5));
    EXPECT_NEAR(t.T(i, i, 5).to_double(), conn[i](i, 5), 1e-6);  // horizontal part of nabla_{E_i} E_i
  }
  EXPECT_TRUE(t.A.is_zero());
  const auto mc = mean_curvature(m, t, split);
  EXPECT_EQ(mc.N, Scalar(-5) * e(6, 5));
  EXPECT_EQ(mc.W, Scalar(-1) * e(6, 5));
  EXPECT_TRUE(horizontal_divergence(m, gamma, mc.N, split).is_zero());
  const auto f = structural_flags(m, gamma, split, t);
  EXPECT_TRUE(f.fibers_totally_umbilical);
  EXPECT_FALSE(f.fibers_minimal);
  EXPECT_FALSE(f.fibers_totally_geodesic);
  EXPECT_TRUE(f.horizontal_integrable);
  EXPECT_TRUE(f.vertical_integrable);

  const auto rs = oneill_identity_residuals(m, split);
  const auto &gauss = find(rs, "gauss", "literal");
  EXPECT_TRUE(gauss.vanishes());
  EXPECT_EQ(gauss.tuples, 625u);
  const auto fiber = fiber_geometry(m, gamma, split);
  EXPECT_TRUE(fiber.riemann.is_zero());
  // Gauss at (E1,E2,E2,E1): -1 = 0 - g(T_{E1}E1, T_{E2}E2) + g(T_{E2}E1, T_{E1}E2)
  EXPECT_EQ(-m.inner(t.t(0, 0), t.t(1, 1)) + m.inner(t.t(1, 0), t.t(0, 1)), Scalar(-1));
}

TEST(ONeill, NonIntegrableFiberIsNamed) {
  const auto m = fixtures::heisenberg();
  const SubmersionSplit split(m, {0, 1}, {2});
  try {
    fiber_geometry(m, levi_civita(m), split);
    FAIL();
  } catch (const NonIntegrableFiber &err) {
    EXPECT_EQ(err.pair(), (std::pair<std::size_t, std::size_t>{0, 1}));
    EXPECT_NE(std::string(err.what()).find("E_1, E_2"), std::string::npos);
  }
  const auto rs = oneill_identity_residuals(m, split);
  EXPECT_FALSE(find(rs, "gauss", "literal").evaluated);
}

TEST(ONeill, StandardRicciReadingsVanishOnBundledSplits) {
  std::vector<std::pair<FrameManifold, std::vector<std::vector<std::size_t>>>> cases;
  for (auto [m, split] : {std::pair{fixtures::heisenberg(), std::pair{std::vector<std::size_t>{2}, std::vector<std::size_t>{0, 1}}},
                          std::pair{fixtures::frame6(), std::pair{std::vector<std::size_t>{0, 1, 2, 3, 4}, std::vector<std::size_t>{5}}},
                          std::pair{fixtures::flat6(), std::pair{std::vector<std::size_t>{0, 1, 2}, std::vector<std::size_t>{3, 4, 5}}}}) {
    const SubmersionSplit s(m, split.first, split.second);
    const auto rs = oneill_identity_residuals(m, s);
    EXPECT_TRUE(find(rs, "ricci_vertical", "standard").vanishes());
    EXPECT_TRUE(find(rs, "ricci_horizontal", "standard").vanishes());
    EXPECT_TRUE(find(rs, "gauss", "literal").vanishes());
    EXPECT_TRUE(find(rs, "base", "literal").vanishes());
  }
}

TEST(ONeill, LiteralRicciReadingsDisagreeOnFrame6) {
  const auto m = fixtures::frame6();
  const auto rs = oneill_identity_residuals(m, fixtures::frame6_split(m));
  // S(E1,E1) = -5, literal right side 0 + g(N, T_{E1}E1) = 5
  const auto &lit = find(rs, "ricci_vertical", "literal");
  EXPECT_FALSE(lit.vanishes());
  EXPECT_EQ(lit.max_abs, Scalar(10));
  EXPECT_FALSE(find(rs, "ricci_horizontal", "literal").vanishes());
  EXPECT_TRUE(find(rs, "ricci_mixed", "literal").evaluated);
}

TEST(ONeillProperty, RandomSubmersions) {
  fixtures::Gen gen(31);
  for (int trial = 0; trial < 60; ++trial) {
    const auto [m, split] = random_submersion(gen, trial);
    const std::size_t n = m.dim();
    const auto total = curvature(m);
    const auto t = oneill_tensors(m, total.gamma, split);
    const auto f = structural_flags(m, total.gamma, split, t);
    ASSERT_TRUE(f.vertical_integrable);
    ASSERT_TRUE(f.horizontal_isometry);
    for (auto u : split.vertical())
      for (auto w : split.vertical()) EXPECT_EQ(t.t(u, w), t.t(w, u));
    for (auto x : split.horizontal())
      for (auto y : split.horizontal()) {
        EXPECT_EQ(t.a(x, y), Scalar(-1) * t.a(y, x));
        FrameVectorField half(n);
        for (auto k : split.vertical()) half[k] = q(1, 2) * m.brackets()(x, y, k);
        EXPECT_EQ(t.a(x, y), half);
      }
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) {
          EXPECT_EQ(m.inner(t.t(a, b), e(n, c)), -m.inner(t.t(a, c), e(n, b)));
          EXPECT_EQ(m.inner(t.a(a, b), e(n, c)), -m.inner(t.a(a, c), e(n, b)));
        }
    const auto mc = mean_curvature(m, t, split);
    if (f.fibers_totally_geodesic) EXPECT_TRUE(f.fibers_totally_umbilical);
    if (f.fibers_totally_umbilical) EXPECT_EQ(mc.N, Scalar(static_cast<long>(split.fiber_dim())) * mc.W);
    const auto rs = oneill_identity_residuals(m, split);
    EXPECT_TRUE(find(rs, "gauss", "literal").vanishes()) << trial;
    EXPECT_TRUE(find(rs, "base", "literal").vanishes()) << trial;
    EXPECT_TRUE(find(rs, "ricci_vertical", "standard").vanishes()) << trial;
    EXPECT_TRUE(find(rs, "ricci_horizontal", "standard").vanishes()) << trial;
  }
}
