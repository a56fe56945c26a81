#pragma once

// Riemannian submersions encoded as a vertical/horizontal split of the frame.
//
// The metric must be block diagonal with respect to the split, so the
// projections V and H act on frame components by masking index blocks.
// Sums over orthonormal frames of a block are evaluated as contractions with
// the inverse block metric, which is frame independent and needs no square
// roots.

#include "ryssub/frame.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace ryssub {

class NonIntegrableFiber : public Error {
public:
  NonIntegrableFiber(std::size_t i, std::size_t j, std::size_t h)
      : Error("vertical distribution is not integrable: [E_" + std::to_string(i + 1) + ", E_" +
              std::to_string(j + 1) + "] has a component along horizontal E_" + std::to_string(h + 1)),
        i_(i), j_(j) {}
  std::pair<std::size_t, std::size_t> pair() const { return {i_, j_}; }

private:
  std::size_t i_, j_;
};

class SubmersionSplit {
public:
  SubmersionSplit() = default;

  SubmersionSplit(const FrameManifold &m, std::vector<std::size_t> vertical, std::vector<std::size_t> horizontal)
      : vertical_(std::move(vertical)), horizontal_(std::move(horizontal)), is_vertical_(m.dim(), false) {
    std::sort(vertical_.begin(), vertical_.end());
    std::sort(horizontal_.begin(), horizontal_.end());
    if (vertical_.empty()) throw Error("split needs at least one vertical index");
    if (horizontal_.empty()) throw Error("split needs at least one horizontal index");
    std::vector<int> seen(m.dim(), 0);
    for (auto i : vertical_) {
      if (i >= m.dim()) throw Error("vertical index " + std::to_string(i + 1) + " out of range");
      ++seen[i];
      is_vertical_[i] = true;
    }
    for (auto i : horizontal_) {
      if (i >= m.dim()) throw Error("horizontal index " + std::to_string(i + 1) + " out of range");
      ++seen[i];
    }
    for (std::size_t i = 0; i < m.dim(); ++i)
      if (seen[i] != 1)
        throw Error("index " + std::to_string(i + 1) + (seen[i] ? " appears in both blocks" : " is in neither block"));
    const Matrix &g = m.metric();
    for (auto v : vertical_)
      for (auto h : horizontal_)
        if (!g(v, h).is_zero())
          throw Error("metric is not block diagonal: g(E_" + std::to_string(v + 1) + ", E_" + std::to_string(h + 1) +
                      ") = " + to_string(g(v, h)));
    vertical_metric_inv_ = invert(g.restrict_to(vertical_));
    horizontal_metric_inv_ = invert(g.restrict_to(horizontal_));
  }

  const std::vector<std::size_t> &vertical() const noexcept { return vertical_; }
  const std::vector<std::size_t> &horizontal() const noexcept { return horizontal_; }
  std::size_t fiber_dim() const noexcept { return vertical_.size(); }
  std::size_t base_dim() const noexcept { return horizontal_.size(); }
  bool is_vertical(std::size_t i) const { return is_vertical_.at(i); }
  bool is_horizontal(std::size_t i) const { return !is_vertical_.at(i); }
  /// Inverse of the metric restricted to each block, indexed by block position.
  const Matrix &vertical_metric_inv() const noexcept { return vertical_metric_inv_; }
  const Matrix &horizontal_metric_inv() const noexcept { return horizontal_metric_inv_; }

  FrameVectorField vertical_part(const FrameVectorField &v) const { return mask(v, true); }
  FrameVectorField horizontal_part(const FrameVectorField &v) const { return mask(v, false); }

private:
  FrameVectorField mask(FrameVectorField v, bool keep_vertical) const {
    for (std::size_t i = 0; i < v.size(); ++i)
      if (is_vertical_[i] != keep_vertical) v[i] = Scalar{};
    return v;
  }

  std::vector<std::size_t> vertical_;
  std::vector<std::size_t> horizontal_;
  std::vector<bool> is_vertical_;
  Matrix vertical_metric_inv_;
  Matrix horizontal_metric_inv_;
};

/// T(i, j, k): component k of T_{E_i} E_j; A likewise.
struct ONeillTensors {
  Tensor3 T;
  Tensor3 A;

  FrameVectorField t(std::size_t i, std::size_t j) const { return row(T, i, j); }
  FrameVectorField a(std::size_t i, std::size_t j) const { return row(A, i, j); }

private:
  static FrameVectorField row(const Tensor3 &x, std::size_t i, std::size_t j) {
    FrameVectorField v(x.dim());
    for (std::size_t k = 0; k < x.dim(); ++k) v[k] = x(i, j, k);
    return v;
  }
};

/// T_E F = H nabla_{VE} VF + V nabla_{VE} HF,  A_E F = V nabla_{HE} HF + H nabla_{HE} VF.
inline ONeillTensors oneill_tensors(const FrameManifold &m, const Tensor3 &gamma, const SubmersionSplit &split) {
  const std::size_t n = m.dim();
  ONeillTensors o{Tensor3(n), Tensor3(n)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        // Output lands in the block opposite to F's block.
        if (split.is_vertical(j) == split.is_vertical(k)) continue;
        if (split.is_vertical(i))
          o.T(i, j, k) = gamma(i, j, k);
        else
          o.A(i, j, k) = gamma(i, j, k);
      }
  return o;
}

/// Bilinear extension: X_E F for constant-coefficient E, F.
inline FrameVectorField apply_tensor(const Tensor3 &x, const FrameVectorField &e, const FrameVectorField &f) {
  const std::size_t n = x.dim();
  FrameVectorField out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (e[i].is_zero()) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (f[j].is_zero()) continue;
      const Scalar w = e[i] * f[j];
      for (std::size_t k = 0; k < n; ++k)
        if (!x(i, j, k).is_zero()) out[k] += w * x(i, j, k);
    }
  }
  return out;
}

/// Contraction sum_{a,b in block} ginv_ab f(E_a, E_b), i.e. the sum over an orthonormal frame of the block.
template <typename F>
Scalar block_trace(const std::vector<std::size_t> &block, const Matrix &block_ginv, F &&f) {
  Scalar acc;
  for (std::size_t a = 0; a < block.size(); ++a)
    for (std::size_t b = 0; b < block.size(); ++b)
      if (!block_ginv(a, b).is_zero()) acc += block_ginv(a, b) * f(block[a], block[b]);
  return acc;
}

struct MeanCurvature {
  FrameVectorField N;  // sum of T_{E_j} E_j over an orthonormal vertical frame
  FrameVectorField W;  // N / r
};

inline MeanCurvature mean_curvature(const FrameManifold &m, const ONeillTensors &t, const SubmersionSplit &split) {
  const std::size_t n = m.dim();
  MeanCurvature mc{FrameVectorField(n), FrameVectorField(n)};
  const auto &vert = split.vertical();
  const Matrix &vinv = split.vertical_metric_inv();
  for (std::size_t a = 0; a < vert.size(); ++a)
    for (std::size_t b = 0; b < vert.size(); ++b) {
      if (vinv(a, b).is_zero()) continue;
      for (std::size_t k = 0; k < n; ++k) mc.N[k] += vinv(a, b) * t.T(vert[a], vert[b], k);
    }
  mc.W = Scalar(Rational(1, static_cast<long>(split.fiber_dim()))) * mc.N;
  return mc;
}

/// div(X) = sum_i g(nabla_{X_i} X, X_i) over an orthonormal horizontal frame.
inline Scalar horizontal_divergence(const FrameManifold &m, const Tensor3 &gamma, const FrameVectorField &x,
                                    const SubmersionSplit &split) {
  return block_trace(split.horizontal(), split.horizontal_metric_inv(), [&](std::size_t a, std::size_t b) {
    return m.inner(covariant_derivative(gamma, a, x), FrameVectorField::basis(m.dim(), b));
  });
}

/// Throws NonIntegrableFiber for the first vertical pair whose bracket leaves the vertical block.
inline void require_integrable_fibers(const FrameManifold &m, const SubmersionSplit &split) {
  const Tensor3 &c = m.brackets();
  for (auto i : split.vertical())
    for (auto j : split.vertical()) {
      if (j <= i) continue;
      for (auto h : split.horizontal())
        if (!c(i, j, h).is_zero()) throw NonIntegrableFiber(i, j, h);
    }
}

inline bool fibers_integrable(const FrameManifold &m, const SubmersionSplit &split) {
  try {
    require_integrable_fibers(m, split);
    return true;
  } catch (const NonIntegrableFiber &) {
    return false;
  }
}

namespace detail {

inline Tensor3 restrict_tensor(const Tensor3 &x, const std::vector<std::size_t> &idx) {
  Tensor3 out(idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b)
      for (std::size_t c = 0; c < idx.size(); ++c) out(a, b, c) = x(idx[a], idx[b], idx[c]);
  return out;
}

inline CurvaturePackage package_from(const FrameManifold &frame, Tensor3 gamma, std::vector<std::size_t> idx) {
  CurvaturePackage p;
  p.frame = std::move(idx);
  p.metric = frame.metric();
  p.gamma = std::move(gamma);
  p.riemann = riemann(frame, p.gamma);
  auto rs = ricci_and_scalar(frame, p.riemann);
  p.ricci = std::move(rs.ricci);
  p.scalar = std::move(rs.scalar);
  return p;
}

}  // namespace detail

/// The fiber as a frame manifold: vertical sub-frame, induced metric, vertical brackets.
inline FrameManifold fiber_frame(const FrameManifold &m, const SubmersionSplit &split) {
  require_integrable_fibers(m, split);
  return FrameManifold(m.metric().restrict_to(split.vertical()),
                       detail::restrict_tensor(m.brackets(), split.vertical()));
}

/// The base seen through basic fields: horizontal sub-frame, metric G_H and
/// brackets H[X, Y].
inline FrameManifold base_frame(const FrameManifold &m, const SubmersionSplit &split) {
  return FrameManifold(m.metric().restrict_to(split.horizontal()),
                       detail::restrict_tensor(m.brackets(), split.horizontal()));
}

/// Fiber geometry with the induced connection V nabla on vertical fields.
inline CurvaturePackage fiber_geometry(const FrameManifold &m, const Tensor3 &gamma, const SubmersionSplit &split) {
  const FrameManifold fiber = fiber_frame(m, split);
  return detail::package_from(fiber, detail::restrict_tensor(gamma, split.vertical()), split.vertical());
}

/// Base geometry. The connection is H nabla on basic fields; the curvature comes
/// from the ambient curvature corrected by A:
///   R_N(X,Y,Z,W) = R(X,Y,Z,W) - 2g(A_X Y, A_Z W) + g(A_Y Z, A_X W) - g(A_X Z, A_Y W)
inline CurvaturePackage base_geometry(const FrameManifold &m, const CurvaturePackage &total, const ONeillTensors &t,
                                      const SubmersionSplit &split) {
  const auto &hor = split.horizontal();
  const std::size_t q = hor.size();
  const Tensor4 low = lower_riemann(total.riemann, m.metric());
  auto g = [&](const FrameVectorField &u, const FrameVectorField &v) { return m.inner(u, v); };
  Tensor4 low_n(q);
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t b = 0; b < q; ++b)
      for (std::size_t c = 0; c < q; ++c)
        for (std::size_t d = 0; d < q; ++d) {
          const std::size_t x = hor[a], y = hor[b], z = hor[c], w = hor[d];
          low_n(a, b, c, d) = low(x, y, z, w) - Scalar(2) * g(t.a(x, y), t.a(z, w)) + g(t.a(y, z), t.a(x, w)) -
                              g(t.a(x, z), t.a(y, w));
        }
  const Matrix &hinv = split.horizontal_metric_inv();
  CurvaturePackage p;
  p.frame = hor;
  p.metric = m.metric().restrict_to(hor);
  p.gamma = detail::restrict_tensor(total.gamma, hor);
  p.riemann = Tensor4(q);
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t b = 0; b < q; ++b)
      for (std::size_t c = 0; c < q; ++c)
        for (std::size_t d = 0; d < q; ++d) {
          if (low_n(a, b, c, d).is_zero()) continue;
          for (std::size_t e = 0; e < q; ++e)
            if (!hinv(d, e).is_zero()) p.riemann(a, b, c, e) += low_n(a, b, c, d) * hinv(d, e);
        }
  auto rs = ricci_and_scalar(hinv, p.riemann);
  p.ricci = std::move(rs.ricci);
  p.scalar = std::move(rs.scalar);
  return p;
}

// ---------------------------------------------------------------------------
// Structural hypotheses

struct StructuralFlags {
  bool vertical_parallel = false;
  bool horizontal_parallel = false;
  bool horizontal_integrable = false;
  bool vertical_integrable = false;
  bool fibers_minimal = false;
  bool fibers_totally_umbilical = false;
  bool fibers_totally_geodesic = false;
  /// L_U g vanishes on horizontal pairs for vertical U, i.e. the split really is a Riemannian submersion.
  bool horizontal_isometry = false;
};

inline StructuralFlags structural_flags(const FrameManifold &m, const Tensor3 &gamma, const SubmersionSplit &split,
                                        const ONeillTensors &t) {
  StructuralFlags f;
  const std::size_t n = m.dim();
  auto block_zero = [&](const Tensor3 &x, bool first_vertical, bool second_vertical) {
    for (std::size_t i = 0; i < n; ++i) {
      if (split.is_vertical(i) != first_vertical) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (split.is_vertical(j) != second_vertical) continue;
        for (std::size_t k = 0; k < n; ++k)
          if (!x(i, j, k).is_zero()) return false;
      }
    }
    return true;
  };
  const bool t_vv = block_zero(t.T, true, true);
  const bool t_vh = block_zero(t.T, true, false);
  const bool a_hv = block_zero(t.A, false, true);
  const bool a_hh = block_zero(t.A, false, false);
  f.vertical_parallel = t_vv && a_hv;
  f.horizontal_parallel = t_vh && a_hh;
  f.horizontal_integrable = a_hh;
  f.vertical_integrable = fibers_integrable(m, split);
  f.fibers_totally_geodesic = t.T.is_zero();

  const MeanCurvature mc = mean_curvature(m, t, split);
  f.fibers_minimal = mc.N.is_zero();
  f.fibers_totally_umbilical = true;
  for (auto i : split.vertical())
    for (auto j : split.vertical())
      for (std::size_t k = 0; k < n; ++k)
        if (t.T(i, j, k) != m.metric()(i, j) * mc.W[k]) f.fibers_totally_umbilical = false;

  f.horizontal_isometry = true;
  for (auto u : split.vertical()) {
    const Matrix lie = lie_derivative_metric(m, gamma, FrameVectorField::basis(n, u));
    for (auto x : split.horizontal())
      for (auto y : split.horizontal())
        if (!lie(x, y).is_zero()) f.horizontal_isometry = false;
  }
  return f;
}

// ---------------------------------------------------------------------------
// Curvature relations between total space, fibers and base

struct IdentityResidual {
  std::string identity;    // "gauss", "base", "ricci_vertical", "ricci_horizontal", "ricci_mixed"
  std::string reading;     // "literal" or "standard"
  bool asserted = false;   // expected to vanish identically
  bool evaluated = false;  // false when a prerequisite (e.g. integrable fibers) is missing
  std::string note;
  std::size_t tuples = 0;
  std::size_t nonzero = 0;
  Scalar max_abs;
  std::vector<std::size_t> worst;  // ambient indices of the largest residual

  bool vanishes() const { return evaluated && nonzero == 0; }
};

namespace detail {

inline void record(IdentityResidual &r, const Scalar &value, std::vector<std::size_t> tuple) {
  ++r.tuples;
  if (value.is_zero()) return;
  ++r.nonzero;
  Scalar a = abs(value);
  if (a > r.max_abs || r.worst.empty()) {
    r.max_abs = std::move(a);
    r.worst = std::move(tuple);
  }
}

/// (nabla_Z X)(E, F) = nabla_Z (X_E F) - X_{nabla_Z E} F - X_E nabla_Z F
inline FrameVectorField covariant_derivative_of(const Tensor3 &gamma, const Tensor3 &x, const FrameVectorField &z,
                                                const FrameVectorField &e, const FrameVectorField &f) {
  FrameVectorField out = covariant_derivative(gamma, z, apply_tensor(x, e, f));
  const auto d1 = apply_tensor(x, covariant_derivative(gamma, z, e), f);
  const auto d2 = apply_tensor(x, e, covariant_derivative(gamma, z, f));
  for (std::size_t k = 0; k < out.size(); ++k) out[k] -= d1[k] + d2[k];
  return out;
}

}  // namespace detail

/// Residuals LHS - RHS of the O'Neill curvature relations over all frame tuples.
/// Gauss (vertical 4-tuples) and base (horizontal 4-tuples) are asserted; the
/// Ricci relations are evaluated in the literal sign reading and in the
/// standard O'Neill signs and are report-only.
inline std::vector<IdentityResidual> oneill_identity_residuals(const FrameManifold &m, const SubmersionSplit &split) {
  const std::size_t n = m.dim();
  const CurvaturePackage total = curvature(m);
  const ONeillTensors t = oneill_tensors(m, total.gamma, split);
  const MeanCurvature mc = mean_curvature(m, t, split);
  const Tensor4 low = lower_riemann(total.riemann, m.metric());
  auto g = [&](const FrameVectorField &u, const FrameVectorField &v) { return m.inner(u, v); };
  auto e = [&](std::size_t i) { return FrameVectorField::basis(n, i); };
  const auto &vert = split.vertical();
  const auto &hor = split.horizontal();
  const Matrix &vinv = split.vertical_metric_inv();
  const Matrix &hinv = split.horizontal_metric_inv();

  std::vector<IdentityResidual> out;
  const bool integrable = fibers_integrable(m, split);
  std::optional<CurvaturePackage> fiber;
  if (integrable) fiber = fiber_geometry(m, total.gamma, split);
  const CurvaturePackage base = base_geometry(m, total, t, split);
  const FrameManifold base_direct = base_frame(m, split);
  const CurvaturePackage base_pkg = curvature(base_direct);
  const Tensor4 base_low = lower_riemann(base_pkg.riemann, base_direct.metric());

  // Gauss equation for the fibers.
  {
    IdentityResidual r{"gauss", "literal", true};
    if (!fiber) {
      r.note = "fibers not integrable";
    } else {
      r.evaluated = true;
      const Tensor4 fl = lower_riemann(fiber->riemann, fiber->metric);
      const std::size_t q = vert.size();
      for (std::size_t a = 0; a < q; ++a)
        for (std::size_t b = 0; b < q; ++b)
          for (std::size_t c = 0; c < q; ++c)
            for (std::size_t d = 0; d < q; ++d) {
              const std::size_t E = vert[a], F = vert[b], G = vert[c], H = vert[d];
              const Scalar rhs = fl(a, b, c, d) - g(t.t(E, H), t.t(F, G)) + g(t.t(F, H), t.t(E, G));
              detail::record(r, low(E, F, G, H) - rhs, {E, F, G, H});
            }
    }
    out.push_back(std::move(r));
  }

  // Horizontal relation, checked against the base computed directly from H[X,Y].
  {
    IdentityResidual r{"base", "literal", true, true};
    r.note = "base curvature from the horizontal sub-frame";
    const std::size_t q = hor.size();
    for (std::size_t a = 0; a < q; ++a)
      for (std::size_t b = 0; b < q; ++b)
        for (std::size_t c = 0; c < q; ++c)
          for (std::size_t d = 0; d < q; ++d) {
            const std::size_t X = hor[a], Y = hor[b], Z = hor[c], W = hor[d];
            const Scalar rhs = base_low(a, b, c, d) + Scalar(2) * g(t.a(X, Y), t.a(Z, W)) - g(t.a(Y, Z), t.a(X, W)) +
                               g(t.a(X, Z), t.a(Y, W));
            detail::record(r, low(X, Y, Z, W) - rhs, {X, Y, Z, W});
          }
    out.push_back(std::move(r));
  }

  // Ricci on vertical pairs.
  {
    IdentityResidual lit{"ricci_vertical", "literal"}, std_{"ricci_vertical", "standard"};
    if (!fiber) {
      lit.note = std_.note = "fibers not integrable";
    } else {
      lit.evaluated = std_.evaluated = true;
      for (std::size_t a = 0; a < vert.size(); ++a)
        for (std::size_t b = 0; b < vert.size(); ++b) {
          const std::size_t E = vert[a], F = vert[b];
          const Scalar n_term = g(mc.N, t.t(E, F));
          const Scalar dt = block_trace(hor, hinv, [&](std::size_t x, std::size_t y) {
            return g(detail::covariant_derivative_of(total.gamma, t.T, e(x), e(E), e(F)), e(y));
          });
          const Scalar aa = block_trace(hor, hinv, [&](std::size_t x, std::size_t y) { return g(t.a(x, E), t.a(y, F)); });
          const Scalar &s_hat = fiber->ricci(a, b);
          detail::record(lit, total.ricci(E, F) - (s_hat + n_term - dt - aa), {E, F});
          detail::record(std_, total.ricci(E, F) - (s_hat - n_term + dt + aa), {E, F});
        }
    }
    out.push_back(std::move(lit));
    out.push_back(std::move(std_));
  }

  // Ricci on horizontal pairs.
  {
    IdentityResidual lit{"ricci_horizontal", "literal", false, true}, std_{"ricci_horizontal", "standard", false, true};
    for (std::size_t a = 0; a < hor.size(); ++a)
      for (std::size_t b = 0; b < hor.size(); ++b) {
        const std::size_t X = hor[a], Y = hor[b];
        const Scalar half = Scalar::fraction(1, 2);
        const Scalar dn = half * (g(covariant_derivative(total.gamma, X, mc.N), e(Y)) +
                                  g(covariant_derivative(total.gamma, Y, mc.N), e(X)));
        const Scalar aa = block_trace(hor, hinv, [&](std::size_t p, std::size_t q) { return g(t.a(X, p), t.a(Y, q)); });
        const Scalar tt = block_trace(vert, vinv, [&](std::size_t u, std::size_t w) { return g(t.t(u, X), t.t(w, Y)); });
        const Scalar &s_n = base.ricci(a, b);
        detail::record(lit, total.ricci(X, Y) - (s_n - dn + Scalar(2) * aa + tt), {X, Y});
        detail::record(std_, total.ricci(X, Y) - (s_n + dn - Scalar(2) * aa - tt), {X, Y});
      }
    out.push_back(std::move(lit));
    out.push_back(std::move(std_));
  }

  // Mixed Ricci S(E, X).
  {
    IdentityResidual lit{"ricci_mixed", "literal", false, true};
    for (auto E : vert)
      for (auto X : hor) {
        const Scalar dn = -g(covariant_derivative(total.gamma, E, mc.N), e(X));
        const Scalar dt = block_trace(vert, vinv, [&](std::size_t u, std::size_t w) {
          return g(detail::covariant_derivative_of(total.gamma, t.T, e(u), e(w), e(E)), e(X));
        });
        const Scalar da = block_trace(hor, hinv, [&](std::size_t p, std::size_t q) {
          return g(detail::covariant_derivative_of(total.gamma, t.A, e(p), e(q), e(X)), e(E)) +
                 Scalar(2) * g(t.a(p, X), t.t(E, q));
        });
        detail::record(lit, total.ricci(E, X) - (dn + dt - da), {E, X});
      }
    out.push_back(std::move(lit));
  }
  return out;
}

}  // namespace ryssub
