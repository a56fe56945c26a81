#pragma once

// Riemannian manifolds presented by a global frame {E_i} with a constant
// metric G_ij = g(E_i, E_j) and constant structure coefficients
// [E_i, E_j] = sum_k c_ij^k E_k. Everything here is exact.
//
// Conventions (0-based indices throughout the library):
//   gamma(i, j, k)      nabla_{E_i} E_j = sum_k gamma(i,j,k) E_k
//   riemann(i, j, k, l) R(E_i, E_j) E_k = sum_l riemann(i,j,k,l) E_l
//   R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z
//   S(X,Y)  = trace(Z -> R(Z,X)Y)

#include "ryssub/matrix.hpp"
#include "ryssub/scalar.hpp"
#include "ryssub/tensor.hpp"

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ryssub {

/// A constant-coefficient vector field V = sum_i coeffs[i] E_i.
struct FrameVectorField {
  std::vector<Scalar> coeffs;

  FrameVectorField() = default;
  explicit FrameVectorField(std::size_t n) : coeffs(n) {}
  explicit FrameVectorField(std::vector<Scalar> c) : coeffs(std::move(c)) {}

  static FrameVectorField basis(std::size_t n, std::size_t i) {
    FrameVectorField v(n);
    v.coeffs.at(i) = 1;
    return v;
  }

  std::size_t size() const noexcept { return coeffs.size(); }
  const Scalar &operator[](std::size_t i) const { return coeffs[i]; }
  Scalar &operator[](std::size_t i) { return coeffs[i]; }
  bool is_zero() const {
    for (const auto &c : coeffs)
      if (!c.is_zero()) return false;
    return true;
  }
  /// True when every component outside `support` vanishes.
  bool supported_on(std::span<const std::size_t> support) const {
    std::set<std::size_t> s(support.begin(), support.end());
    for (std::size_t i = 0; i < coeffs.size(); ++i)
      if (!s.count(i) && !coeffs[i].is_zero()) return false;
    return true;
  }
  FrameVectorField restrict_to(std::span<const std::size_t> idx) const {
    FrameVectorField v(idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a) v[a] = coeffs.at(idx[a]);
    return v;
  }

  FrameVectorField &operator*=(const Scalar &s) {
    for (auto &c : coeffs) c *= s;
    return *this;
  }
  friend FrameVectorField operator*(const Scalar &s, FrameVectorField v) { return v *= s; }
  friend bool operator==(const FrameVectorField &, const FrameVectorField &) = default;
};

/// One input bracket [E_i, E_j] = sum coeffs; stored only for i < j by callers
/// that care about canonical form, but either order is accepted.
struct Bracket {
  std::size_t i = 0;
  std::size_t j = 0;
  std::vector<std::pair<std::size_t, Scalar>> coeffs;
};

struct JacobiViolation {
  std::size_t i, j, k, l;
  Scalar value;
};

enum class Strictness { lenient, jacobi };

class FrameManifold {
public:
  FrameManifold() = default;

  FrameManifold(std::size_t dim, Matrix metric, std::span<const Bracket> brackets,
                Strictness strict = Strictness::lenient)
      : dim_(dim), metric_(std::move(metric)), c_(dim) {
    if (dim_ == 0) throw Error("frame dimension must be positive");
    for (const auto &b : brackets) {
      if (b.i >= dim_ || b.j >= dim_) throw Error("bracket index out of range");
      if (b.i == b.j) throw Error("bracket [E_i, E_i] must vanish; got a stored entry for i = j");
      for (const auto &[k, v] : b.coeffs) {
        if (k >= dim_) throw Error("bracket component index out of range");
        c_(b.i, b.j, k) += v;
        c_(b.j, b.i, k) -= v;
      }
    }
    finish(strict);
  }

  /// From dense structure coefficients; antisymmetry is checked, not imposed.
  FrameManifold(Matrix metric, Tensor3 c, Strictness strict = Strictness::lenient)
      : dim_(c.dim()), metric_(std::move(metric)), c_(std::move(c)) {
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j)
        for (std::size_t k = 0; k < dim_; ++k)
          if (c_(i, j, k) != -c_(j, i, k))
            throw Error("structure coefficients are not antisymmetric at (" + std::to_string(i + 1) + "," +
                        std::to_string(j + 1) + "," + std::to_string(k + 1) + ")");
    finish(strict);
  }

  std::size_t dim() const noexcept { return dim_; }
  const Matrix &metric() const noexcept { return metric_; }
  const Matrix &inverse_metric() const noexcept { return metric_inv_; }
  /// c(i, j, k) = c_ij^k
  const Tensor3 &brackets() const noexcept { return c_; }

  Scalar inner(const FrameVectorField &u, const FrameVectorField &v) const {
    return bilinear(metric_, u.coeffs, v.coeffs);
  }
  /// Components of [E_i, E_j].
  FrameVectorField bracket(std::size_t i, std::size_t j) const {
    FrameVectorField v(dim_);
    for (std::size_t k = 0; k < dim_; ++k) v[k] = c_(i, j, k);
    return v;
  }
  bool is_abelian() const { return c_.is_zero(); }

private:
  void finish(Strictness strict);

  std::size_t dim_ = 0;
  Matrix metric_;
  Matrix metric_inv_;
  Tensor3 c_;
};

/// Violated Jacobi sums over i < j < k and every output index l.
inline std::vector<JacobiViolation> jacobi_check(const FrameManifold &m) {
  const std::size_t n = m.dim();
  const Tensor3 &c = m.brackets();
  std::vector<JacobiViolation> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          Scalar s;
          for (std::size_t p = 0; p < n; ++p) {
            s += c(i, j, p) * c(p, k, l);
            s += c(j, k, p) * c(p, i, l);
            s += c(k, i, p) * c(p, j, l);
          }
          if (!s.is_zero()) out.push_back({i, j, k, l, s});
        }
  return out;
}

inline void FrameManifold::finish(Strictness strict) {
  if (metric_.rows() != dim_ || metric_.cols() != dim_)
    throw Error("metric must be " + std::to_string(dim_) + "x" + std::to_string(dim_));
  if (!metric_.is_symmetric()) throw Error("metric is not symmetric");
  if (!is_positive_definite(metric_)) throw Error("metric is not positive definite");
  metric_inv_ = invert(metric_);
  if (strict == Strictness::jacobi) {
    auto bad = jacobi_check(*this);
    if (!bad.empty()) {
      const auto &v = bad.front();
      throw Error("Jacobi identity fails for (" + std::to_string(v.i + 1) + "," + std::to_string(v.j + 1) + "," +
                  std::to_string(v.k + 1) + ") component " + std::to_string(v.l + 1));
    }
  }
}

// ---------------------------------------------------------------------------
// Connection and curvature

/// Levi-Civita connection from Koszul's formula with constant metric:
///   2 g(nabla_i E_j, E_l) = g([E_i,E_j],E_l) - g([E_j,E_l],E_i) - g([E_i,E_l],E_j)
inline Tensor3 levi_civita(const FrameManifold &m) {
  const std::size_t n = m.dim();
  const Tensor3 &c = m.brackets();
  const Matrix &g = m.metric();
  // Lowered structure constants c(i,j,.) paired with E_l.
  Tensor3 low(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        if (c(i, j, k).is_zero()) continue;
        for (std::size_t l = 0; l < n; ++l)
          if (!g(k, l).is_zero()) low(i, j, l) += c(i, j, k) * g(k, l);
      }
  const Scalar half = Scalar::fraction(1, 2);
  Tensor3 gamma_low(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < n; ++l) gamma_low(i, j, l) = half * (low(i, j, l) - low(j, l, i) - low(i, l, j));
  const Matrix &ginv = m.inverse_metric();
  Tensor3 gamma(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < n; ++l) {
        if (gamma_low(i, j, l).is_zero()) continue;
        for (std::size_t k = 0; k < n; ++k)
          if (!ginv(l, k).is_zero()) gamma(i, j, k) += gamma_low(i, j, l) * ginv(l, k);
      }
  return gamma;
}

/// nabla_{E_i} V for constant-coefficient V.
inline FrameVectorField covariant_derivative(const Tensor3 &gamma, std::size_t i, const FrameVectorField &v) {
  const std::size_t n = gamma.dim();
  FrameVectorField out(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (v[k].is_zero()) continue;
    for (std::size_t l = 0; l < n; ++l)
      if (!gamma(i, k, l).is_zero()) out[l] += v[k] * gamma(i, k, l);
  }
  return out;
}

/// nabla_X Y for constant-coefficient X, Y.
inline FrameVectorField covariant_derivative(const Tensor3 &gamma, const FrameVectorField &x,
                                             const FrameVectorField &y) {
  FrameVectorField out(gamma.dim());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].is_zero()) continue;
    auto d = covariant_derivative(gamma, i, y);
    for (std::size_t l = 0; l < out.size(); ++l) out[l] += x[i] * d[l];
  }
  return out;
}

/// R_ijk^l = sum_m (G_jk^m G_im^l - G_ik^m G_jm^l - c_ij^m G_mk^l) for constant coefficients.
inline Tensor4 riemann(const FrameManifold &m, const Tensor3 &gamma) {
  const std::size_t n = m.dim();
  const Tensor3 &c = m.brackets();
  Tensor4 r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t p = 0; p < n; ++p) {
          const Scalar &gjk = gamma(j, k, p);
          const Scalar &gik = gamma(i, k, p);
          const Scalar &cij = c(i, j, p);
          if (gjk.is_zero() && gik.is_zero() && cij.is_zero()) continue;
          for (std::size_t l = 0; l < n; ++l) {
            if (!gjk.is_zero()) r(i, j, k, l) += gjk * gamma(i, p, l);
            if (!gik.is_zero()) r(i, j, k, l) -= gik * gamma(j, p, l);
            if (!cij.is_zero()) r(i, j, k, l) -= cij * gamma(p, k, l);
          }
        }
    }
  return r;
}

/// R_ijkl = g(R(E_i,E_j)E_k, E_l)
inline Tensor4 lower_riemann(const Tensor4 &r, const Matrix &g) {
  const std::size_t n = r.dim();
  Tensor4 low(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t m = 0; m < n; ++m) {
          if (r(i, j, k, m).is_zero()) continue;
          for (std::size_t l = 0; l < n; ++l)
            if (!g(m, l).is_zero()) low(i, j, k, l) += r(i, j, k, m) * g(m, l);
        }
  return low;
}

struct RicciScalar {
  Matrix ricci;
  Scalar scalar;
};

/// S_jk = sum_i R_ijk^i; frame independent, so no orthonormalisation is needed.
inline RicciScalar ricci_and_scalar(const Matrix &ginv, const Tensor4 &r) {
  const std::size_t n = r.dim();
  RicciScalar out{Matrix(n, n), Scalar{}};
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) out.ricci(j, k) += r(i, j, k, i);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      if (!ginv(j, k).is_zero()) out.scalar += ginv(j, k) * out.ricci(j, k);
  return out;
}

inline RicciScalar ricci_and_scalar(const FrameManifold &m, const Tensor4 &r) {
  return ricci_and_scalar(m.inverse_metric(), r);
}

/// Connection, curvature and metric data for one geometry (total space, fiber or base).
/// `frame` maps local positions to ambient frame indices.
struct CurvaturePackage {
  std::vector<std::size_t> frame;
  Matrix metric;
  Tensor3 gamma;
  Tensor4 riemann;
  Matrix ricci;
  Scalar scalar;

  std::size_t dim() const noexcept { return metric.rows(); }
};

inline std::vector<std::size_t> iota_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

inline CurvaturePackage curvature(const FrameManifold &m) {
  CurvaturePackage p;
  p.frame = iota_indices(m.dim());
  p.metric = m.metric();
  p.gamma = levi_civita(m);
  p.riemann = riemann(m, p.gamma);
  auto rs = ricci_and_scalar(m, p.riemann);
  p.ricci = std::move(rs.ricci);
  p.scalar = std::move(rs.scalar);
  return p;
}

/// (L_V g)(E_i,E_j) = g(nabla_i V, E_j) + g(nabla_j V, E_i)
inline Matrix lie_derivative_metric(const Matrix &g, const Tensor3 &gamma, const FrameVectorField &v) {
  const std::size_t n = g.rows();
  if (v.size() != n) throw Error("vector field dimension does not match the frame");
  std::vector<FrameVectorField> nabla_v;
  nabla_v.reserve(n);
  for (std::size_t i = 0; i < n; ++i) nabla_v.push_back(covariant_derivative(gamma, i, v));
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Scalar s;
      for (std::size_t k = 0; k < n; ++k) {
        if (!nabla_v[i][k].is_zero()) s += nabla_v[i][k] * g(k, j);
        if (!nabla_v[j][k].is_zero()) s += nabla_v[j][k] * g(k, i);
      }
      out(i, j) = std::move(s);
    }
  return out;
}

inline Matrix lie_derivative_metric(const FrameManifold &m, const Tensor3 &gamma, const FrameVectorField &v) {
  return lie_derivative_metric(m.metric(), gamma, v);
}

// ---------------------------------------------------------------------------
// Identity checks

struct CurvatureAxioms {
  bool torsion_free = true;
  bool metric_compatible = true;
  bool antisymmetric = true;
  bool first_bianchi = true;
  bool pair_symmetric = true;

  bool all() const { return torsion_free && metric_compatible && antisymmetric && first_bianchi && pair_symmetric; }
};

inline CurvatureAxioms check_curvature_axioms(const FrameManifold &m, const CurvaturePackage &p) {
  const std::size_t n = m.dim();
  const Tensor3 &c = m.brackets();
  const Matrix &g = m.metric();
  CurvatureAxioms ax;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (p.gamma(i, j, k) - p.gamma(j, i, k) != c(i, j, k)) ax.torsion_free = false;
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Scalar s;
        for (std::size_t k = 0; k < n; ++k) s += p.gamma(l, i, k) * g(k, j) + p.gamma(l, j, k) * g(k, i);
        if (!s.is_zero()) ax.metric_compatible = false;
      }
  const Tensor4 low = lower_riemann(p.riemann, g);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          if (p.riemann(i, j, k, l) != -p.riemann(j, i, k, l)) ax.antisymmetric = false;
          if (!(p.riemann(i, j, k, l) + p.riemann(j, k, i, l) + p.riemann(k, i, j, l)).is_zero())
            ax.first_bianchi = false;
          if (low(i, j, k, l) != low(k, l, i, j) || low(i, j, k, l) != -low(i, j, l, k)) ax.pair_symmetric = false;
        }
  return ax;
}

}  // namespace ryssub
