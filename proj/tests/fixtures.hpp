#pragma once

// Hand-built frames shared by the unit tests. These do not go through the
// manifest loader so the loader can be tested against them.

#include "ryssub/ryssub.hpp"

#include <random>
#include <vector>

namespace fixtures {

using namespace ryssub;

inline Scalar q(long n, long d = 1) { return Scalar::fraction(n, d); }

inline FrameManifold abelian(std::size_t n = 3) { return FrameManifold(n, Matrix::identity(n), {}); }

/// [E_1, E_2] = E_3 (0-based: [E_0, E_1] = E_2)
inline FrameManifold heisenberg() {
  const std::vector<Bracket> b{{0, 1, {{2, Scalar(1)}}}};
  return FrameManifold(3, Matrix::identity(3), b, Strictness::jacobi);
}

/// [E_i, E_6] = E_i for i = 1..5
inline FrameManifold frame6() {
  std::vector<Bracket> b;
  for (std::size_t i = 0; i < 5; ++i) b.push_back({i, 5, {{i, Scalar(1)}}});
  return FrameManifold(6, Matrix::identity(6), b, Strictness::jacobi);
}

/// Flat R^6 in the frame V_1, V_2, V_3, H_1, H_2, H_3.
inline FrameManifold flat6() { return abelian(6); }

inline SubmersionSplit heisenberg_split(const FrameManifold &m) { return SubmersionSplit(m, {2}, {0, 1}); }
inline SubmersionSplit frame6_split(const FrameManifold &m) { return SubmersionSplit(m, {0, 1, 2, 3, 4}, {5}); }
inline SubmersionSplit flat6_split(const FrameManifold &m) { return SubmersionSplit(m, {0, 1, 2}, {3, 4, 5}); }

inline FrameVectorField e(std::size_t n, std::size_t i) { return FrameVectorField::basis(n, i); }

// ---------------------------------------------------------------------------
// Random exact inputs

class Gen {
public:
  explicit Gen(unsigned seed) : rng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

  Rational rational(long span = 9, long max_den = 7) {
    return Rational(integer(-span, span), integer(1, max_den));
  }

  Scalar scalar(bool with_sqrt2 = true) {
    Scalar s(rational());
    if (with_sqrt2 && integer(0, 2) != 0) s = Scalar(rational(), rational());
    return s;
  }

  Scalar nonzero_scalar(bool with_sqrt2 = true) {
    for (;;) {
      Scalar s = scalar(with_sqrt2);
      if (!s.is_zero()) return s;
    }
  }

  /// L L^T with L unit lower-triangular times a positive diagonal: positive definite.
  Matrix spd_matrix(std::size_t n) {
    Matrix l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      l(i, i) = Scalar(Rational(integer(1, 4), integer(1, 3)));
      for (std::size_t j = 0; j < i; ++j) l(i, j) = Scalar(rational(3, 3));
    }
    return l * l.transpose();
  }

  /// 3-dim frame of nilpotent form: [E_1, E_2] = a E_3, other brackets zero.
  FrameManifold nilpotent3(bool random_metric) {
    Scalar a = nonzero_scalar(false);
    const std::vector<Bracket> b{{0, 1, {{2, a}}}};
    return FrameManifold(3, random_metric ? spd_matrix(3) : Matrix::identity(3), b, Strictness::jacobi);
  }

  /// 3-dim solvable frame R x R^2: [E_3, E_1], [E_3, E_2] in span{E_1, E_2}; Jacobi holds for any 2x2 block.
  FrameManifold solvable3(bool random_metric) {
    std::vector<Bracket> b{{2, 0, {{0, Scalar(rational(3, 3))}, {1, Scalar(rational(3, 3))}}},
                           {2, 1, {{0, Scalar(rational(3, 3))}, {1, Scalar(rational(3, 3))}}}};
    return FrameManifold(3, random_metric ? spd_matrix(3) : Matrix::identity(3), b, Strictness::jacobi);
  }

  std::mt19937 &engine() { return rng_; }

private:
  std::mt19937 rng_;
};

}  // namespace fixtures
