#pragma once

// Dense cubic arrays of Scalars indexed by frame positions.

#include "ryssub/scalar.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace ryssub {

template <std::size_t Rank>
class Tensor {
public:
  Tensor() = default;
  explicit Tensor(std::size_t dim) : dim_(dim), data_(power(dim)) {}

  std::size_t dim() const noexcept { return dim_; }

  template <typename... Idx>
  Scalar &operator()(Idx... idx) {
    static_assert(sizeof...(Idx) == Rank);
    return data_[offset({static_cast<std::size_t>(idx)...})];
  }
  template <typename... Idx>
  const Scalar &operator()(Idx... idx) const {
    static_assert(sizeof...(Idx) == Rank);
    return data_[offset({static_cast<std::size_t>(idx)...})];
  }

  bool is_zero() const {
    for (const auto &x : data_)
      if (!x.is_zero()) return false;
    return true;
  }

  /// Calls f(index, value) for every nonzero entry in lexicographic order.
  void for_each_nonzero(const std::function<void(const std::array<std::size_t, Rank> &, const Scalar &)> &f) const {
    for (std::size_t flat = 0; flat < data_.size(); ++flat) {
      if (data_[flat].is_zero()) continue;
      std::array<std::size_t, Rank> idx{};
      std::size_t rest = flat;
      for (std::size_t r = Rank; r-- > 0;) {
        idx[r] = rest % dim_;
        rest /= dim_;
      }
      f(idx, data_[flat]);
    }
  }

  friend bool operator==(const Tensor &, const Tensor &) = default;

private:
  std::size_t power(std::size_t n) const {
    std::size_t p = 1;
    for (std::size_t r = 0; r < Rank; ++r) p *= n;
    return p;
  }
  std::size_t offset(const std::array<std::size_t, Rank> &idx) const {
    std::size_t o = 0;
    for (auto i : idx) o = o * dim_ + i;
    return o;
  }

  std::size_t dim_ = 0;
  std::vector<Scalar> data_;
};

using Tensor3 = Tensor<3>;
using Tensor4 = Tensor<4>;

}  // namespace ryssub
