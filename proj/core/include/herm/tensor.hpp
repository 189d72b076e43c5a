#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <numeric>
#include <span>
#include <vector>

#include "herm/error.hpp"

namespace herm {

/// Dense complex array with a small runtime rank. Row-major.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> dims) : dims_(std::move(dims)) {
    std::size_t total = 1;
    for (int d : dims_) total *= static_cast<std::size_t>(d);
    data_.assign(total, Complex{});
  }

  static Tensor cube(int rank, int n) { return Tensor(std::vector<int>(static_cast<std::size_t>(rank), n)); }

  template <class... I>
  Complex& operator()(I... idx) {
    return data_[offset({static_cast<int>(idx)...})];
  }
  template <class... I>
  const Complex& operator()(I... idx) const {
    return data_[offset({static_cast<int>(idx)...})];
  }

  Complex& at(std::span<const int> idx) { return data_[offset(idx)]; }
  const Complex& at(std::span<const int> idx) const { return data_[offset(idx)]; }

  const std::vector<int>& dims() const { return dims_; }
  int rank() const { return static_cast<int>(dims_.size()); }
  std::size_t size() const { return data_.size(); }
  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }

  /// Multi-index of a flat position.
  std::vector<int> unravel(std::size_t flat) const {
    std::vector<int> idx(dims_.size());
    for (std::size_t a = dims_.size(); a-- > 0;) {
      idx[a] = static_cast<int>(flat % static_cast<std::size_t>(dims_[a]));
      flat /= static_cast<std::size_t>(dims_[a]);
    }
    return idx;
  }

  double max_abs() const {
    double m = 0.0;
    for (const Complex& z : data_) m = std::max(m, std::abs(z));
    return m;
  }

  double norm2() const {
    double s = 0.0;
    for (const Complex& z : data_) s += std::norm(z);
    return s;
  }

  Tensor& operator+=(const Tensor& o) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Tensor& operator-=(const Tensor& o) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Tensor& operator*=(Complex s) {
    for (Complex& z : data_) z *= s;
    return *this;
  }
  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
  friend Tensor operator*(Complex s, Tensor a) { return a *= s; }

 private:
  std::size_t offset(std::span<const int> idx) const {
    std::size_t off = 0;
    for (std::size_t a = 0; a < dims_.size(); ++a) off = off * static_cast<std::size_t>(dims_[a]) + static_cast<std::size_t>(idx[a]);
    return off;
  }
  std::size_t offset(std::initializer_list<int> idx) const {
    return offset(std::span<const int>(idx.begin(), idx.size()));
  }

  std::vector<int> dims_;
  std::vector<Complex> data_;
};

/// Max-norm of a residual tensor with the location of the worst entry.
struct Residual {
  double value = 0.0;
  std::vector<int> worst;

  void absorb(const Residual& o) {
    if (worst.empty() || o.value > value) {
      value = std::max(value, o.value);
      worst = o.worst;
    }
  }
};

inline Residual max_residual(const Tensor& t) {
  Residual r;
  std::size_t arg = 0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double a = std::abs(t.data()[k]);
    if (a > r.value) {
      r.value = a;
      arg = k;
    }
  }
  r.worst = t.size() ? t.unravel(arg) : std::vector<int>{};
  return r;
}

}  // namespace herm
