#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "core.hpp"

namespace rperm {

/// Truncated power series in u and y = x - center, with coefficients c[m][j] of
/// u^m y^j for m <= max_u, j <= max_x.
///
/// Expanding around x = center keeps derivatives at that point exact under x-truncation:
/// d^m/dx^m at x = center is m! c[.][m], which only needs max_x >= m.
template <typename Field>
class BivariateSeries {
 public:
  BivariateSeries(std::size_t max_u, std::size_t max_x, Field center = Field(0))
      : max_u_(max_u), max_x_(max_x), center_(std::move(center)), c_((max_u + 1) * (max_x + 1), Field(0)) {}

  static BivariateSeries constant(std::size_t max_u, std::size_t max_x, const Field& value,
                                  Field center = Field(0)) {
    BivariateSeries s(max_u, max_x, std::move(center));
    s.at(0, 0) = value;
    return s;
  }

  // The series u.
  static BivariateSeries u_variable(std::size_t max_u, std::size_t max_x, Field center = Field(0)) {
    BivariateSeries s(max_u, max_x, std::move(center));
    if (max_u >= 1) s.at(1, 0) = Field(1);
    return s;
  }

  // The series x = center + y.
  static BivariateSeries x_variable(std::size_t max_u, std::size_t max_x, Field center = Field(0)) {
    BivariateSeries s(max_u, max_x, center);
    s.at(0, 0) = center;
    if (max_x >= 1) s.at(0, 1) = Field(1);
    return s;
  }

  std::size_t max_u() const noexcept { return max_u_; }
  std::size_t max_x() const noexcept { return max_x_; }
  const Field& center() const noexcept { return center_; }

  Field& at(std::size_t m, std::size_t j) { return c_.at(m * (max_x_ + 1) + j); }
  const Field& at(std::size_t m, std::size_t j) const { return c_.at(m * (max_x_ + 1) + j); }

  BivariateSeries& operator+=(const BivariateSeries& o) {
    check_compatible(o);
    for (std::size_t t = 0; t < c_.size(); ++t) c_[t] += o.c_[t];
    return *this;
  }
  BivariateSeries& operator-=(const BivariateSeries& o) {
    check_compatible(o);
    for (std::size_t t = 0; t < c_.size(); ++t) c_[t] -= o.c_[t];
    return *this;
  }
  BivariateSeries& operator*=(const Field& s) {
    for (auto& v : c_) v *= s;
    return *this;
  }

  friend BivariateSeries operator+(BivariateSeries a, const BivariateSeries& b) { return a += b; }
  friend BivariateSeries operator-(BivariateSeries a, const BivariateSeries& b) { return a -= b; }
  friend BivariateSeries operator*(BivariateSeries a, const Field& s) { return a *= s; }
  friend BivariateSeries operator*(const Field& s, BivariateSeries a) { return a *= s; }

  friend BivariateSeries operator*(const BivariateSeries& a, const BivariateSeries& b) {
    a.check_compatible(b);
    BivariateSeries r(a.max_u_, a.max_x_, a.center_);
    for (std::size_t m1 = 0; m1 <= a.max_u_; ++m1)
      for (std::size_t j1 = 0; j1 <= a.max_x_; ++j1) {
        const Field& x = a.at(m1, j1);
        if (x == 0) continue;
        for (std::size_t m2 = 0; m1 + m2 <= a.max_u_; ++m2)
          for (std::size_t j2 = 0; j1 + j2 <= a.max_x_; ++j2) {
            const Field& y = b.at(m2, j2);
            if (y != 0) r.at(m1 + m2, j1 + j2) += x * y;
          }
      }
    return r;
  }

  /// Truncated quotient q with q * den = *this. The u^0 part of den must be a nonzero
  /// constant (no y terms).
  BivariateSeries divide(const BivariateSeries& den) const {
    check_compatible(den);
    const Field lead = den.at(0, 0);
    if (lead == 0) throw invalid_input("series: divisor has zero constant term");
    for (std::size_t j = 1; j <= max_x_; ++j)
      if (den.at(0, j) != 0) throw invalid_input("series: divisor u^0 part must be constant");

    BivariateSeries q(max_u_, max_x_, center_);
    for (std::size_t m = 0; m <= max_u_; ++m) {
      std::vector<Field> rhs(max_x_ + 1);
      for (std::size_t j = 0; j <= max_x_; ++j) rhs[j] = at(m, j);
      for (std::size_t t = 1; t <= m; ++t)
        for (std::size_t j1 = 0; j1 <= max_x_; ++j1) {
          const Field& d = den.at(t, j1);
          if (d == 0) continue;
          for (std::size_t j2 = 0; j1 + j2 <= max_x_; ++j2) rhs[j1 + j2] -= d * q.at(m - t, j2);
        }
      for (std::size_t j = 0; j <= max_x_; ++j) q.at(m, j) = rhs[j] / lead;
    }
    return q;
  }

  /// d/dx. The top y-coefficient is lost, so max_x drops by one.
  BivariateSeries derivative_x() const {
    if (max_x_ == 0) throw invalid_input("series: no x-order left to differentiate");
    BivariateSeries r(max_u_, max_x_ - 1, center_);
    for (std::size_t m = 0; m <= max_u_; ++m)
      for (std::size_t j = 1; j <= max_x_; ++j) r.at(m, j - 1) = at(m, j) * Field(static_cast<long>(j));
    return r;
  }

  /// Coefficients of u^0..u^max_u after setting x = center.
  std::vector<Field> at_center() const {
    std::vector<Field> out(max_u_ + 1);
    for (std::size_t m = 0; m <= max_u_; ++m) out[m] = at(m, 0);
    return out;
  }

  friend bool operator==(const BivariateSeries&, const BivariateSeries&) = default;

 private:
  void check_compatible(const BivariateSeries& o) const {
    if (max_u_ != o.max_u_ || max_x_ != o.max_x_ || center_ != o.center_)
      throw invalid_input("series: operands have different truncation orders or centers");
  }

  std::size_t max_u_;
  std::size_t max_x_;
  Field center_;
  std::vector<Field> c_;
};

}  // namespace rperm
