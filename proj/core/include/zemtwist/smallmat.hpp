// Fixed-size dense linear algebra for the engagement models.
//
// Everything here is sized at compile time (N <= 6) and stored row-major in a
// std::array, so matrices are plain values that copy cheaply and never touch
// the heap. The matrix exponential is the numerically delicate piece: the
// integrated model carries 1/tau_s = 50 1/s entries and is evaluated at
// time-to-go values up to ~10 s, so a raw power series is useless there.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <utility>

#include "zemtwist/errors.hpp"

namespace zemtwist {

template <std::size_t N>
class Vec {
  static_assert(N >= 1 && N <= 6, "Vec supports dimensions 1..6");

 public:
  static constexpr std::size_t size() { return N; }

  constexpr Vec() = default;

  /// Throws InputDomainError on a length mismatch or a non-finite entry.
  Vec(std::initializer_list<double> values) {
    if (values.size() != N) {
      throw InputDomainError("Vec: initializer length does not match dimension");
    }
    std::copy(values.begin(), values.end(), data_.begin());
    require_finite();
  }

  constexpr double& operator[](std::size_t i) { return data_[i]; }
  constexpr double operator[](std::size_t i) const { return data_[i]; }

  constexpr const std::array<double, N>& data() const { return data_; }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
  }
  void require_finite() const {
    if (!all_finite()) throw InputDomainError("Vec: non-finite entry");
  }

  friend constexpr bool operator==(const Vec&, const Vec&) = default;

 private:
  std::array<double, N> data_{};
};

template <std::size_t N>
class Mat {
  static_assert(N >= 1 && N <= 6, "Mat supports dimensions 1..6");

 public:
  static constexpr std::size_t dim() { return N; }

  constexpr Mat() = default;

  /// Row-major initializer of exactly N*N finite entries.
  Mat(std::initializer_list<double> values) {
    if (values.size() != N * N) {
      throw InputDomainError("Mat: initializer length does not match dimension");
    }
    std::copy(values.begin(), values.end(), data_.begin());
    require_finite();
  }

  static constexpr Mat identity() {
    Mat m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  constexpr double& operator()(std::size_t r, std::size_t c) { return data_[r * N + c]; }
  constexpr double operator()(std::size_t r, std::size_t c) const { return data_[r * N + c]; }

  constexpr const std::array<double, N * N>& data() const { return data_; }

  Vec<N> row(std::size_t r) const {
    Vec<N> v;
    for (std::size_t c = 0; c < N; ++c) v[c] = (*this)(r, c);
    return v;
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
  }
  void require_finite() const {
    if (!all_finite()) throw InputDomainError("Mat: non-finite entry");
  }

  /// Maximum absolute column sum.
  double norm1() const {
    double best = 0.0;
    for (std::size_t c = 0; c < N; ++c) {
      double sum = 0.0;
      for (std::size_t r = 0; r < N; ++r) sum += std::abs((*this)(r, c));
      best = std::max(best, sum);
    }
    return best;
  }

  friend constexpr bool operator==(const Mat&, const Mat&) = default;

 private:
  std::array<double, N * N> data_{};
};

using Mat3 = Mat<3>;
using Mat4 = Mat<4>;
using Mat6 = Mat<6>;
using Vec3 = Vec<3>;
using Vec4 = Vec<4>;
using Vec6 = Vec<6>;

template <std::size_t N>
constexpr Mat<N> identity() {
  return Mat<N>::identity();
}

template <std::size_t N>
Mat<N> mat_mul(const Mat<N>& a, const Mat<N>& b) {
  Mat<N> out;
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t k = 0; k < N; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < N; ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

template <std::size_t N>
Vec<N> mat_vec(const Mat<N>& a, const Vec<N>& x) {
  Vec<N> out;
  for (std::size_t i = 0; i < N; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < N; ++j) sum += a(i, j) * x[j];
    out[i] = sum;
  }
  return out;
}

template <std::size_t N>
double dot(const Vec<N>& a, const Vec<N>& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < N; ++i) sum += a[i] * b[i];
  return sum;
}

template <std::size_t N>
Mat<N> operator+(const Mat<N>& a, const Mat<N>& b) {
  Mat<N> out;
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t c = 0; c < N; ++c) out(r, c) = a(r, c) + b(r, c);
  return out;
}

template <std::size_t N>
Mat<N> operator-(const Mat<N>& a, const Mat<N>& b) {
  Mat<N> out;
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t c = 0; c < N; ++c) out(r, c) = a(r, c) - b(r, c);
  return out;
}

template <std::size_t N>
Mat<N> operator*(double s, const Mat<N>& a) {
  Mat<N> out;
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t c = 0; c < N; ++c) out(r, c) = s * a(r, c);
  return out;
}

template <std::size_t N>
Vec<N> operator*(double s, const Vec<N>& v) {
  Vec<N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = s * v[i];
  return out;
}

template <std::size_t N>
Vec<N> operator+(const Vec<N>& a, const Vec<N>& b) {
  Vec<N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = a[i] + b[i];
  return out;
}

/// Solves A X = B for X with Gaussian elimination and partial pivoting.
/// Throws InputDomainError when A is numerically singular.
template <std::size_t N>
Mat<N> solve(Mat<N> a, Mat<N> b) {
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t pivot = col;
    double best = std::abs(a(col, col));
    for (std::size_t r = col + 1; r < N; ++r) {
      if (std::abs(a(r, col)) > best) {
        best = std::abs(a(r, col));
        pivot = r;
      }
    }
    if (best == 0.0 || !std::isfinite(best)) throw InputDomainError("solve: singular matrix");
    if (pivot != col) {
      for (std::size_t c = 0; c < N; ++c) {
        std::swap(a(col, c), a(pivot, c));
        std::swap(b(col, c), b(pivot, c));
      }
    }
    for (std::size_t r = col + 1; r < N; ++r) {
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (std::size_t c = col; c < N; ++c) a(r, c) -= f * a(col, c);
      for (std::size_t c = 0; c < N; ++c) b(r, c) -= f * b(col, c);
    }
  }
  for (std::size_t ri = N; ri-- > 0;) {
    for (std::size_t c = 0; c < N; ++c) {
      double sum = b(ri, c);
      for (std::size_t k = ri + 1; k < N; ++k) sum -= a(ri, k) * b(k, c);
      b(ri, c) = sum / a(ri, ri);
    }
  }
  return b;
}

namespace detail {

// Scaled argument norm bound. Below 0.5 the (7,7) Pade approximant is
// accurate to double-precision unit roundoff.
inline constexpr double kExpScaledNorm = 0.5;

template <std::size_t N>
Mat<N> pade7(const Mat<N>& a) {
  constexpr double b[] = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                          25200.0,    1512.0,    56.0,      1.0};
  const Mat<N> eye = Mat<N>::identity();
  const Mat<N> a2 = mat_mul(a, a);
  const Mat<N> a4 = mat_mul(a2, a2);
  const Mat<N> a6 = mat_mul(a4, a2);
  const Mat<N> odd = b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * eye;
  const Mat<N> u = mat_mul(a, odd);
  const Mat<N> v = b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * eye;
  return solve(v - u, v + u);
}

}  // namespace detail

/// exp(A t) by scaling and squaring around a (7,7) Pade core.
///
/// The squaring count is the smallest s with ||A t||_1 / 2^s <= 0.5.
/// t == 0 returns the identity exactly.
template <std::size_t N>
Mat<N> mat_exp(const Mat<N>& a, double t) {
  if (!std::isfinite(t)) throw InputDomainError("mat_exp: non-finite time argument");
  a.require_finite();
  if (t == 0.0) return Mat<N>::identity();

  Mat<N> scaled = t * a;
  const double norm = scaled.norm1();
  if (!std::isfinite(norm)) throw InputDomainError("mat_exp: overflow in scaled argument");

  int squarings = 0;
  if (norm > detail::kExpScaledNorm) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / detail::kExpScaledNorm)));
    scaled = std::ldexp(1.0, -squarings) * scaled;
  }
  Mat<N> result = detail::pade7(scaled);
  for (int i = 0; i < squarings; ++i) result = mat_mul(result, result);
  return result;
}

}  // namespace zemtwist
