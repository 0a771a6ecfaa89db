#pragma once

#include <array>
#include <cmath>

#include "mhdbl/errors.hpp"

namespace mhdbl {

struct Vec3 {
  std::array<double, 3> v{0.0, 0.0, 0.0};
  double& operator[](int i) { return v[static_cast<size_t>(i)]; }
  double operator[](int i) const { return v[static_cast<size_t>(i)]; }

  Vec3 operator+(const Vec3& o) const { return {{v[0] + o.v[0], v[1] + o.v[1], v[2] + o.v[2]}}; }
  Vec3 operator-(const Vec3& o) const { return {{v[0] - o.v[0], v[1] - o.v[1], v[2] - o.v[2]}}; }
  Vec3 operator*(double s) const { return {{v[0] * s, v[1] * s, v[2] * s}}; }
};

struct Mat3 {
  // row-major
  std::array<double, 9> m{};

  double& operator()(int r, int c) { return m[static_cast<size_t>(3 * r + c)]; }
  double operator()(int r, int c) const { return m[static_cast<size_t>(3 * r + c)]; }

  static Mat3 zero() { return Mat3{}; }
  static Mat3 identity() {
    Mat3 a;
    a(0, 0) = a(1, 1) = a(2, 2) = 1.0;
    return a;
  }
  static Mat3 diag(double d0, double d1, double d2) {
    Mat3 a;
    a(0, 0) = d0;
    a(1, 1) = d1;
    a(2, 2) = d2;
    return a;
  }

  Mat3 operator+(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.m[static_cast<size_t>(i)] = m[static_cast<size_t>(i)] + o.m[static_cast<size_t>(i)];
    return r;
  }
  Mat3 operator-(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.m[static_cast<size_t>(i)] = m[static_cast<size_t>(i)] - o.m[static_cast<size_t>(i)];
    return r;
  }
  Mat3 operator*(double s) const {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.m[static_cast<size_t>(i)] = m[static_cast<size_t>(i)] * s;
    return r;
  }
  Mat3 operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
        r(i, j) = s;
      }
    return r;
  }
  Vec3 operator*(const Vec3& x) const {
    Vec3 r;
    for (int i = 0; i < 3; ++i)
      r[i] = (*this)(i, 0) * x[0] + (*this)(i, 1) * x[1] + (*this)(i, 2) * x[2];
    return r;
  }

  Mat3 transposed() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
    return r;
  }

  double det() const {
    return (*this)(0, 0) * ((*this)(1, 1) * (*this)(2, 2) - (*this)(1, 2) * (*this)(2, 1)) -
           (*this)(0, 1) * ((*this)(1, 0) * (*this)(2, 2) - (*this)(1, 2) * (*this)(2, 0)) +
           (*this)(0, 2) * ((*this)(1, 0) * (*this)(2, 1) - (*this)(1, 1) * (*this)(2, 0));
  }

  // Closed-form adjugate inverse with a determinant floor.
  Mat3 inverse(double det_floor = 1e-10) const {
    const double d = det();
    if (std::abs(d) < det_floor) {
      throw degeneracy_error("3x3 inverse: |det| below floor");
    }
    const double id = 1.0 / d;
    Mat3 r;
    r(0, 0) = ((*this)(1, 1) * (*this)(2, 2) - (*this)(1, 2) * (*this)(2, 1)) * id;
    r(0, 1) = ((*this)(0, 2) * (*this)(2, 1) - (*this)(0, 1) * (*this)(2, 2)) * id;
    r(0, 2) = ((*this)(0, 1) * (*this)(1, 2) - (*this)(0, 2) * (*this)(1, 1)) * id;
    r(1, 0) = ((*this)(1, 2) * (*this)(2, 0) - (*this)(1, 0) * (*this)(2, 2)) * id;
    r(1, 1) = ((*this)(0, 0) * (*this)(2, 2) - (*this)(0, 2) * (*this)(2, 0)) * id;
    r(1, 2) = ((*this)(0, 2) * (*this)(1, 0) - (*this)(0, 0) * (*this)(1, 2)) * id;
    r(2, 0) = ((*this)(1, 0) * (*this)(2, 1) - (*this)(1, 1) * (*this)(2, 0)) * id;
    r(2, 1) = ((*this)(0, 1) * (*this)(2, 0) - (*this)(0, 0) * (*this)(2, 1)) * id;
    r(2, 2) = ((*this)(0, 0) * (*this)(1, 1) - (*this)(0, 1) * (*this)(1, 0)) * id;
    return r;
  }

  double max_abs() const {
    double r = 0.0;
    for (double x : m) r = std::max(r, std::abs(x));
    return r;
  }

  double asymmetry() const {  // max |M - M^T| entry
    double r = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        r = std::max(r, std::abs((*this)(i, j) - (*this)(j, i)));
    return r;
  }

  double max_offdiag_abs() const {
    double r = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j) r = std::max(r, std::abs((*this)(i, j)));
    return r;
  }
};

}  // namespace mhdbl
