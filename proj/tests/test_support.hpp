#pragma once

// Brute-force oracles shared by the unit tests and the acceptance driver.
// Everything here is deliberately naive -- cofactor expansions, explicit
// loops, a fixed-grid Simpson rule -- so the checks share no code with the
// library paths they certify beyond primitive arithmetic.

#include <cmath>
#include <string_view>
#include <utility>

#include "parsim/rng.hpp"
#include "parsim/types.hpp"

namespace test_support {

using parsim::Index;
using parsim::Matrix;
using parsim::Vector;

// Determinant by recursive cofactor expansion along the first row. O(n!),
// fine for the m <= 6 matrices the tests use.
inline double cofactor_det(const Matrix<double>& a) {
  const Index n = a.rows();
  if (n == 1) return a(0, 0);
  double det = 0.0;
  double sign = 1.0;
  for (Index j = 0; j < n; ++j) {
    Matrix<double> minor(n - 1, n - 1);
    for (Index r = 1; r < n; ++r) {
      Index mc = 0;
      for (Index c = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, mc++) = a(r, c);
      }
    }
    det += sign * a(0, j) * cofactor_det(minor);
    sign = -sign;
  }
  return det;
}

// Adjugate inverse built from the same cofactor determinant.
inline Matrix<double> cofactor_inverse(const Matrix<double>& a) {
  const Index n = a.rows();
  const double det = cofactor_det(a);
  Matrix<double> inv(n, n);
  if (n == 1) {
    inv(0, 0) = 1.0 / det;
    return inv;
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      Matrix<double> minor(n - 1, n - 1);
      Index mr = 0;
      for (Index r = 0; r < n; ++r) {
        if (r == i) continue;
        Index mc = 0;
        for (Index c = 0; c < n; ++c) {
          if (c == j) continue;
          minor(mr, mc++) = a(r, c);
        }
        ++mr;
      }
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      inv(j, i) = sign * cofactor_det(minor) / det;  // transposed cofactor
    }
  }
  return inv;
}

// X'X by explicit triple loop (no Eigen products).
inline Matrix<double> gram_by_loops(const Matrix<double>& x) {
  Matrix<double> g(x.cols(), x.cols());
  for (Index i = 0; i < x.cols(); ++i) {
    for (Index j = 0; j < x.cols(); ++j) {
      double s = 0.0;
      for (Index r = 0; r < x.rows(); ++r) s += x(r, i) * x(r, j);
      g(i, j) = s;
    }
  }
  return g;
}

// Composite Simpson on a fixed even grid; independent of the library's
// adaptive quadrature.
template <typename F>
double simpson_grid(F&& f, double a, double b, int panels) {
  const double h = (b - a) / (2.0 * panels);
  double sum = f(a) + f(b);
  for (int i = 1; i < 2 * panels; ++i) {
    sum += (i % 2 == 1 ? 4.0 : 2.0) * f(a + h * i);
  }
  return sum * h / 3.0;
}

// Random regression instance with standard-normal predictors (plus an
// intercept column when requested) and y = X * beta + noise.
struct Instance {
  Matrix<double> x;
  Vector<double> y;
};

inline Instance random_instance(parsim::NormalStream& stream, Index n, Index m,
                                double noise_scale = 1.0, bool intercept = false) {
  Instance inst;
  inst.x.resize(n, m);
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < n; ++i) {
      inst.x(i, j) = (intercept && j == 0) ? 1.0 : stream.normal();
    }
  }
  Vector<double> beta(m);
  for (Index j = 0; j < m; ++j) beta(j) = stream.normal();
  inst.y = inst.x * beta;
  for (Index i = 0; i < n; ++i) inst.y(i) += noise_scale * stream.normal();
  return inst;
}

}  // namespace test_support
