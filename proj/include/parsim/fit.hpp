#pragma once

#include <cmath>
#include <string>

#include "parsim/design.hpp"
#include "parsim/errors.hpp"
#include "parsim/types.hpp"

namespace parsim {

template <typename Scalar>
struct FitResult {
  Vector<Scalar> beta_hat;     // least-squares coefficients (size m)
  Vector<Scalar> y_hat;        // fitted values X beta_hat (size n)
  Scalar residual_norm = 0;    // ||y - y_hat||
  Index n = 0;
  Index m = 0;
};

// Least-squares fit via the Cholesky factor of X'X held by the design.
template <typename Scalar>
FitResult<Scalar> fit(const DesignMatrix<Scalar>& design, const Vector<Scalar>& y) {
  if (y.size() != design.rows()) {
    throw DimensionMismatchError("fit: y has " + std::to_string(y.size()) + " entries but X has " +
                                 std::to_string(design.rows()) + " rows");
  }
  if (!y.allFinite()) {
    throw NonFiniteError("fit: y contains a non-finite value");
  }

  FitResult<Scalar> result;
  result.n = design.rows();
  result.m = design.cols();
  result.beta_hat = design.solve_gram(design.entries().transpose() * y);
  result.y_hat = design.entries() * result.beta_hat;
  result.residual_norm = (y - result.y_hat).norm();
  return result;
}

// Fit of the empty model (m = 0, y_hat = 0); its residual norm is ||y||.
template <typename Scalar>
FitResult<Scalar> fit_empty(const Vector<Scalar>& y) {
  if (y.size() < 1) {
    throw DimensionMismatchError("fit_empty: y is empty");
  }
  if (!y.allFinite()) {
    throw NonFiniteError("fit_empty: y contains a non-finite value");
  }
  FitResult<Scalar> result;
  result.n = y.size();
  result.m = 0;
  result.beta_hat = Vector<Scalar>(0);
  result.y_hat = Vector<Scalar>::Zero(y.size());
  result.residual_norm = y.norm();
  return result;
}

template <typename Scalar>
struct QuadraticDecomposition {
  Scalar residual_part;     // ||y - X beta_hat||^2
  Scalar coefficient_part;  // (beta - beta_hat)' X'X (beta - beta_hat)
  Scalar total() const { return residual_part + coefficient_part; }
};

// Splits ||y - X beta||^2 into the residual sum of squares at the fit plus
// the Gram quadratic form in (beta - beta_hat); their sum reproduces the
// misfit at any beta because the residual at the fit is orthogonal to col(X).
template <typename Scalar>
QuadraticDecomposition<Scalar> decompose_quadratic(const DesignMatrix<Scalar>& design,
                                                   const Vector<Scalar>& y,
                                                   const Vector<Scalar>& beta) {
  if (beta.size() != design.cols()) {
    throw DimensionMismatchError("decompose_quadratic: beta has " + std::to_string(beta.size()) +
                                 " entries, expected " + std::to_string(design.cols()));
  }
  const FitResult<Scalar> ls = fit(design, y);
  QuadraticDecomposition<Scalar> parts;
  parts.residual_part = ls.residual_norm * ls.residual_norm;
  parts.coefficient_part = design.quadratic_form(beta - ls.beta_hat);
  return parts;
}

}  // namespace parsim
