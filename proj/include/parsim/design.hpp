#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "parsim/dataset.hpp"
#include "parsim/errors.hpp"
#include "parsim/model_spec.hpp"
#include "parsim/types.hpp"

namespace parsim {

// Full-column-rank design matrix with its Gram matrix X'X factorized once.
// Construction rejects rank-deficient designs: an eigenvalue of X'X below
// 1e-10 times the largest counts as zero. Immutable after construction.
template <typename Scalar>
class DesignMatrix {
 public:
  explicit DesignMatrix(Matrix<Scalar> entries, std::vector<std::string> column_labels = {})
      : entries_(std::move(entries)), labels_(std::move(column_labels)) {
    if (entries_.cols() < 1) {
      throw DimensionMismatchError("design matrix needs at least one column");
    }
    if (entries_.rows() < 1) {
      throw DimensionMismatchError("design matrix needs at least one row");
    }
    if (!labels_.empty() && static_cast<Index>(labels_.size()) != entries_.cols()) {
      throw DimensionMismatchError("design matrix has " + std::to_string(entries_.cols()) +
                                   " columns but " + std::to_string(labels_.size()) + " labels");
    }
    if (!entries_.allFinite()) {
      throw NonFiniteError("design matrix contains a non-finite entry");
    }

    gram_ = Matrix<Scalar>::Zero(entries_.cols(), entries_.cols());
    gram_.template selfadjointView<Eigen::Lower>().rankUpdate(entries_.adjoint());
    gram_ = gram_.template selfadjointView<Eigen::Lower>();

    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eigen(gram_, Eigen::EigenvaluesOnly);
    const Vector<Scalar>& eigenvalues = eigen.eigenvalues();  // ascending
    const Scalar largest = eigenvalues(eigenvalues.size() - 1);
    const Scalar cutoff = Scalar(1e-10) * largest;
    if (largest <= Scalar(0) || eigenvalues(0) < cutoff) {
      throw RankDeficientError("design matrix is rank deficient (" +
                               std::to_string(entries_.rows()) + "x" +
                               std::to_string(entries_.cols()) + ")");
    }

    llt_.compute(gram_);
    if (llt_.info() != Eigen::Success) {
      throw RankDeficientError("Cholesky factorization of X'X failed");
    }
    gram_logdet_ = Scalar(2) * llt_.matrixLLT().diagonal().array().log().sum();
    column_norms_ = entries_.colwise().norm();
  }

  Index rows() const { return entries_.rows(); }
  Index cols() const { return entries_.cols(); }

  const Matrix<Scalar>& entries() const { return entries_; }
  const Matrix<Scalar>& gram() const { return gram_; }
  const std::vector<std::string>& column_labels() const { return labels_; }
  const Vector<Scalar>& column_norms() const { return column_norms_; }

  // log det(X'X); finite by the full-rank invariant.
  Scalar gram_logdet() const { return gram_logdet_; }

  // Solves (X'X) v = rhs.
  Vector<Scalar> solve_gram(const Vector<Scalar>& rhs) const {
    if (rhs.size() != cols()) {
      throw DimensionMismatchError("solve_gram: rhs has " + std::to_string(rhs.size()) +
                                   " entries, expected " + std::to_string(cols()));
    }
    return llt_.solve(rhs);
  }

  // v' (X'X) v, the metric that defines the prior ellipsoid.
  Scalar quadratic_form(const Vector<Scalar>& v) const {
    if (v.size() != cols()) {
      throw DimensionMismatchError("quadratic_form: vector has " + std::to_string(v.size()) +
                                   " entries, expected " + std::to_string(cols()));
    }
    return v.dot(gram_ * v);
  }

 private:
  Matrix<Scalar> entries_;
  std::vector<std::string> labels_;
  Matrix<Scalar> gram_;
  Eigen::LLT<Matrix<Scalar>> llt_;
  Scalar gram_logdet_ = Scalar(0);
  Vector<Scalar> column_norms_;
};

template <typename Scalar>
Scalar gram_logdet(const DesignMatrix<Scalar>& design) {
  return design.gram_logdet();
}

// Classical (non-normalized) Gram-Schmidt. Returns a matrix with mutually
// orthogonal columns spanning the same space, so that the product of the
// returned column norms equals det(X'X)^(1/2).
template <typename Scalar>
Matrix<Scalar> gram_schmidt(const Matrix<Scalar>& x) {
  Matrix<Scalar> q = x;
  for (Index j = 0; j < q.cols(); ++j) {
    for (Index i = 0; i < j; ++i) {
      const Scalar denom = q.col(i).squaredNorm();
      q.col(j) -= (q.col(i).dot(q.col(j)) / denom) * q.col(i);
    }
    if (!(q.col(j).norm() > Scalar(1e-12) * x.col(j).norm())) {
      throw RankDeficientError("Gram-Schmidt: column " + std::to_string(j) +
                               " is linearly dependent on earlier columns");
    }
  }
  return q;
}

template <typename Scalar>
Matrix<Scalar> gram_schmidt(const DesignMatrix<Scalar>& design) {
  return gram_schmidt(design.entries());
}

// Expands a symbolic model into a numeric design matrix over the dataset.
// Columns appear in term order; multi-column terms expand in place.
template <typename Scalar>
DesignMatrix<Scalar> build_design_matrix(const Dataset<Scalar>& data,
                                         const ModelSpec<Scalar>& spec) {
  using Kind = typename BasisTerm<Scalar>::Kind;
  if (spec.terms.empty()) {
    throw ValidationError("model '" + spec.label + "' has no terms");
  }
  if (data.rows() < 1) {
    throw ValidationError("dataset has no rows");
  }

  const Index n = data.rows();
  const Index m = spec.design_width();
  Matrix<Scalar> x(n, m);
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(m));

  Index col = 0;
  for (const auto& term : spec.terms) {
    switch (term.kind) {
      case Kind::Intercept:
        x.col(col++).setOnes();
        break;
      case Kind::Raw:
        x.col(col++) = data.column(term.column);
        break;
      case Kind::Polynomial: {
        if (term.degree < 1) {
          throw ValidationError("polynomial term on '" + term.column +
                                "' needs degree >= 1, got " + std::to_string(term.degree));
        }
        const Vector<Scalar>& base = data.column(term.column);
        x.col(col) = base;
        for (int p = 2; p <= term.degree; ++p) {
          x.col(col + p - 1) = x.col(col + p - 2).cwiseProduct(base);
        }
        col += term.degree;
        break;
      }
      case Kind::Spline: {
        if (term.degree < 1) {
          throw ValidationError("spline term on '" + term.column + "' needs degree >= 1, got " +
                                std::to_string(term.degree));
        }
        if (term.knots.empty()) {
          throw ValidationError("spline term on '" + term.column + "' has no knots");
        }
        const Vector<Scalar>& base = data.column(term.column);
        const Scalar lo = base.minCoeff();
        const Scalar hi = base.maxCoeff();
        for (std::size_t i = 0; i < term.knots.size(); ++i) {
          const Scalar knot = term.knots[i];
          if (i > 0 && !(term.knots[i - 1] < knot)) {
            throw ValidationError("spline knots on '" + term.column +
                                  "' must be strictly increasing");
          }
          if (!(knot > lo && knot < hi)) {
            throw ValidationError("spline knot " + detail::format_knot(knot) + " on '" +
                                  term.column + "' lies outside the open data range (" +
                                  detail::format_knot(lo) + ", " + detail::format_knot(hi) + ")");
          }
          const Vector<Scalar> shifted = (base.array() - knot).max(Scalar(0)).matrix();
          Vector<Scalar> powered = shifted;
          for (int p = 2; p <= term.degree; ++p) {
            powered = powered.cwiseProduct(shifted);
          }
          x.col(col++) = powered;
        }
        break;
      }
    }
    const auto term_labels = term_column_labels(term);
    labels.insert(labels.end(), term_labels.begin(), term_labels.end());
  }

  return DesignMatrix<Scalar>(std::move(x), std::move(labels));
}

}  // namespace parsim
