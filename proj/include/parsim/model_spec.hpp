#pragma once

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "parsim/errors.hpp"

namespace parsim {

// One symbolic regressor. A term may expand to several design-matrix columns:
// a polynomial of degree d contributes x^1 .. x^d, a truncated-power spline
// contributes max(x - t, 0)^d for each knot t.
template <typename Scalar>
struct BasisTerm {
  enum class Kind { Intercept, Raw, Polynomial, Spline };

  Kind kind = Kind::Intercept;
  std::string column;          // empty for intercept terms
  int degree = 1;              // polynomial: highest power; spline: power
  std::vector<Scalar> knots;   // spline only, strictly increasing

  static BasisTerm intercept() { return BasisTerm{}; }

  static BasisTerm raw(std::string col) {
    return BasisTerm{Kind::Raw, std::move(col), 1, {}};
  }

  static BasisTerm polynomial(std::string col, int degree) {
    return BasisTerm{Kind::Polynomial, std::move(col), degree, {}};
  }

  static BasisTerm spline(std::string col, int degree, std::vector<Scalar> knots) {
    return BasisTerm{Kind::Spline, std::move(col), degree, std::move(knots)};
  }

  // Number of design-matrix columns the term expands to.
  int width() const {
    switch (kind) {
      case Kind::Intercept:
      case Kind::Raw:
        return 1;
      case Kind::Polynomial:
        return degree;
      case Kind::Spline:
        return static_cast<int>(knots.size());
    }
    return 0;
  }
};

template <typename Scalar>
struct ModelSpec {
  std::string label;
  std::string response;
  std::vector<BasisTerm<Scalar>> terms;

  int design_width() const {
    int m = 0;
    for (const auto& term : terms) m += term.width();
    return m;
  }
};

namespace detail {

template <typename Scalar>
std::string format_knot(Scalar knot) {
  std::ostringstream out;
  out << knot;
  return out.str();
}

}  // namespace detail

// Human-readable labels for the columns a term expands to, in expansion order.
template <typename Scalar>
std::vector<std::string> term_column_labels(const BasisTerm<Scalar>& term) {
  using Kind = typename BasisTerm<Scalar>::Kind;
  std::vector<std::string> labels;
  switch (term.kind) {
    case Kind::Intercept:
      labels.push_back("intercept");
      break;
    case Kind::Raw:
      labels.push_back(term.column);
      break;
    case Kind::Polynomial:
      for (int p = 1; p <= term.degree; ++p) {
        labels.push_back(p == 1 ? term.column : term.column + "^" + std::to_string(p));
      }
      break;
    case Kind::Spline:
      for (const Scalar knot : term.knots) {
        labels.push_back("(" + term.column + "-" + detail::format_knot(knot) + ")+^" +
                         std::to_string(term.degree));
      }
      break;
  }
  return labels;
}

}  // namespace parsim
