#pragma once

#include <string>
#include <vector>

#include "parsim/model_spec.hpp"

namespace parsim {

// Parses the declarative model-spec format: one `response:` line followed
// by one or more `model:` blocks, each listing `term:` lines. `#` starts a
// comment. Term syntax: intercept | raw(col) | poly(col, degree) |
// spline(col, degree, knot, ...).
//
// Malformed syntax raises ParseError with "origin:line"; duplicate model
// labels raise ValidationError.
std::vector<ModelSpec<double>> parse_model_file(const std::string& text,
                                                const std::string& origin);
std::vector<ModelSpec<double>> read_model_file(const std::string& path);

// Renders one spec back into the text format (used for round-trip tests
// and for echoing parsed models in diagnostics).
std::string format_model_spec(const ModelSpec<double>& spec);

}  // namespace parsim
