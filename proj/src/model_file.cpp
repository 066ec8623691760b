#include "parsim/model_file.hpp"

#include <cctype>
#include <charconv>
#include <sstream>
#include <utility>

#include "parsim/csv.hpp"
#include "parsim/errors.hpp"

namespace parsim {

namespace {

std::string trimmed(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_args(const std::string& body) {
  std::vector<std::string> args;
  std::string current;
  for (const char c : body) {
    if (c == ',') {
      args.push_back(trimmed(current));
      current.clear();
    } else {
      current += c;
    }
  }
  args.push_back(trimmed(current));
  return args;
}

int parse_degree(const std::string& token, const std::string& where) {
  int degree = 0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto [ptr, ec] = std::from_chars(begin, end, degree);
  if (ec != std::errc() || ptr != end || token.empty()) {
    throw ParseError(where + ": cannot parse degree '" + token + "'");
  }
  return degree;
}

BasisTerm<double> parse_term(const std::string& value, const std::string& where) {
  if (value == "intercept") {
    return BasisTerm<double>::intercept();
  }
  const std::size_t open = value.find('(');
  if (open == std::string::npos || value.back() != ')') {
    throw ParseError(where + ": term '" + value +
                     "' is not intercept, raw(col), poly(col, degree), or "
                     "spline(col, degree, knots...)");
  }
  const std::string name = trimmed(value.substr(0, open));
  const std::vector<std::string> args =
      split_args(value.substr(open + 1, value.size() - open - 2));
  if (args.front().empty()) {
    throw ParseError(where + ": term '" + value + "' needs a column name first");
  }

  if (name == "raw") {
    if (args.size() != 1) {
      throw ParseError(where + ": raw takes exactly one column argument");
    }
    return BasisTerm<double>::raw(args.front());
  }
  if (name == "poly") {
    if (args.size() != 2) {
      throw ParseError(where + ": poly takes a column and a degree");
    }
    return BasisTerm<double>::polynomial(args.front(), parse_degree(args[1], where));
  }
  if (name == "spline") {
    if (args.size() < 3) {
      throw ParseError(where + ": spline takes a column, a degree, and at least one knot");
    }
    std::vector<double> knots;
    for (std::size_t i = 2; i < args.size(); ++i) {
      knots.push_back(parse_number(args[i], where + ", knot " + std::to_string(i - 1)));
    }
    return BasisTerm<double>::spline(args.front(), parse_degree(args[1], where),
                                     std::move(knots));
  }
  throw ParseError(where + ": unknown term kind '" + name + "'");
}

}  // namespace

std::vector<ModelSpec<double>> parse_model_file(const std::string& text,
                                                const std::string& origin) {
  std::vector<ModelSpec<double>> models;
  std::string response;
  bool saw_response = false;

  std::istringstream lines(text);
  std::string raw_line;
  std::size_t line_no = 0;
  while (std::getline(lines, raw_line)) {
    ++line_no;
    const std::string where = origin + ":" + std::to_string(line_no);
    const std::size_t comment = raw_line.find('#');
    if (comment != std::string::npos) {
      raw_line.erase(comment);
    }
    const std::string line = trimmed(raw_line);
    if (line.empty()) {
      continue;
    }
    const std::size_t colon = line.find(':');
    if (colon == std::string::npos) {
      throw ParseError(where + ": expected 'key: value', got '" + line + "'");
    }
    const std::string key = trimmed(line.substr(0, colon));
    const std::string value = trimmed(line.substr(colon + 1));
    if (value.empty()) {
      throw ParseError(where + ": '" + key + ":' has no value");
    }

    if (key == "response") {
      if (saw_response) {
        throw ParseError(where + ": response is declared twice");
      }
      response = value;
      saw_response = true;
    } else if (key == "model") {
      if (!saw_response) {
        throw ParseError(where + ": declare 'response:' before the first model");
      }
      if (!models.empty() && models.back().terms.empty()) {
        throw ParseError(where + ": model '" + models.back().label + "' has no terms");
      }
      for (const auto& model : models) {
        if (model.label == value) {
          throw ValidationError("duplicate model label '" + value + "' (" + where + ")");
        }
      }
      models.push_back(ModelSpec<double>{value, response, {}});
    } else if (key == "term") {
      if (models.empty()) {
        throw ParseError(where + ": 'term:' before any 'model:'");
      }
      models.back().terms.push_back(parse_term(value, where));
    } else {
      throw ParseError(where + ": unknown key '" + key + "'");
    }
  }

  if (!saw_response) {
    throw ParseError(origin + ": missing 'response:' declaration");
  }
  if (models.empty()) {
    throw ParseError(origin + ": no models declared");
  }
  if (models.back().terms.empty()) {
    throw ParseError(origin + ": model '" + models.back().label + "' has no terms");
  }
  return models;
}

std::vector<ModelSpec<double>> read_model_file(const std::string& path) {
  return parse_model_file(read_file_bytes(path), path);
}

std::string format_model_spec(const ModelSpec<double>& spec) {
  using Kind = BasisTerm<double>::Kind;
  std::string out = "model: " + spec.label + "\n";
  for (const auto& term : spec.terms) {
    switch (term.kind) {
      case Kind::Intercept:
        out += "term: intercept\n";
        break;
      case Kind::Raw:
        out += "term: raw(" + term.column + ")\n";
        break;
      case Kind::Polynomial:
        out += "term: poly(" + term.column + ", " + std::to_string(term.degree) + ")\n";
        break;
      case Kind::Spline: {
        out += "term: spline(" + term.column + ", " + std::to_string(term.degree);
        for (const double knot : term.knots) {
          out += ", " + format_number(knot);
        }
        out += ")\n";
        break;
      }
    }
  }
  return out;
}

}  // namespace parsim
