#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "parsim/errors.hpp"
#include "parsim/types.hpp"

namespace parsim {

// Column-oriented table of finite numeric values. Columns are appended while
// the dataset is assembled (e.g. by the CSV reader) and the table is treated
// as immutable afterwards, so const access is safe to share across threads.
template <typename Scalar>
class Dataset {
 public:
  Dataset() = default;

  void add_column(std::string name, Vector<Scalar> values) {
    if (name.empty()) {
      throw ValidationError("dataset column name must not be empty");
    }
    if (index_.count(name) != 0) {
      throw ValidationError("duplicate dataset column '" + name + "'");
    }
    if (!values.allFinite()) {
      throw NonFiniteError("dataset column '" + name + "' contains a non-finite value");
    }
    if (!columns_.empty() && values.size() != rows()) {
      throw DimensionMismatchError("dataset column '" + name + "' has " +
                                   std::to_string(values.size()) + " rows, expected " +
                                   std::to_string(rows()));
    }
    index_.emplace(name, columns_.size());
    names_.push_back(name);
    columns_.push_back(std::move(values));
  }

  Index rows() const { return columns_.empty() ? 0 : columns_.front().size(); }
  Index n_columns() const { return static_cast<Index>(columns_.size()); }

  bool has_column(const std::string& name) const { return index_.count(name) != 0; }

  const Vector<Scalar>& column(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) {
      throw UnknownColumnError("unknown dataset column '" + name + "'");
    }
    return columns_[it->second];
  }

  const std::vector<std::string>& column_names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::vector<Vector<Scalar>> columns_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace parsim
