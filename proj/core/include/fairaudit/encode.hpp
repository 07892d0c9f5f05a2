#pragma once

#include <string>
#include <vector>

#include "fairaudit/common.hpp"
#include "fairaudit/dataset.hpp"

namespace fairaudit {

/// Maps a Dataset to a dense numeric matrix. Numeric columns pass through;
/// categorical columns become one 0/1 column per category, named
/// "<column>_<value>". Feature order follows schema order, categories in
/// their sorted order. The encoder is fit on one dataset and can then be
/// applied to any dataset with the same schema, so train and test land in
/// the same feature space.
class Encoder {
 public:
  struct Options {
    bool include_protected = true;
  };

  static Encoder fit(const Dataset& ds, Options opts);
  static Encoder fit(const Dataset& ds) { return fit(ds, Options{}); }

  Matrix transform(const Dataset& ds) const;

  const std::vector<std::string>& feature_names() const { return names_; }
  std::size_t feature_count() const { return names_.size(); }

  /// Indices of encoded columns that came from the protected attribute
  /// (empty when include_protected is false or for numeric protected columns).
  const std::vector<std::size_t>& protected_features() const { return protected_features_; }

 private:
  struct Source {
    int column;        // schema column index
    int category;      // -1 for numeric pass-through
  };
  std::vector<Source> sources_;
  std::vector<std::string> names_;
  std::vector<std::size_t> protected_features_;
};

/// Per-column (x - min) / (max - min) using training bounds; constant
/// columns map to 0. Values outside the training range are not clamped.
class MinMaxScaler {
 public:
  static MinMaxScaler fit(const Matrix& m);
  Matrix transform(const Matrix& m) const;

 private:
  std::vector<double> min_, scale_;
};

/// Per-column (x - mean) / stddev using training moments; constant columns
/// keep a unit divisor.
class Standardizer {
 public:
  static Standardizer fit(const Matrix& m);
  Matrix transform(const Matrix& m) const;

 private:
  std::vector<double> mean_, scale_;
};

}  // namespace fairaudit
