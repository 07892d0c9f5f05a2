#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fairaudit/common.hpp"

namespace fairaudit {

enum class ColumnKind { numeric, categorical };

/// Typed description of a tabular dataset: feature columns, the binary label
/// and its favorable value, and the protected attribute with its privileged
/// value set.
struct Schema {
  struct Column {
    std::string name;
    ColumnKind kind = ColumnKind::numeric;
    /// Observed values for categorical columns, deduplicated and sorted so
    /// the encoded column order is a pure function of the schema.
    std::vector<std::string> categories;
  };

  std::vector<Column> columns;
  std::string label_column;
  std::string favorable_value;
  std::string protected_attribute;
  std::vector<std::string> privileged_values;

  int column_index(const std::string& name) const;
  const Column& column(const std::string& name) const;
};

/// Immutable tabular dataset. Values are stored column-wise; categorical
/// cells hold indices into the schema's category list. y is 1 for the
/// favorable label.
struct Dataset {
  Schema schema;
  std::vector<std::vector<double>> numeric;        // per numeric column
  std::vector<std::vector<std::int32_t>> categorical;  // per categorical column
  /// Position of each schema column inside numeric[] or categorical[].
  std::vector<std::size_t> slot;
  std::vector<std::uint8_t> y;

  std::size_t n() const { return y.size(); }

  const std::vector<double>& numeric_column(const std::string& name) const;
  const std::vector<std::int32_t>& categorical_column(const std::string& name) const;
  /// Category string of record `row` in categorical column `col`.
  const std::string& category_of(std::size_t col_index, std::size_t row) const;

  /// Row subset in the given index order (schema unchanged).
  Dataset subset(const std::vector<std::size_t>& idx) const;
};

enum class RegisteredName { adult, bank, utrecht };

RegisteredName registered_name_from(const std::string& s);

/// Optional overrides for the registry defaults.
struct LoadOverrides {
  std::string label_column;            // empty = registry default
  std::string favorable_value;
  std::string protected_attribute;
  std::vector<std::string> privileged_values;
};

/// Load one of the registered datasets from a CSV file (header row required,
/// UTF-8; comma-separated, with ';' accepted when the header line uses it).
/// Adult preprocessing: exact duplicate rows removed, missing categorical
/// cells ("?" or empty) replaced by the literal token "unknown". Bank gains a
/// derived categorical column age_ge_25 carrying the privileged-group rule.
Dataset load_registered(RegisteredName name, const std::string& path,
                        const LoadOverrides& overrides = {});

/// Per-record privileged flag: value of the protected attribute is in the
/// schema's privileged set.
std::vector<std::uint8_t> group_mask(const Dataset& ds);

/// Two-group synthetic dataset with a planted favorable-rate gap:
/// P(y=fav | unprivileged) = P(y=fav | privileged) - bias_gap, plus three
/// numeric and two categorical noise/proxy features. Deterministic per seed.
Dataset synth_biased(std::size_t n, double bias_gap, std::uint64_t seed);

/// Schema-faithful stand-ins for the public datasets, used where the real
/// CSVs are not present. Marginals approximate the published ones; these are
/// test fixtures, not the datasets themselves.
Dataset synth_adult_like(std::size_t n, std::uint64_t seed);
Dataset synth_bank_like(std::size_t n, std::uint64_t seed);
Dataset synth_utrecht(std::size_t n, std::uint64_t seed);

/// Human-readable summary (row count, columns, label balance, group sizes).
std::string describe(const Dataset& ds);

}  // namespace fairaudit
