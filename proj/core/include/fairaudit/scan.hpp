#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fairaudit/dataset.hpp"

namespace fairaudit {

enum class ScanDirection { over, under };

/// A conjunction of per-attribute value restrictions over the categorical
/// columns; attributes absent from the map are unrestricted.
struct Subgroup {
  std::map<std::string, std::vector<std::string>> values;
};

struct ScanResult {
  Subgroup subgroup;
  double score = 0.0;
  double q = 1.0;
  ScanDirection direction = ScanDirection::over;
  std::size_t n = 0;  // records matching the subgroup
};

struct ScanOptions {
  ScanDirection direction = ScanDirection::over;
  double penalty = 0.0;      // per included value of each restricted attribute
  std::size_t restarts = 20;
  std::size_t max_passes = 60;
  std::uint64_t seed = 0;
};

/// Log-likelihood ratio of outcomes y against expectations p under a
/// common odds multiplier q: sum_i [ y_i ln q - ln(1 - p_i + q p_i) ].
double bernoulli_score(const std::vector<double>& p, const std::vector<std::uint8_t>& y,
                       double q);

/// Maximizing q within the direction's range (over: [1, 20], under:
/// [1/20, 1]); the score is concave in ln q, so ternary search is exact.
/// Returns {q*, score at q*}.
std::pair<double, double> optimal_q(const std::vector<double>& p,
                                    const std::vector<std::uint8_t>& y, ScanDirection direction);

/// Penalized score of an explicit subgroup: the optimal-q score over its
/// matching records minus penalty * (number of included values, counted
/// only for attributes that exclude at least one value). Expectations are
/// clipped to [0.01, 0.99] first.
double subgroup_score(const Dataset& ds, const std::vector<double>& expectations,
                      const Subgroup& subgroup, ScanDirection direction, double penalty);

std::size_t subgroup_count(const Dataset& ds, const Subgroup& subgroup);

/// Multi-restart ascent over categorical attributes: each restart refines
/// one attribute at a time (values ordered by observed/expected ratio,
/// prefixes scored exactly) until a full pass changes nothing, and the
/// best penalized score over all restarts wins. Deterministic per seed.
ScanResult scan(const Dataset& ds, const std::vector<double>& expectations, ScanOptions opts);

/// Exact maximum by enumerating every combination of nonempty value
/// subsets across attributes. Exponential; refuses inputs whose
/// combination count exceeds about two million.
ScanResult exhaustive_scan(const Dataset& ds, const std::vector<double>& expectations,
                           ScanOptions opts);

}  // namespace fairaudit
