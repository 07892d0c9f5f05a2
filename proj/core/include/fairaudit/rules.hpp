#pragma once

#include <string>
#include <vector>

#include "fairaudit/tree.hpp"

namespace fairaudit {

/// One root-to-leaf path of a decision tree as a conjunctive rule.
/// text renders thresholds with two decimals, predicates joined by " & ",
/// and always ends with "; [class: K]", e.g.
///   "age <= 43.50 & capital-gain > 7139.50; [class: -1]"
struct Rule {
  struct Predicate {
    int feature;
    double threshold;
    bool is_le;  // false means ">"
  };
  std::vector<Predicate> predicates;  // in root-to-leaf order
  int klass = 0;
  std::size_t support = 0;    // training rows that reached the leaf
  double confidence = 0.0;    // fraction of those rows labelled klass
  std::string text;
};

/// Every leaf of the tree as a rule; together the rules partition the
/// feature space, so apply_rules reproduces the tree's predictions.
std::vector<Rule> extract_rules(const DecisionTree& tree,
                                const std::vector<std::string>& feature_names);

bool rule_matches(const Rule& rule, const double* row);
int apply_rules(const std::vector<Rule>& rules, const double* row);

}  // namespace fairaudit
