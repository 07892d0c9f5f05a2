#include "fairaudit/rules.hpp"

#include <cstdio>

namespace fairaudit {

namespace {

std::string render(const Rule& rule, const std::vector<std::string>& names) {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < rule.predicates.size(); ++i) {
    const auto& p = rule.predicates[i];
    if (i > 0) out += " & ";
    out += names[std::size_t(p.feature)];
    std::snprintf(buf, sizeof(buf), " %s %.2f", p.is_le ? "<=" : ">", p.threshold);
    out += buf;
  }
  std::snprintf(buf, sizeof(buf), "; [class: %d]", rule.klass);
  out += buf;
  return out;
}

void walk(const DecisionTree& tree, const std::vector<std::string>& names, int at,
          std::vector<Rule::Predicate>& path, std::vector<Rule>& out) {
  const TreeNode& nd = tree.nodes()[std::size_t(at)];
  if (nd.feature < 0) {
    Rule rule;
    rule.predicates = path;
    rule.klass = nd.value;
    std::size_t total = 0;
    for (std::size_t c : nd.class_counts) total += c;
    rule.support = total;
    for (std::size_t c = 0; c < tree.classes().size(); ++c)
      if (tree.classes()[c] == nd.value && total > 0)
        rule.confidence = double(nd.class_counts[c]) / double(total);
    rule.text = render(rule, names);
    out.push_back(std::move(rule));
    return;
  }
  path.push_back({nd.feature, nd.threshold, true});
  walk(tree, names, nd.left, path, out);
  path.back().is_le = false;
  walk(tree, names, nd.right, path, out);
  path.pop_back();
}

}  // namespace

std::vector<Rule> extract_rules(const DecisionTree& tree,
                                const std::vector<std::string>& feature_names) {
  for (const auto& nd : tree.nodes())
    if (nd.feature >= 0 && std::size_t(nd.feature) >= feature_names.size())
      throw DataError("feature name list is shorter than the tree's feature indices");
  std::vector<Rule> out;
  std::vector<Rule::Predicate> path;
  walk(tree, feature_names, 0, path, out);
  return out;
}

bool rule_matches(const Rule& rule, const double* row) {
  for (const auto& p : rule.predicates) {
    double v = row[p.feature];
    if (p.is_le ? !(v <= p.threshold) : !(v > p.threshold)) return false;
  }
  return true;
}

int apply_rules(const std::vector<Rule>& rules, const double* row) {
  for (const auto& rule : rules)
    if (rule_matches(rule, row)) return rule.klass;
  throw DataError("no rule matched the given row");
}

}  // namespace fairaudit
