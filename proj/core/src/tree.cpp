#include "fairaudit/tree.hpp"

#include <algorithm>
#include <cmath>

namespace fairaudit {

namespace {

double gini(const std::vector<std::size_t>& counts, std::size_t total) {
  if (total == 0) return 0.0;
  double s = 0.0;
  for (std::size_t c : counts) {
    double p = double(c) / double(total);
    s += p * p;
  }
  return 1.0 - s;
}

struct Builder {
  const Matrix& x;
  const std::vector<int>& yi;  // class indices per row
  std::size_t k;               // number of classes
  const TreeOptions& opts;
  const std::vector<std::uint8_t>& binary;
  Rng rng;
  std::vector<std::size_t> idx;
  std::vector<TreeNode> nodes;
  // scratch reused across nodes
  std::vector<std::pair<double, int>> sorted;
  std::vector<std::size_t> cl, cr, ct;
  std::vector<std::size_t> feature_pool;

  Builder(const Matrix& x_, const std::vector<int>& yi_, std::size_t k_, const TreeOptions& o,
          const std::vector<std::uint8_t>& bin)
      : x(x_), yi(yi_), k(k_), opts(o), binary(bin), rng(derive_seed(o.seed, 0x7ee5)) {
    cl.resize(k);
    cr.resize(k);
    ct.resize(k);
    feature_pool.resize(x.cols);
    for (std::size_t j = 0; j < x.cols; ++j) feature_pool[j] = j;
  }

  // Candidate features for this node, ascending. With max_features set this
  // is a fresh uniform sample per node (partial Fisher-Yates).
  std::size_t sample_features(std::vector<std::size_t>& out) {
    std::size_t m = opts.max_features == 0 ? x.cols : std::min(opts.max_features, x.cols);
    if (m == x.cols) {
      out = feature_pool;
      return m;
    }
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t j = i + std::size_t(rng.next_below(x.cols - i));
      std::swap(feature_pool[i], feature_pool[j]);
    }
    out.assign(feature_pool.begin(), feature_pool.begin() + std::ptrdiff_t(m));
    std::sort(out.begin(), out.end());
    return m;
  }

  int build(std::size_t lo, std::size_t hi, std::size_t depth) {
    std::size_t n = hi - lo;
    std::fill(ct.begin(), ct.end(), 0);
    for (std::size_t i = lo; i < hi; ++i) ++ct[std::size_t(yi[idx[i]])];

    int best_feature = -1;
    double best_threshold = 0.0, best_gain = 0.0;
    bool splittable = depth < opts.max_depth && n >= 2 * opts.min_samples_leaf;
    std::size_t present = 0;
    for (std::size_t c : ct) present += c > 0;
    if (present < 2) splittable = false;

    if (splittable) {
      double parent = gini(ct, n);
      std::vector<std::size_t> feats;
      sample_features(feats);
      for (std::size_t f : feats) {
        if (binary[f]) {
          std::fill(cl.begin(), cl.end(), 0);
          std::size_t nl = 0;
          for (std::size_t i = lo; i < hi; ++i) {
            if (x.a[idx[i] * x.cols + f] <= 0.5) {
              ++cl[std::size_t(yi[idx[i]])];
              ++nl;
            }
          }
          std::size_t nr = n - nl;
          if (nl < opts.min_samples_leaf || nr < opts.min_samples_leaf) continue;
          for (std::size_t c = 0; c < k; ++c) cr[c] = ct[c] - cl[c];
          double gain = parent - (double(nl) / double(n)) * gini(cl, nl) -
                        (double(nr) / double(n)) * gini(cr, nr);
          if (gain > best_gain + 1e-12 || (best_feature < 0 && gain > 1e-12)) {
            best_gain = gain;
            best_feature = int(f);
            best_threshold = 0.5;
          }
        } else {
          sorted.clear();
          for (std::size_t i = lo; i < hi; ++i)
            sorted.emplace_back(x.a[idx[i] * x.cols + f], yi[idx[i]]);
          std::sort(sorted.begin(), sorted.end(),
                    [](const auto& a, const auto& b) { return a.first < b.first; });
          if (sorted.front().first == sorted.back().first) continue;
          std::fill(cl.begin(), cl.end(), 0);
          std::size_t nl = 0;
          for (std::size_t i = 0; i + 1 < n; ++i) {
            ++cl[std::size_t(sorted[i].second)];
            ++nl;
            if (sorted[i].first == sorted[i + 1].first) continue;
            if (nl < opts.min_samples_leaf || n - nl < opts.min_samples_leaf) continue;
            for (std::size_t c = 0; c < k; ++c) cr[c] = ct[c] - cl[c];
            double gain = parent - (double(nl) / double(n)) * gini(cl, nl) -
                          (double(n - nl) / double(n)) * gini(cr, n - nl);
            if (gain > best_gain + 1e-12 || (best_feature < 0 && gain > 1e-12)) {
              best_gain = gain;
              best_feature = int(f);
              best_threshold = 0.5 * (sorted[i].first + sorted[i + 1].first);
            }
          }
        }
      }
    }

    int me = int(nodes.size());
    nodes.emplace_back();
    nodes[std::size_t(me)].class_counts = ct;
    if (best_feature < 0) {
      std::size_t best_c = 0;
      for (std::size_t c = 1; c < k; ++c)
        if (ct[c] > ct[best_c]) best_c = c;
      nodes[std::size_t(me)].value = int(best_c);  // rewritten to class value later
      return me;
    }

    std::size_t f = std::size_t(best_feature);
    double t = best_threshold;
    auto mid_it = std::partition(idx.begin() + std::ptrdiff_t(lo), idx.begin() + std::ptrdiff_t(hi),
                                 [&](std::size_t r) { return x.a[r * x.cols + f] <= t; });
    std::size_t mid = std::size_t(mid_it - idx.begin());
    nodes[std::size_t(me)].feature = best_feature;
    nodes[std::size_t(me)].threshold = best_threshold;
    int l = build(lo, mid, depth + 1);
    nodes[std::size_t(me)].left = l;
    int r = build(mid, hi, depth + 1);
    nodes[std::size_t(me)].right = r;
    return me;
  }
};

}  // namespace

DecisionTree DecisionTree::fit(const Matrix& x, const std::vector<int>& y, TreeOptions opts,
                               const std::vector<std::uint8_t>* binary_hint,
                               const std::vector<std::size_t>* row_subset) {
  if (x.rows == 0 || x.cols == 0) throw DataError("cannot fit a tree on an empty matrix");
  if (y.size() != x.rows) throw DataError("label count does not match matrix rows");
  if (opts.max_depth == 0) throw ConfigError("tree max_depth must be positive");
  if (opts.min_samples_leaf == 0) throw ConfigError("tree min_samples_leaf must be positive");

  DecisionTree tree;
  tree.classes_ = y;
  std::sort(tree.classes_.begin(), tree.classes_.end());
  tree.classes_.erase(std::unique(tree.classes_.begin(), tree.classes_.end()),
                      tree.classes_.end());
  std::vector<int> yi(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    auto it = std::lower_bound(tree.classes_.begin(), tree.classes_.end(), y[i]);
    yi[i] = int(it - tree.classes_.begin());
  }

  std::vector<std::uint8_t> computed_binary;
  const std::vector<std::uint8_t>* binary = binary_hint;
  if (!binary) {
    computed_binary.assign(x.cols, 1);
    for (std::size_t j = 0; j < x.cols; ++j) {
      for (std::size_t i = 0; i < x.rows; ++i) {
        double v = x.a[i * x.cols + j];
        if (v != 0.0 && v != 1.0) {
          computed_binary[j] = 0;
          break;
        }
      }
    }
    binary = &computed_binary;
  } else if (binary->size() != x.cols) {
    throw DataError("binary hint size does not match matrix columns");
  }

  Builder b(x, yi, tree.classes_.size(), opts, *binary);
  if (row_subset) {
    b.idx = *row_subset;
    for (std::size_t r : b.idx)
      if (r >= x.rows) throw DataError("row subset index out of range");
    if (b.idx.empty()) throw DataError("cannot fit a tree on an empty row subset");
  } else {
    b.idx.resize(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) b.idx[i] = i;
  }
  b.build(0, b.idx.size(), 0);
  tree.nodes_ = std::move(b.nodes);
  for (auto& node : tree.nodes_)
    if (node.feature < 0) node.value = tree.classes_[std::size_t(node.value)];
  return tree;
}

int DecisionTree::predict_row(const double* row) const {
  int at = 0;
  while (nodes_[std::size_t(at)].feature >= 0) {
    const TreeNode& nd = nodes_[std::size_t(at)];
    at = row[nd.feature] <= nd.threshold ? nd.left : nd.right;
  }
  return nodes_[std::size_t(at)].value;
}

std::vector<int> DecisionTree::predict(const Matrix& x) const {
  std::vector<int> out(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) out[i] = predict_row(&x.a[i * x.cols]);
  return out;
}

std::size_t DecisionTree::depth() const {
  std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
  std::size_t best = 0;
  while (!stack.empty()) {
    auto [at, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    const TreeNode& nd = nodes_[std::size_t(at)];
    if (nd.feature >= 0) {
      stack.push_back({nd.left, d + 1});
      stack.push_back({nd.right, d + 1});
    }
  }
  return best;
}

}  // namespace fairaudit
