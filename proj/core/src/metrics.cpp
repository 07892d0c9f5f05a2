#include "fairaudit/metrics.hpp"

#include <cmath>

namespace fairaudit {

std::size_t GroupConfusion::group_total(int g) const {
  return cell[g][0][0] + cell[g][0][1] + cell[g][1][0] + cell[g][1][1];
}

std::size_t GroupConfusion::predicted_favorable(int g) const {
  return cell[g][0][1] + cell[g][1][1];
}

std::size_t GroupConfusion::actual(int g, int y) const {
  return cell[g][y][0] + cell[g][y][1];
}

GroupConfusion confusion(const std::vector<std::uint8_t>& y,
                         const std::vector<std::uint8_t>& predicted,
                         const std::vector<std::uint8_t>& privileged) {
  if (y.empty()) throw DataError("cannot score an empty prediction set");
  if (y.size() != predicted.size() || y.size() != privileged.size())
    throw DataError("label, prediction and group vectors must have equal length");
  GroupConfusion c;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] > 1 || predicted[i] > 1 || privileged[i] > 1)
      throw DataError("labels, predictions and group flags must be 0/1");
    ++c.cell[privileged[i]][y[i]][predicted[i]];
  }
  return c;
}

FairnessReport report_from_confusion(const GroupConfusion& c) {
  FairnessReport r;
  std::size_t total = c.group_total(0) + c.group_total(1);
  if (total == 0) throw DataError("cannot score an empty prediction set");
  std::size_t correct = c.cell[0][0][0] + c.cell[0][1][1] + c.cell[1][0][0] + c.cell[1][1][1];
  r.accuracy = double(correct) / double(total);

  std::size_t n_u = c.group_total(0), n_p = c.group_total(1);
  if (n_u > 0 && n_p > 0) {
    double rate_u = double(c.predicted_favorable(0)) / double(n_u);
    double rate_p = double(c.predicted_favorable(1)) / double(n_p);
    r.statistical_parity = rate_u - rate_p;
    if (rate_p > 0.0) r.disparate_impact = rate_u / rate_p;
  }
  std::size_t pos_u = c.actual(0, 1), pos_p = c.actual(1, 1);
  std::size_t neg_u = c.actual(0, 0), neg_p = c.actual(1, 0);
  if (pos_u > 0 && pos_p > 0) {
    double tpr_u = double(c.cell[0][1][1]) / double(pos_u);
    double tpr_p = double(c.cell[1][1][1]) / double(pos_p);
    r.equal_opportunity = tpr_u - tpr_p;
    if (neg_u > 0 && neg_p > 0) {
      double fpr_u = double(c.cell[0][0][1]) / double(neg_u);
      double fpr_p = double(c.cell[1][0][1]) / double(neg_p);
      r.average_odds = 0.5 * ((fpr_u - fpr_p) + (tpr_u - tpr_p));
    }
  }
  return r;
}

FairnessReport fairness_report(const std::vector<std::uint8_t>& y,
                               const std::vector<std::uint8_t>& predicted,
                               const std::vector<std::uint8_t>& privileged) {
  return report_from_confusion(confusion(y, predicted, privileged));
}

namespace {

MetricSummary summarize(const std::vector<double>& values) {
  MetricSummary s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / double(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / double(values.size() - 1));
  }
  return s;
}

}  // namespace

AggregateReport aggregate(const std::vector<FairnessReport>& folds) {
  if (folds.empty()) throw DataError("cannot aggregate zero fold reports");
  AggregateReport agg;
  std::vector<double> acc, di, spd, eod, aod;
  for (const auto& f : folds) {
    acc.push_back(f.accuracy);
    if (f.disparate_impact) di.push_back(*f.disparate_impact);
    if (f.statistical_parity) spd.push_back(*f.statistical_parity);
    if (f.equal_opportunity) eod.push_back(*f.equal_opportunity);
    if (f.average_odds) aod.push_back(*f.average_odds);
  }
  agg.accuracy = summarize(acc);
  agg.disparate_impact = summarize(di);
  agg.statistical_parity = summarize(spd);
  agg.equal_opportunity = summarize(eod);
  agg.average_odds = summarize(aod);
  return agg;
}

}  // namespace fairaudit
