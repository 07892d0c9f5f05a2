#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fairaudit/common.hpp"

namespace fairaudit {

/// Counts indexed by [group][true label][predicted label], group 1 being
/// the privileged one. Label 1 is the favorable outcome throughout.
struct GroupConfusion {
  std::size_t cell[2][2][2]{};

  std::size_t group_total(int g) const;
  std::size_t predicted_favorable(int g) const;
  std::size_t actual(int g, int y) const;
};

GroupConfusion confusion(const std::vector<std::uint8_t>& y,
                         const std::vector<std::uint8_t>& predicted,
                         const std::vector<std::uint8_t>& privileged);

/// Group fairness metrics of one prediction set. A metric whose denominator
/// is an empty cell (or a zero privileged selection rate, for the ratio) is
/// left unset rather than given a made-up value.
struct FairnessReport {
  double accuracy = 0.0;
  std::optional<double> disparate_impact;    // unpriv rate / priv rate, ideal 1
  std::optional<double> statistical_parity;  // unpriv rate - priv rate, ideal 0
  std::optional<double> equal_opportunity;   // TPR gap, ideal 0
  std::optional<double> average_odds;        // mean of FPR and TPR gaps, ideal 0
};

FairnessReport fairness_report(const std::vector<std::uint8_t>& y,
                               const std::vector<std::uint8_t>& predicted,
                               const std::vector<std::uint8_t>& privileged);

FairnessReport report_from_confusion(const GroupConfusion& c);

/// Mean and sample standard deviation over the folds where a metric was
/// defined; count says how many that was (0 means undefined everywhere).
struct MetricSummary {
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t count = 0;
};

struct AggregateReport {
  MetricSummary accuracy;
  MetricSummary disparate_impact;
  MetricSummary statistical_parity;
  MetricSummary equal_opportunity;
  MetricSummary average_odds;
};

AggregateReport aggregate(const std::vector<FairnessReport>& folds);

}  // namespace fairaudit
