#pragma once

#include <map>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "wavesim/metrics.hpp"

namespace wavesim {

struct PairedT {
  double t = 0.0;
  int df = 0;
};

/// Paired t on d = pre - post. Zero-variance differences give t = +-inf (or 0 when all zero).
/// Throws Error(InvalidArgument) for fewer than 2 pairs or unequal lengths.
PairedT paired_t(std::span<const double> pre, std::span<const double> post);

/// Regularized incomplete beta I_x(a, b) by continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

/// Two-tailed p-value of Student's t with df degrees of freedom.
double t_sf(double t, int df);

/// Paired effect size mean(d) / sd_sample(d). Throws Error(Undefined) on zero variance.
double cohen_dz(std::span<const double> pre, std::span<const double> post);

/// Sample mean and SD (n - 1) across observations.
MeanSd sample_stats(std::span<const double> values);

struct ComparisonRow {
  std::string variable;
  double pre_mean = 0.0;
  double pre_sd = 0.0;
  double post_mean = 0.0;
  double post_sd = 0.0;
  double t = 0.0;
  int df = 0;
  double p = 1.0;
  double cohen_d = 0.0;
};

/// Observation key: (group, vehicle, lap). The group names the metrics file.
using ObservationKey = std::tuple<std::string, std::string, int>;
using ObservationSet = std::map<ObservationKey, VehicleMetrics>;

/// Observations of one metrics summary: complete-lap records when present, else whole-run records.
ObservationSet observations(const MetricsSummary& summary, const std::string& group);

struct Comparison {
  std::vector<ComparisonRow> rows;
  std::vector<std::string> warnings;
};

/// One row per variable over the keys present in both sets. Keys missing on either side or
/// lacking the variable are dropped pairwise with a warning. Throws Error(Data) when a variable
/// ends up with fewer than two pairs or the key sets do not intersect.
Comparison compare(const ObservationSet& pre, const ObservationSet& post,
                   std::span<const std::string> variables);

}  // namespace wavesim
