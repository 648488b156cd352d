#include "wavesim/stats.hpp"

#include <cmath>
#include <limits>

#include "wavesim/error.hpp"

namespace wavesim {

namespace {

std::vector<double> differences(std::span<const double> pre, std::span<const double> post) {
  if (pre.size() != post.size())
    throw Error(ErrorKind::InvalidArgument, "paired samples differ in length");
  if (pre.size() < 2) throw Error(ErrorKind::InvalidArgument, "paired test needs at least 2 pairs");
  std::vector<double> d(pre.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = pre[i] - post[i];
  return d;
}

// Lentz's method for the continued fraction of I_x(a, b).
double beta_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  return h;
}

}  // namespace

MeanSd sample_stats(std::span<const double> values) {
  if (values.size() < 2) throw Error(ErrorKind::InvalidArgument, "sample SD needs at least 2 values");
  double mean = 0.0;
  for (double x : values) mean += x;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double x : values) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

PairedT paired_t(std::span<const double> pre, std::span<const double> post) {
  const auto d = differences(pre, post);
  const auto st = sample_stats(d);
  const int df = static_cast<int>(d.size()) - 1;
  if (st.sd == 0.0) {
    if (st.mean == 0.0) return {0.0, df};
    return {std::copysign(std::numeric_limits<double>::infinity(), st.mean), df};
  }
  return {st.mean / (st.sd / std::sqrt(static_cast<double>(d.size()))), df};
}

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorKind::InvalidArgument, "beta parameters must be > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorKind::InvalidArgument, "x must lie in [0, 1]");
  if (x == 0.0 || x == 1.0) return x;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_fraction(a, b, x) / a;
  return 1.0 - front * beta_fraction(b, a, 1.0 - x) / b;
}

double t_sf(double t, int df) {
  if (df < 1) throw Error(ErrorKind::InvalidArgument, "degrees of freedom must be >= 1");
  if (std::isnan(t)) throw Error(ErrorKind::InvalidArgument, "t is NaN");
  if (std::isinf(t)) return 0.0;
  const double nu = df;
  // P(|T| > t) = I_{nu/(nu+t^2)}(nu/2, 1/2)
  return regularized_incomplete_beta(0.5 * nu, 0.5, nu / (nu + t * t));
}

double cohen_dz(std::span<const double> pre, std::span<const double> post) {
  const auto d = differences(pre, post);
  const auto st = sample_stats(d);
  if (st.sd == 0.0) throw Error(ErrorKind::Undefined, "effect size undefined: zero-variance differences");
  return st.mean / st.sd;
}

ObservationSet observations(const MetricsSummary& summary, const std::string& group) {
  ObservationSet out;
  const auto& records = summary.laps.empty() ? summary.vehicles : summary.laps;
  for (const auto& r : records) {
    ObservationKey key{group, r.vehicle_id, r.lap};
    if (!out.emplace(key, r).second)
      throw Error(ErrorKind::Data, "duplicate observation " + group + "/" + r.vehicle_id +
                                       " lap " + std::to_string(r.lap));
  }
  return out;
}

Comparison compare(const ObservationSet& pre, const ObservationSet& post,
                   std::span<const std::string> variables) {
  Comparison out;
  std::size_t common = 0;
  for (const auto& [key, rec] : pre) {
    if (post.count(key)) {
      ++common;
    } else {
      out.warnings.push_back("dropped " + std::get<0>(key) + "/" + std::get<1>(key) + " lap " +
                             std::to_string(std::get<2>(key)) + ": missing in post");
    }
  }
  for (const auto& [key, rec] : post)
    if (!pre.count(key))
      out.warnings.push_back("dropped " + std::get<0>(key) + "/" + std::get<1>(key) + " lap " +
                             std::to_string(std::get<2>(key)) + ": missing in pre");
  if (common == 0) throw Error(ErrorKind::Data, "pre and post share no observation keys");
  if (variables.empty()) throw Error(ErrorKind::InvalidArgument, "no variables requested");

  for (const auto& var : variables) {
    std::vector<double> a;
    std::vector<double> b;
    std::size_t skipped = 0;
    for (const auto& [key, rec] : pre) {
      auto it = post.find(key);
      if (it == post.end()) continue;
      const auto x = rec.get(var);
      const auto y = it->second.get(var);
      if (!x || !y) {
        ++skipped;
        continue;
      }
      a.push_back(*x);
      b.push_back(*y);
    }
    if (skipped > 0)
      out.warnings.push_back(var + ": " + std::to_string(skipped) + " pairs without a value dropped");
    if (a.size() < 2)
      throw Error(ErrorKind::Data, var + ": fewer than 2 complete pairs");
    ComparisonRow row;
    row.variable = var;
    const auto sa = sample_stats(a);
    const auto sb = sample_stats(b);
    row.pre_mean = sa.mean;
    row.pre_sd = sa.sd;
    row.post_mean = sb.mean;
    row.post_sd = sb.sd;
    const auto pt = paired_t(a, b);
    row.t = pt.t;
    row.df = pt.df;
    row.p = t_sf(pt.t, pt.df);
    if (pt.t == 0.0) {
      row.cohen_d = 0.0;
    } else if (std::isinf(pt.t)) {
      row.cohen_d = pt.t;
    } else {
      row.cohen_d = cohen_dz(a, b);
    }
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace wavesim
