#include "ndrl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "ndrl/error.hpp"

namespace ndrl {

namespace {

void require_pair(std::span<const double> observed, std::span<const double> predicted, std::size_t min_len,
                  const char* name) {
  if (observed.size() != predicted.size()) {
    throw std::invalid_argument(std::string(name) + ": observed and predicted lengths differ");
  }
  if (observed.size() < min_len) {
    throw std::invalid_argument(std::string(name) + ": need at least " + std::to_string(min_len) + " values");
  }
}

double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

std::optional<double> iwp(double yield, double irrigation_mm) {
  if (!(irrigation_mm > 0.0)) return std::nullopt;
  return yield / (irrigation_mm * 10.0);
}

std::optional<double> npfp(double yield, double nitrogen) {
  if (!(nitrogen > 0.0)) return std::nullopt;
  return yield / nitrogen;
}

double cyasr(const TrainingLog& log, std::size_t up_to_episode) {
  if (up_to_episode == 0) throw std::invalid_argument("cyasr: empty episode prefix");
  if (up_to_episode > log.episodes.size()) throw std::invalid_argument("cyasr: prefix longer than the log");
  double yields = 0.0;
  double steps = 0.0;
  for (std::size_t i = 0; i < up_to_episode; ++i) {
    yields += log.episodes[i].yield;
    steps += log.episodes[i].action_steps;
  }
  if (steps <= 0.0) throw std::invalid_argument("cyasr: no action steps in prefix");
  return yields / steps;
}

std::vector<double> trailing_mean(std::span<const double> values, std::size_t window) {
  if (window == 0) throw std::invalid_argument("trailing_mean: window must be at least 1");
  std::vector<double> out;
  out.reserve(values.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    sum += values[i];
    if (i >= window) sum -= values[i - window];
    const std::size_t n = std::min(window, i + 1);
    out.push_back(sum / static_cast<double>(n));
  }
  return out;
}

std::vector<double> avg_cumulative_reward(const TrainingLog& log, std::size_t window) {
  std::vector<double> rewards;
  rewards.reserve(log.episodes.size());
  for (const auto& e : log.episodes) rewards.push_back(e.reward);
  return trailing_mean(rewards, window);
}

double nrmse(std::span<const double> observed, std::span<const double> predicted) {
  require_pair(observed, predicted, 1, "nrmse");
  const double m = mean(observed);
  if (m == 0.0) throw std::invalid_argument("nrmse: observed mean is zero");
  double sq = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double d = predicted[i] - observed[i];
    sq += d * d;
  }
  return 100.0 * std::sqrt(sq / static_cast<double>(observed.size())) / m;
}

double d_index(std::span<const double> observed, std::span<const double> predicted) {
  require_pair(observed, predicted, 2, "d_index");
  const double m = mean(observed);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    num += (predicted[i] - observed[i]) * (predicted[i] - observed[i]);
    const double a = std::abs(predicted[i] - m) + std::abs(observed[i] - m);
    den += a * a;
  }
  if (den == 0.0) throw std::invalid_argument("d_index: all values equal the observed mean");
  return 1.0 - num / den;
}

double r_squared(std::span<const double> observed, std::span<const double> predicted) {
  require_pair(observed, predicted, 2, "r_squared");
  const double mo = mean(observed);
  const double mp = mean(predicted);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    sxy += (observed[i] - mo) * (predicted[i] - mp);
    sxx += (observed[i] - mo) * (observed[i] - mo);
    syy += (predicted[i] - mp) * (predicted[i] - mp);
  }
  if (sxx == 0.0) throw std::invalid_argument("r_squared: observed series has zero variance");
  if (syy == 0.0) return 0.0;
  return (sxy * sxy) / (sxx * syy);
}

MetricsRow make_metrics_row(std::string label, int year, double irrigation, double nitrogen, double yield) {
  MetricsRow row;
  row.year = year;
  row.label = std::move(label);
  row.irrigation = irrigation;
  row.fertilizer_n = nitrogen;
  row.yield = yield;
  row.iwp = iwp(yield, irrigation);
  row.npfp = npfp(yield, nitrogen);
  return row;
}

void write_comparison_csv(const std::filesystem::path& path, std::span<const MetricsRow> rows) {
  std::ofstream out(path);
  if (!out) throw DataError(path.string() + ": cannot write comparison table");
  out << "Category,Year,Methods,Irrigation,Fertilizer_N,Yields,IWP,NPFP\n";
  auto ratio = [](const std::optional<double>& v) {
    if (!v) return std::string("--");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", *v);
    return std::string(buf);
  };
  for (const auto& r : rows) {
    char amounts[96];
    std::snprintf(amounts, sizeof amounts, "%.0f,%.0f,%.0f", r.irrigation, r.fertilizer_n, r.yield);
    out << r.category << ',' << r.year << ',' << r.label << ',' << amounts << ',' << ratio(r.iwp) << ','
        << ratio(r.npfp) << '\n';
  }
}

}  // namespace ndrl
