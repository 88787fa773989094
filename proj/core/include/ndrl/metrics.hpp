#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ndrl/training_log.hpp"

namespace ndrl {

/// Irrigation water productivity in kg/m3; 1 mm over 1 ha is 10 m3.
/// Undefined (nullopt) for zero irrigation.
std::optional<double> iwp(double yield, double irrigation_mm);

/// Nitrogen partial factor productivity in kg/kg; nullopt for zero nitrogen.
std::optional<double> npfp(double yield, double nitrogen);

/// Pooled sum of yields over pooled sum of action steps for the first
/// `up_to_episode` episodes. Throws std::invalid_argument when the prefix
/// is empty or takes no steps.
double cyasr(const TrainingLog& log, std::size_t up_to_episode);

/// Trailing-window mean of per-episode rewards; shorter prefixes average
/// what is available.
std::vector<double> avg_cumulative_reward(const TrainingLog& log, std::size_t window = 50);
std::vector<double> trailing_mean(std::span<const double> values, std::size_t window);

/// 100 * RMSE / mean(observed).
double nrmse(std::span<const double> observed, std::span<const double> predicted);
/// Willmott's index of agreement.
double d_index(std::span<const double> observed, std::span<const double> predicted);
/// Squared Pearson correlation.
double r_squared(std::span<const double> observed, std::span<const double> predicted);

struct MetricsRow {
  std::string category = "Water-Nitrogen Management";
  int year = 0;
  std::string label;
  double irrigation = 0.0;
  double fertilizer_n = 0.0;
  double yield = 0.0;
  std::optional<double> iwp;
  std::optional<double> npfp;
};

MetricsRow make_metrics_row(std::string label, int year, double irrigation, double nitrogen, double yield);

/// Category,Year,Methods,Irrigation,Fertilizer_N,Yields,IWP,NPFP. Amounts
/// and yields as integers, ratios to two decimals, "--" when undefined.
void write_comparison_csv(const std::filesystem::path& path, std::span<const MetricsRow> rows);

}  // namespace ndrl
