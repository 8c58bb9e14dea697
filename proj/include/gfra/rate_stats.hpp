#pragma once

#include <span>
#include <vector>

namespace gfra {

/// Exceedance curve on a grid of rate values in dB (10 log10 of bit/s).
struct Ccdf {
  std::vector<double> rate_db;
  std::vector<double> exceedance;  // P(rate > grid point)
};

struct RateGrid {
  double lo_db = -20.0;
  double hi_db = 80.0;
  double step_db = 0.5;

  std::vector<double> points() const;
};

/// Zero rates map to -inf dB, so they never exceed any grid point.
/// Empty input gives an all-zero curve.
Ccdf empirical_ccdf(std::span<const double> rates_bps, const RateGrid& grid = {});

/// Rate exceeded by (at least) 95% of samples: the 5% lower order statistic.
/// NaN for empty input.
double likely95_rate(std::span<const double> rates_bps);

/// Sample mean; NaN for empty input.
double ergodic_rate(std::span<const double> rates_bps);

/// 10 log10(r); -inf for r = 0.
double rate_to_db(double rate_bps);

}  // namespace gfra
