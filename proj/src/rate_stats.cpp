#include "gfra/rate_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace gfra {

std::vector<double> RateGrid::points() const {
  if (!(step_db > 0.0) || hi_db < lo_db) throw std::invalid_argument("bad rate grid");
  const int n = static_cast<int>(std::floor((hi_db - lo_db) / step_db + 1e-9)) + 1;
  std::vector<double> pts(n);
  for (int i = 0; i < n; ++i) pts[i] = lo_db + i * step_db;
  return pts;
}

double rate_to_db(double rate_bps) {
  if (rate_bps < 0.0) throw std::invalid_argument("negative rate");
  if (rate_bps == 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(rate_bps);
}

Ccdf empirical_ccdf(std::span<const double> rates_bps, const RateGrid& grid) {
  Ccdf c;
  c.rate_db = grid.points();
  c.exceedance.assign(c.rate_db.size(), 0.0);
  if (rates_bps.empty()) return c;
  std::vector<double> db;
  db.reserve(rates_bps.size());
  for (double r : rates_bps) db.push_back(rate_to_db(r));
  std::sort(db.begin(), db.end());
  const double n = static_cast<double>(db.size());
  for (std::size_t i = 0; i < c.rate_db.size(); ++i) {
    const auto above = db.end() - std::upper_bound(db.begin(), db.end(), c.rate_db[i]);
    c.exceedance[i] = static_cast<double>(above) / n;
  }
  return c;
}

double likely95_rate(std::span<const double> rates_bps) {
  if (rates_bps.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::vector<double> v(rates_bps.begin(), rates_bps.end());
  const std::size_t k = static_cast<std::size_t>(std::floor(0.05 * static_cast<double>(v.size())));
  std::nth_element(v.begin(), v.begin() + k, v.end());
  return v[k];
}

double ergodic_rate(std::span<const double> rates_bps) {
  if (rates_bps.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(rates_bps.begin(), rates_bps.end(), 0.0) /
         static_cast<double>(rates_bps.size());
}

}  // namespace gfra
