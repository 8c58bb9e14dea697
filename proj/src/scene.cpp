#include "gfra/scene.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace gfra {

namespace {

// SplitMix64 finalizer; used to fold path labels into a stream key.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

double distance(const Point& a, const Point& b) {
  return std::sqrt(squared_distance(a, b));
}

void AreaSpec::validate() const {
  if (!(side_length > 0.0) || !std::isfinite(side_length)) {
    throw std::invalid_argument("area side_length must be positive");
  }
}

void TrafficSpec::validate() const {
  if (n_ues_total <= 0) throw std::invalid_argument("n_ues_total must be positive");
  if (pool_size <= 0) throw std::invalid_argument("pool_size must be positive");
  if (pool_size >= n_ues_total) {
    throw std::invalid_argument("pool_size must be smaller than n_ues_total");
  }
  if (!(activation_prob >= 0.0 && activation_prob <= 1.0)) {
    throw std::invalid_argument("activation_prob must lie in [0, 1]");
  }
}

RngStream::RngStream(std::uint64_t key) : key_(key) { reseed(); }

RngStream::RngStream(std::uint64_t master_seed, std::initializer_list<Label> path)
    : key_(mix64(master_seed ^ 0x6a09e667f3bcc909ULL)) {
  for (const auto& label : path) key_ = fold(key_, label);
  reseed();
}

std::uint64_t RngStream::fold(std::uint64_t key, const Label& label) {
  // Tag strings and integers differently so "3" and 3 never alias.
  if (label.is_tag) return mix64(key ^ mix64(fnv1a(label.tag) ^ 0x5354524eULL));
  return mix64(key ^ mix64(label.index + 0x494e5400ULL));
}

void RngStream::reseed() {
  std::seed_seq seq{static_cast<std::uint32_t>(key_),
                    static_cast<std::uint32_t>(key_ >> 32),
                    static_cast<std::uint32_t>(mix64(key_)),
                    static_cast<std::uint32_t>(mix64(key_) >> 32)};
  engine_.seed(seq);
}

RngStream RngStream::child(Label label) const { return RngStream(fold(key_, label)); }

RngStream RngStream::child(std::initializer_list<Label> labels) const {
  std::uint64_t k = key_;
  for (const auto& label : labels) k = fold(k, label);
  return RngStream(k);
}

double RngStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int RngStream::uniform_int(int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(engine_);
}

double RngStream::normal() {
  // Box-Muller without caching, so every call consumes exactly two words.
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::complex<double> RngStream::complex_normal() {
  constexpr double kHalf = 0.70710678118654752440;
  const double re = normal();
  const double im = normal();
  return {re * kHalf, im * kHalf};
}

int RngStream::binomial(int trials, double p) {
  if (trials <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return trials;
  return std::binomial_distribution<int>(trials, p)(engine_);
}

RngStream derive_stream(std::uint64_t master_seed,
                        std::initializer_list<RngStream::Label> path) {
  return RngStream(master_seed, path);
}

Deployment make_grid_deployment(int rows, int cols, const AreaSpec& area,
                                int antennas_per_ap) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("grid dimensions must be >= 1");
  if (antennas_per_ap < 1) throw std::invalid_argument("antennas_per_ap must be >= 1");
  area.validate();

  Deployment d;
  d.rows = rows;
  d.cols = cols;
  d.antennas_per_ap = antennas_per_ap;
  d.area = area;
  d.ap_coords.reserve(static_cast<std::size_t>(rows) * cols);
  const double dx = area.side_length / cols;
  const double dy = area.side_length / rows;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      d.ap_coords.push_back({(c + 0.5) * dx, (r + 0.5) * dy});
    }
  }
  return d;
}

int sample_active_count(const TrafficSpec& traffic, RngStream& rng) {
  return rng.binomial(traffic.n_ues_total, traffic.activation_prob);
}

std::vector<Point> place_ues_uniform(int count, const AreaSpec& area, RngStream& rng) {
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    const double x = rng.uniform(0.0, area.side_length);
    const double y = rng.uniform(0.0, area.side_length);
    pts.push_back({x, y});
  }
  return pts;
}

void write_deployment_csv(std::ostream& out, const Deployment& deployment) {
  out << "ap_index,x_m,y_m,antennas\n";
  char buf[128];
  for (int m = 0; m < deployment.num_aps(); ++m) {
    const auto& p = deployment.ap_coords[m];
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%d\n", m, p.x, p.y,
                  deployment.antennas_per_ap);
    out << buf;
  }
}

Deployment read_deployment_csv(std::istream& in, const AreaSpec& area) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("ap_index,x_m,y_m,antennas", 0) != 0) {
    throw std::invalid_argument("deployment table: missing header");
  }
  Deployment d;
  d.area = area;
  d.antennas_per_ap = 0;
  int expected = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string f[4];
    for (auto& field : f) {
      if (!std::getline(row, field, ',')) {
        throw std::invalid_argument("deployment table: short row " + std::to_string(expected));
      }
    }
    const int idx = std::stoi(f[0]);
    if (idx != expected) throw std::invalid_argument("deployment table: indices must be 0..M-1 in order");
    const Point p{std::stod(f[1]), std::stod(f[2])};
    if (p.x < 0 || p.y < 0 || p.x > area.side_length || p.y > area.side_length) {
      throw std::invalid_argument("deployment table: AP outside area");
    }
    const int s = std::stoi(f[3]);
    if (s < 1 || (d.antennas_per_ap != 0 && s != d.antennas_per_ap)) {
      throw std::invalid_argument("deployment table: inconsistent antenna count");
    }
    d.antennas_per_ap = s;
    d.ap_coords.push_back(p);
    ++expected;
  }
  if (d.ap_coords.empty()) throw std::invalid_argument("deployment table: no APs");
  return d;
}

}  // namespace gfra
