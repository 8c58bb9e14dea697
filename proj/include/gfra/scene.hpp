#pragma once

#include <complex>
#include <concepts>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <random>
#include <string_view>
#include <vector>

namespace gfra {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double squared_distance(const Point& a, const Point& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

double distance(const Point& a, const Point& b);

/// Square region [0, side] x [0, side] in meters.
struct AreaSpec {
  double side_length = 1000.0;

  void validate() const;
};

/// AP sites. For grid deployments AP index m = row * cols + col, with
/// row indexing y and col indexing x.
struct Deployment {
  std::vector<Point> ap_coords;
  int antennas_per_ap = 1;
  int rows = 0;
  int cols = 0;
  AreaSpec area;

  int num_aps() const { return static_cast<int>(ap_coords.size()); }
  int num_antennas() const { return num_aps() * antennas_per_ap; }
};

struct TrafficSpec {
  int n_ues_total = 2000;
  double activation_prob = 0.01;
  int pool_size = 20;

  void validate() const;
};

/// Reproducible random stream addressed by (master seed, label path).
///
/// Two streams with the same seed and path produce the same sequence no
/// matter what other streams were created or consumed in between, so
/// Monte Carlo trials can run in any order or on any number of threads.
class RngStream {
 public:
  /// One path element: a string tag or an integer index.
  struct Label {
    Label(std::string_view tag) : is_tag(true), tag(tag) {}
    Label(const char* tag) : is_tag(true), tag(tag) {}
    template <std::integral I>
    Label(I index) : index(static_cast<std::uint64_t>(index)) {}

    bool is_tag = false;
    std::string_view tag;
    std::uint64_t index = 0;
  };

  RngStream(std::uint64_t master_seed, std::initializer_list<Label> path);

  /// Stream for `this path + label`. Does not touch this stream's state.
  RngStream child(Label label) const;
  RngStream child(std::initializer_list<Label> labels) const;

  std::uint64_t key() const { return key_; }

  std::uint64_t next_u64() { return engine_(); }
  double uniform();                          // [0, 1)
  double uniform(double lo, double hi);      // [lo, hi)
  int uniform_int(int lo, int hi);           // inclusive
  double normal();
  std::complex<double> complex_normal();     // CN(0, 1)
  int binomial(int trials, double p);

 private:
  explicit RngStream(std::uint64_t key);
  static std::uint64_t fold(std::uint64_t key, const Label& label);
  void reseed();

  std::uint64_t key_;
  std::mt19937_64 engine_;
};

RngStream derive_stream(std::uint64_t master_seed,
                        std::initializer_list<RngStream::Label> path);

Deployment make_grid_deployment(int rows, int cols, const AreaSpec& area,
                                int antennas_per_ap);

int sample_active_count(const TrafficSpec& traffic, RngStream& rng);

std::vector<Point> place_ues_uniform(int count, const AreaSpec& area,
                                     RngStream& rng);

// CSV table: ap_index,x_m,y_m,antennas
void write_deployment_csv(std::ostream& out, const Deployment& deployment);
Deployment read_deployment_csv(std::istream& in, const AreaSpec& area);

}  // namespace gfra
