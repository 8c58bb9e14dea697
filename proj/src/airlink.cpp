#include "gfra/airlink.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gfra {

PreamblePool make_zc_pool(int length, int root) {
  if (length < 1) throw std::invalid_argument("preamble length must be >= 1");
  if (root < 1 || std::gcd(root, length) != 1) {
    throw std::invalid_argument("ZC root " + std::to_string(root) + " is not coprime with " +
                                std::to_string(length));
  }
  // n(n + c_f) with c_f = L mod 2; reduce the phase index modulo 2L before
  // scaling so large n keeps full precision.
  const long long cf = length % 2;
  const long long two_l = 2LL * length;
  Eigen::VectorXcd base(length);
  for (long long n = 0; n < length; ++n) {
    const long long k = (static_cast<long long>(root) * n * (n + cf)) % two_l;
    const double phase = -M_PI * static_cast<double>(k) / length;
    base(n) = {std::cos(phase), std::sin(phase)};
  }
  PreamblePool pool;
  pool.root = root;
  pool.sequences.resize(length, length);
  for (int l = 0; l < length; ++l) {
    for (int n = 0; n < length; ++n) pool.sequences(n, l) = base((n + l) % length);
  }
  return pool;
}

std::vector<int> SlotRealization::users_of(int preamble) const {
  std::vector<int> users;
  for (int u = 0; u < num_ues(); ++u) {
    if (preamble_choice[u] == preamble) users.push_back(u);
  }
  return users;
}

SlotRealization make_slot(const Deployment& deployment, std::vector<Point> ue_positions,
                          std::vector<int> preamble_choice, int pool_size,
                          const PathLossParams& pathloss, RngStream& rng) {
  if (ue_positions.size() != preamble_choice.size()) {
    throw std::invalid_argument("one preamble choice per UE required");
  }
  for (int p : preamble_choice) {
    if (p < 0 || p >= pool_size) throw std::invalid_argument("preamble index out of range");
  }
  SlotRealization slot;
  slot.pool_size = pool_size;
  slot.antennas_per_ap = deployment.antennas_per_ap;
  slot.ue_positions = std::move(ue_positions);
  slot.preamble_choice = std::move(preamble_choice);
  auto gain_rng = rng.child("gains");
  slot.gains = draw_link_gains(deployment, slot.ue_positions, pathloss, gain_rng);
  auto fading_rng = rng.child("fading");
  slot.channel = draw_channel(deployment, slot.gains, fading_rng);
  return slot;
}

SlotRealization simulate_slot(const Deployment& deployment, const TrafficSpec& traffic,
                              const PathLossParams& pathloss, RngStream& rng) {
  traffic.validate();
  auto count_rng = rng.child("active");
  const int active = sample_active_count(traffic, count_rng);
  auto pos_rng = rng.child("positions");
  auto positions = place_ues_uniform(active, deployment.area, pos_rng);
  auto pick_rng = rng.child("preambles");
  std::vector<int> picks(active);
  for (auto& p : picks) p = pick_rng.uniform_int(0, traffic.pool_size - 1);
  return make_slot(deployment, std::move(positions), std::move(picks), traffic.pool_size,
                   pathloss, rng);
}

Eigen::VectorXd preamble_energy(const Eigen::VectorXcd& filtered, int antennas_per_ap) {
  if (antennas_per_ap < 1 || filtered.size() % antennas_per_ap != 0) {
    throw std::invalid_argument("filtered length is not a multiple of antennas_per_ap");
  }
  const Eigen::Index m_count = filtered.size() / antennas_per_ap;
  Eigen::VectorXd e(m_count);
  for (Eigen::Index m = 0; m < m_count; ++m) {
    e(m) = filtered.segment(m * antennas_per_ap, antennas_per_ap).squaredNorm() /
           antennas_per_ap;
  }
  return e;
}

PreambleObservation observe_preamble(const SlotRealization& slot, int preamble, double rho_t,
                                     const Eigen::VectorXcd& unit_noise) {
  if (preamble < 0 || preamble >= slot.pool_size) {
    throw std::invalid_argument("preamble index out of range");
  }
  const Eigen::Index rows = slot.channel.g.rows();
  PreambleObservation obs;
  obs.filtered = Eigen::VectorXcd::Zero(rows);
  for (int u = 0; u < slot.num_ues(); ++u) {
    if (slot.preamble_choice[u] != preamble) continue;
    obs.filtered += slot.channel.g.col(u);
    ++obs.true_multiplicity;
  }
  if (unit_noise.size() != 0) {
    if (unit_noise.size() != rows) throw std::invalid_argument("noise length mismatch");
    if (std::isfinite(rho_t)) obs.filtered += unit_noise / std::sqrt(rho_t * slot.pool_size);
  }
  obs.energy = preamble_energy(obs.filtered, slot.antennas_per_ap);
  return obs;
}

PreambleObservation matched_filter(const SlotRealization& slot, int preamble,
                                   const RadioParams& radio, RngStream& rng) {
  Eigen::VectorXcd noise(slot.channel.g.rows());
  for (Eigen::Index i = 0; i < noise.size(); ++i) noise(i) = rng.complex_normal();
  return observe_preamble(slot, preamble, tx_snr_linear(radio), noise);
}

Eigen::MatrixXcd received_preamble_block(const SlotRealization& slot, const PreamblePool& pool,
                                         const RadioParams& radio,
                                         const Eigen::MatrixXcd& noise) {
  const Eigen::Index rows = slot.channel.g.rows();
  if (pool.length() != slot.pool_size) throw std::invalid_argument("pool size mismatch");
  if (noise.rows() != rows || noise.cols() != pool.length()) {
    throw std::invalid_argument("noise block must be (M*S) x L");
  }
  const double amp = std::sqrt(db_to_linear(radio.tx_power_dbm));
  Eigen::MatrixXcd y = noise;
  for (int u = 0; u < slot.num_ues(); ++u) {
    y += amp * slot.channel.g.col(u) * pool.sequences.col(slot.preamble_choice[u]).transpose();
  }
  return y;
}

PreambleObservation matched_filter_full(const SlotRealization& slot, const PreamblePool& pool,
                                        int preamble, const RadioParams& radio,
                                        const Eigen::MatrixXcd& noise) {
  const Eigen::MatrixXcd y = received_preamble_block(slot, pool, radio, noise);
  const double scale = std::sqrt(db_to_linear(radio.tx_power_dbm)) * pool.length();
  PreambleObservation obs;
  obs.filtered = y * pool.sequences.col(preamble).conjugate() / scale;
  obs.energy = preamble_energy(obs.filtered, slot.antennas_per_ap);
  obs.true_multiplicity = static_cast<int>(slot.users_of(preamble).size());
  return obs;
}

Eigen::VectorXcd unit_noise_from_block(const PreamblePool& pool, int preamble,
                                       const RadioParams& radio, const Eigen::MatrixXcd& noise) {
  const double sigma = std::sqrt(db_to_linear(noise_power_dbm(radio)));
  return noise * pool.sequences.col(preamble).conjugate() /
         (sigma * std::sqrt(static_cast<double>(pool.length())));
}

double SinrTerms::value() const {
  const double denom = collided_interference + other_interference + noise;
  if (denom <= 0.0) return signal > 0.0 ? kInfiniteSinr : 0.0;
  return signal / denom;
}

SinrTerms sinr_terms(const SlotRealization& slot, int target_ue, std::span<const int> ap_set,
                     const Eigen::VectorXcd& estimate, double rho_t,
                     const Eigen::VectorXcd& data_noise) {
  if (ap_set.empty()) throw std::invalid_argument("AP set for SINR evaluation is empty");
  if (target_ue < 0 || target_ue >= slot.num_ues()) {
    throw std::invalid_argument("target UE out of range");
  }
  const auto& g = slot.channel.g;
  if (estimate.size() != g.rows()) throw std::invalid_argument("estimate length mismatch");
  const bool noisy = data_noise.size() != 0;
  if (noisy && data_noise.size() != g.rows()) {
    throw std::invalid_argument("data noise length mismatch");
  }
  const int s = slot.antennas_per_ap;
  const int m_count = slot.num_aps();

  Eigen::VectorXcd inner = Eigen::VectorXcd::Zero(slot.num_ues());
  std::complex<double> noise_inner = 0.0;
  for (int m : ap_set) {
    if (m < 0 || m >= m_count) throw std::invalid_argument("AP index out of range");
    for (int a = 0; a < s; ++a) {
      const Eigen::Index row = static_cast<Eigen::Index>(m) * s + a;
      const std::complex<double> e = std::conj(estimate(row));
      inner += e * g.row(row).transpose();
      if (noisy) noise_inner += e * data_noise(row);
    }
  }

  SinrTerms t;
  const int own = slot.preamble_choice[target_ue];
  for (int u = 0; u < slot.num_ues(); ++u) {
    const double p = rho_t * std::norm(inner(u));
    if (u == target_ue) {
      t.signal = p;
    } else if (slot.preamble_choice[u] == own) {
      t.collided_interference += p;
    } else {
      t.other_interference += p;
    }
  }
  t.noise = std::norm(noise_inner);
  return t;
}

double sinr_for_ue(const SlotRealization& slot, int target_ue, std::span<const int> ap_set,
                   const Eigen::VectorXcd& estimate, double rho_t,
                   const Eigen::VectorXcd& data_noise) {
  return sinr_terms(slot, target_ue, ap_set, estimate, rho_t, data_noise).value();
}

double achievable_rate(double sinr, double bandwidth_hz, double sinr_cap) {
  if (std::isnan(sinr) || sinr < 0.0) throw std::invalid_argument("SINR must be >= 0");
  return bandwidth_hz * std::log2(1.0 + std::min(sinr, sinr_cap));
}

double asymptotic_sinr(const LinkGains& gains, int target, std::span<const int> colliders) {
  if (colliders.empty()) return kInfiniteSinr;
  const double own = gains.beta.col(target).mean();
  double interference = 0.0;
  for (int c : colliders) {
    const double b = gains.beta.col(c).mean();
    interference += b * b;
  }
  return own * own / interference;
}

}  // namespace gfra
