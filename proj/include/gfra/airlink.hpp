#pragma once

#include <Eigen/Dense>
#include <limits>
#include <span>
#include <vector>

#include "gfra/channel.hpp"
#include "gfra/scene.hpp"

namespace gfra {

inline constexpr double kInfiniteSinr = std::numeric_limits<double>::infinity();
inline constexpr double kDefaultSinrCap = 1e12;

/// L orthogonal preambles of length L: cyclic shifts of one Zadoff-Chu root.
/// Column l of `sequences` is p_l; every entry has unit modulus.
struct PreamblePool {
  int root = 0;
  Eigen::MatrixXcd sequences;

  int length() const { return static_cast<int>(sequences.rows()); }
};

PreamblePool make_zc_pool(int length, int root);

/// One grant-free slot. Preamble indices are 0-based.
struct SlotRealization {
  std::vector<Point> ue_positions;
  LinkGains gains;
  ChannelRealization channel;
  std::vector<int> preamble_choice;
  int pool_size = 0;
  int antennas_per_ap = 1;

  int num_ues() const { return static_cast<int>(ue_positions.size()); }
  int num_aps() const { return gains.num_aps(); }
  std::vector<int> users_of(int preamble) const;
};

SlotRealization simulate_slot(const Deployment& deployment, const TrafficSpec& traffic,
                              const PathLossParams& pathloss, RngStream& rng);

/// Slot with caller-chosen UE positions and preamble picks; only the fading
/// is random.
SlotRealization make_slot(const Deployment& deployment, std::vector<Point> ue_positions,
                          std::vector<int> preamble_choice, int pool_size,
                          const PathLossParams& pathloss, RngStream& rng);

struct PreambleObservation {
  Eigen::VectorXcd filtered;  // sum of colliding channels + scaled noise
  Eigen::VectorXd energy;     // per-AP block energy / S
  int true_multiplicity = 0;
};

/// Direct synthesis: sum_{u on preamble} g_u + unit_noise / sqrt(rho_T * L).
/// `unit_noise` is CN(0, I) of length M*S, or empty for the noiseless case.
PreambleObservation observe_preamble(const SlotRealization& slot, int preamble,
                                     double rho_t, const Eigen::VectorXcd& unit_noise);

/// Default simulation path; draws the noise from `rng`.
PreambleObservation matched_filter(const SlotRealization& slot, int preamble,
                                   const RadioParams& radio, RngStream& rng);

/// Full received block Y = sum_u sqrt(P_T) g_u psi_u^T + N, in mW-scaled
/// amplitudes. `noise` is (M*S) x L with CN(0, sigma^2) entries.
Eigen::MatrixXcd received_preamble_block(const SlotRealization& slot, const PreamblePool& pool,
                                         const RadioParams& radio, const Eigen::MatrixXcd& noise);

/// Validation path: Y conj(p_l) / (sqrt(P_T) L).
PreambleObservation matched_filter_full(const SlotRealization& slot, const PreamblePool& pool,
                                        int preamble, const RadioParams& radio,
                                        const Eigen::MatrixXcd& noise);

/// The CN(0, I) vector that makes the direct path reproduce the full path
/// for block noise `noise` and preamble `preamble`.
Eigen::VectorXcd unit_noise_from_block(const PreamblePool& pool, int preamble,
                                       const RadioParams& radio, const Eigen::MatrixXcd& noise);

Eigen::VectorXd preamble_energy(const Eigen::VectorXcd& filtered, int antennas_per_ap);

/// Terms of the conjugate-beamforming SINR for one UE, everything divided
/// by the noise power. `estimate` and `data_noise` are full length M*S and
/// are restricted to `ap_set` internally; `data_noise` is CN(0, I) or empty.
struct SinrTerms {
  double signal = 0.0;
  double collided_interference = 0.0;
  double other_interference = 0.0;
  double noise = 0.0;

  double value() const;
};

SinrTerms sinr_terms(const SlotRealization& slot, int target_ue, std::span<const int> ap_set,
                     const Eigen::VectorXcd& estimate, double rho_t,
                     const Eigen::VectorXcd& data_noise);

double sinr_for_ue(const SlotRealization& slot, int target_ue, std::span<const int> ap_set,
                   const Eigen::VectorXcd& estimate, double rho_t,
                   const Eigen::VectorXcd& data_noise);

/// bandwidth * log2(1 + min(sinr, cap)).
double achievable_rate(double sinr, double bandwidth_hz, double sinr_cap = kDefaultSinrCap);

/// Large-M limit: mean_m(beta_target)^2 / sum_c mean_m(beta_c)^2.
double asymptotic_sinr(const LinkGains& gains, int target, std::span<const int> colliders);

}  // namespace gfra
