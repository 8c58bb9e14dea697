#include "gfra/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace gfra {

void PathLossParams::validate() const {
  if (!(ref_distance_m > 0.0)) throw std::invalid_argument("ref_distance_m must be positive");
  if (!(exponent > 0.0)) throw std::invalid_argument("path-loss exponent must be positive");
  if (!(shadow_sigma_db >= 0.0)) throw std::invalid_argument("shadow_sigma_db must be >= 0");
}

void RadioParams::validate() const {
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("bandwidth_hz must be positive");
}

double large_scale_gain(const Point& ue, const Point& ap, const PathLossParams& params,
                        RngStream& rng) {
  const double d = distance(ue, ap);
  const double pl_ref = db_to_linear(params.ref_loss_db);
  const double denom = 1.0 + pl_ref * std::pow(d / params.ref_distance_m, params.exponent);
  double shadow = 1.0;
  if (params.shadow_sigma_db > 0.0) {
    shadow = db_to_linear(params.shadow_sigma_db * rng.normal());
  }
  return shadow / denom;
}

LinkGains draw_link_gains(const Deployment& deployment, std::span<const Point> ues,
                          const PathLossParams& params, RngStream& rng) {
  params.validate();
  LinkGains out;
  out.beta.resize(deployment.num_aps(), static_cast<Eigen::Index>(ues.size()));
  for (Eigen::Index u = 0; u < out.beta.cols(); ++u) {
    for (int m = 0; m < deployment.num_aps(); ++m) {
      out.beta(m, u) = large_scale_gain(ues[u], deployment.ap_coords[m], params, rng);
    }
  }
  return out;
}

ChannelRealization draw_channel(const Deployment& deployment, const LinkGains& gains,
                                RngStream& rng) {
  if (gains.num_aps() != deployment.num_aps()) {
    throw std::invalid_argument("link gains do not match deployment size");
  }
  const int s = deployment.antennas_per_ap;
  ChannelRealization ch;
  ch.g.resize(deployment.num_antennas(), gains.num_ues());
  for (int u = 0; u < gains.num_ues(); ++u) {
    for (int m = 0; m < gains.num_aps(); ++m) {
      const double amp = std::sqrt(gains.beta(m, u));
      for (int a = 0; a < s; ++a) ch.g(m * s + a, u) = amp * rng.complex_normal();
    }
  }
  return ch;
}

double noise_power_dbm(const RadioParams& radio) {
  radio.validate();
  return radio.noise_psd_dbm_hz + 10.0 * std::log10(radio.bandwidth_hz) + radio.noise_figure_db;
}

double tx_snr_linear(const RadioParams& radio) {
  return db_to_linear(radio.tx_power_dbm - noise_power_dbm(radio));
}

}  // namespace gfra
