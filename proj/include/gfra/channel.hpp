#pragma once

#include <Eigen/Dense>
#include <span>

#include "gfra/scene.hpp"

namespace gfra {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

/// beta = X / (1 + PL(d0) * (d / d0)^v), PL(d0) given in dB, X log-normal.
struct PathLossParams {
  double ref_distance_m = 1.0;
  double ref_loss_db = 30.0;
  double exponent = 3.8;
  double shadow_sigma_db = 8.0;

  void validate() const;
};

struct RadioParams {
  double tx_power_dbm = 17.0;
  double noise_psd_dbm_hz = -174.0;
  double bandwidth_hz = 200e3;
  double noise_figure_db = 9.0;

  void validate() const;
};

/// Linear large-scale gains, rows = APs, cols = UEs.
struct LinkGains {
  Eigen::MatrixXd beta;

  int num_aps() const { return static_cast<int>(beta.rows()); }
  int num_ues() const { return static_cast<int>(beta.cols()); }
};

/// Column u stacks g_u over APs: rows [m*S, (m+1)*S) belong to AP m.
struct ChannelRealization {
  Eigen::MatrixXcd g;
};

double large_scale_gain(const Point& ue, const Point& ap, const PathLossParams& params,
                        RngStream& rng);

/// Shadowing is i.i.d. per (UE, AP) link.
LinkGains draw_link_gains(const Deployment& deployment, std::span<const Point> ues,
                          const PathLossParams& params, RngStream& rng);

ChannelRealization draw_channel(const Deployment& deployment, const LinkGains& gains,
                                RngStream& rng);

double noise_power_dbm(const RadioParams& radio);
double tx_snr_linear(const RadioParams& radio);

}  // namespace gfra
