#include "gfra/scg.hpp"

#include <cmath>
#include <stdexcept>

namespace gfra {

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::kMaxEpochs: return "max_epochs";
    case StopReason::kMinGradient: return "min_gradient";
    case StopReason::kStalled: return "stalled";
    case StopReason::kCallback: return "callback";
  }
  return "unknown";
}

ScgResult minimize_scg(const Objective& objective, Eigen::VectorXd w0, const ScgOptions& options,
                       const EpochCallback& on_epoch) {
  if (!(options.sigma > 0.0) || !(options.lambda_init > 0.0)) {
    throw std::invalid_argument("SCG sigma and lambda must be positive");
  }
  const Eigen::Index n = w0.size();
  ScgResult res;
  res.w = std::move(w0);

  Eigen::VectorXd grad(n);
  double value = objective(res.w, &grad);
  if (!std::isfinite(value)) throw std::runtime_error("objective is not finite at the start point");

  Eigen::VectorXd dir = -grad;
  Eigen::VectorXd probe_grad(n);
  Eigen::VectorXd trial(n);
  double lambda = options.lambda_init;
  double lambda_bar = 0.0;
  double delta = 0.0;
  bool success = true;
  int since_restart = 0;

  res.reason = StopReason::kMaxEpochs;
  for (int epoch = 1; epoch <= options.max_epochs; ++epoch) {
    const double dir_sq = dir.squaredNorm();
    if (!(dir_sq > 0.0) || !std::isfinite(dir_sq)) {
      res.reason = StopReason::kStalled;
      break;
    }

    if (success) {
      const double step = options.sigma / std::sqrt(dir_sq);
      trial = res.w + step * dir;
      objective(trial, &probe_grad);
      delta = dir.dot(probe_grad - grad) / step;
    }

    // Scale the curvature estimate; force it positive if the Hessian is
    // indefinite along dir.
    delta += (lambda - lambda_bar) * dir_sq;
    if (delta <= 0.0) {
      lambda_bar = 2.0 * (lambda - delta / dir_sq);
      delta = -delta + lambda * dir_sq;
      lambda = lambda_bar;
    }

    const double mu = -dir.dot(grad);
    const double alpha = mu / delta;
    trial = res.w + alpha * dir;
    const double trial_value = objective(trial, nullptr);
    const double comparison = 2.0 * delta * (value - trial_value) / (mu * mu);

    if (std::isfinite(trial_value) && comparison >= 0.0) {
      res.w = trial;
      value = trial_value;
      const Eigen::VectorXd old_grad = grad;
      objective(res.w, &grad);
      lambda_bar = 0.0;
      success = true;
      if (++since_restart >= n) {
        dir = -grad;
        since_restart = 0;
      } else {
        const double beta = (grad.squaredNorm() - grad.dot(old_grad)) / mu;
        dir = -grad + beta * dir;
      }
      if (comparison >= 0.75) lambda *= 0.25;
    } else {
      lambda_bar = lambda;
      success = false;
    }
    if (comparison < 0.25 || !std::isfinite(comparison)) {
      lambda += delta * (1.0 - (std::isfinite(comparison) ? comparison : 0.0)) / dir_sq;
    }

    res.epochs = epoch;
    if (!std::isfinite(lambda) || !std::isfinite(value)) {
      res.reason = StopReason::kStalled;
      break;
    }
    if (on_epoch && on_epoch(epoch, res.w, value)) {
      res.reason = StopReason::kCallback;
      break;
    }
    if (grad.norm() < options.min_gradient) {
      res.reason = StopReason::kMinGradient;
      break;
    }
  }
  res.value = value;
  return res;
}

}  // namespace gfra
