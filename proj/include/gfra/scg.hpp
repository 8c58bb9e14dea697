#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string_view>

namespace gfra {

/// f(w); writes the gradient into `grad` when it is non-null.
using Objective = std::function<double(const Eigen::VectorXd& w, Eigen::VectorXd* grad)>;

struct ScgOptions {
  int max_epochs = 1000;
  double min_gradient = 1e-6;
  double sigma = 1e-4;        // finite-difference scale for the curvature probe
  double lambda_init = 1e-6;  // initial Levenberg-Marquardt style scale
};

enum class StopReason { kMaxEpochs, kMinGradient, kStalled, kCallback };

std::string_view to_string(StopReason reason);

struct ScgResult {
  Eigen::VectorXd w;
  double value = 0.0;
  int epochs = 0;
  StopReason reason = StopReason::kMaxEpochs;
};

/// Called after every epoch with the current iterate; return true to stop.
using EpochCallback = std::function<bool(int epoch, const Eigen::VectorXd& w, double value)>;

/// Moller's scaled conjugate gradient. Every loop pass counts as one epoch,
/// whether or not the trial step was accepted. The iterate's objective value
/// never increases.
ScgResult minimize_scg(const Objective& objective, Eigen::VectorXd w0, const ScgOptions& options,
                       const EpochCallback& on_epoch = {});

}  // namespace gfra
