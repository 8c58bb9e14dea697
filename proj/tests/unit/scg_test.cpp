#include <doctest.h>

#include <cmath>

#include "gfra/scg.hpp"

using namespace gfra;

namespace {

// f(w) = 0.5 |A w - b|^2
struct LeastSquares {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;

  double operator()(const Eigen::VectorXd& w, Eigen::VectorXd* grad) const {
    const Eigen::VectorXd r = a * w - b;
    if (grad) *grad = a.transpose() * r;
    return 0.5 * r.squaredNorm();
  }
};

LeastSquares make_problem(int rows, int cols) {
  LeastSquares p;
  p.a = Eigen::MatrixXd::Zero(rows, cols);
  p.b = Eigen::VectorXd::Zero(rows);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) p.a(i, j) = std::sin(1.0 + i * 0.7 + j * 1.3) + (i == j ? 2.0 : 0.0);
    p.b(i) = std::cos(0.3 * i);
  }
  return p;
}

}  // namespace

TEST_SUITE("scg") {

TEST_CASE("converges on a quadratic") {
  const LeastSquares p = make_problem(12, 6);
  const Eigen::VectorXd optimum = p.a.colPivHouseholderQr().solve(p.b);
  ScgOptions opt;
  opt.max_epochs = 6 + 5;
  opt.min_gradient = 1e-12;
  const ScgResult res = minimize_scg(p, Eigen::VectorXd::Zero(6), opt);
  CHECK((res.w - optimum).norm() < 1e-8);
  CHECK(res.epochs <= 11);
}

TEST_CASE("objective value never increases") {
  const LeastSquares p = make_problem(30, 10);
  std::vector<double> values;
  ScgOptions opt;
  opt.max_epochs = 40;
  const auto rosen = [](const Eigen::VectorXd& w, Eigen::VectorXd* g) {
    double f = 0.0;
    if (g) g->setZero(w.size());
    for (Eigen::Index i = 0; i + 1 < w.size(); ++i) {
      const double a = w(i + 1) - w(i) * w(i), b = 1.0 - w(i);
      f += 100 * a * a + b * b;
      if (g) {
        (*g)(i) += -400 * w(i) * a - 2 * b;
        (*g)(i + 1) += 200 * a;
      }
    }
    return f;
  };
  minimize_scg(rosen, Eigen::VectorXd::Constant(4, -1.0), opt,
               [&](int, const Eigen::VectorXd&, double v) {
                 values.push_back(v);
                 return false;
               });
  REQUIRE(values.size() == 40);
  for (std::size_t i = 1; i < values.size(); ++i) CHECK(values[i] <= values[i - 1]);
  (void)p;
}

TEST_CASE("infinite gradient threshold stops after the first epoch") {
  const LeastSquares p = make_problem(8, 4);
  ScgOptions opt;
  opt.min_gradient = std::numeric_limits<double>::infinity();
  int calls = 0;
  const ScgResult res = minimize_scg(p, Eigen::VectorXd::Zero(4), opt,
                                     [&](int, const Eigen::VectorXd&, double) {
                                       ++calls;
                                       return false;
                                     });
  CHECK(res.epochs == 1);
  CHECK(calls == 1);
  CHECK(res.reason == StopReason::kMinGradient);
}

TEST_CASE("callback can stop the run") {
  const LeastSquares p = make_problem(8, 4);
  const ScgResult res = minimize_scg(p, Eigen::VectorXd::Zero(4), ScgOptions{},
                                     [](int epoch, const Eigen::VectorXd&, double) { return epoch >= 2; });
  CHECK(res.reason == StopReason::kCallback);
  CHECK(res.epochs == 2);
  CHECK(to_string(StopReason::kCallback).size() > 0);
}

TEST_CASE("bad options throw") {
  const LeastSquares p = make_problem(4, 2);
  ScgOptions opt;
  opt.sigma = 0.0;
  CHECK_THROWS_AS(minimize_scg(p, Eigen::VectorXd::Zero(2), opt), std::invalid_argument);
}

}
