#include <doctest.h>

#include <sstream>

#include "gfra/model_io.hpp"

using namespace gfra;

namespace {

MlpModel sample_model() {
  RngStream r(5, {"io"});
  MlpModel m = MlpModel::glorot({6, 7, 5}, r);
  for (Eigen::Index i = 0; i < m.num_params(); ++i) m.params()(i) += 0.01 * r.normal();
  Eigen::MatrixXd sorted(6, 20);
  for (Eigen::Index i = 0; i < sorted.size(); ++i) sorted(i) = std::exp(r.normal());
  m.normalizer = InputNormalizer::fit(NormalizerKind::kLogStandardize, sorted);
  m.antennas_per_ap = 2;
  return m;
}

}  // namespace

TEST_SUITE("model_io") {

TEST_CASE("MLP round trip is bit exact") {
  const MlpModel m = sample_model();
  std::stringstream buf;
  save_model(buf, m);
  const MlpModel back = load_model(buf);
  CHECK(back.layer_sizes() == m.layer_sizes());
  CHECK(back.antennas_per_ap == 2);
  CHECK((back.params().array() == m.params().array()).all());
  CHECK((back.normalizer.shift.array() == m.normalizer.shift.array()).all());
  CHECK((back.normalizer.scale.array() == m.normalizer.scale.array()).all());

  RngStream r(6, {"inputs"});
  for (int i = 0; i < 1000; ++i) {
    Eigen::VectorXd e(6);
    for (int k = 0; k < 6; ++k) e(k) = std::exp(2.0 * r.normal());
    REQUIRE(predict_energy(back, e) == predict_energy(m, e));
  }
}

TEST_CASE("corrupt files raise FormatError") {
  const MlpModel m = sample_model();
  std::stringstream buf;
  save_model(buf, m);
  const std::string good = buf.str();

  std::stringstream truncated(good.substr(0, good.size() - 5));
  CHECK_THROWS_AS(load_model(truncated), FormatError);

  std::string bad_magic = good;
  bad_magic[0] = 'X';
  std::stringstream s1(bad_magic);
  CHECK_THROWS_AS(load_model(s1), FormatError);

  std::stringstream empty;
  CHECK_THROWS_AS(load_model(empty), FormatError);

  const auto pos = good.find("version");
  std::string bad_version = good;
  bad_version.replace(pos, 9, "version 9");
  std::stringstream s2(bad_version);
  try {
    load_model(s2);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.offset() >= pos);
  }
}

TEST_CASE("deployment mismatch is rejected") {
  const MlpModel m = sample_model();
  CHECK_NOTHROW(check_model_matches(m, 6, 2));
  CHECK_THROWS_AS(check_model_matches(m, 7, 2), std::invalid_argument);
  CHECK_THROWS_AS(check_model_matches(m, 6, 1), std::invalid_argument);
}

TEST_CASE("T-ED round trip") {
  Eigen::MatrixXd e(3, 4);
  e << 1, 2, 3, 4,
       0.5, 0.1, 0.3, 2,
       0.01, 0.7, 0.2, 1;
  const std::vector<int> y{0, 1, 1, 2};
  for (TedScaling s : {TedScaling::kPerPosition, TedScaling::kGlobal}) {
    const TedModel t = fit_ted(e, y, 2, s);
    std::stringstream buf;
    save_ted(buf, t);
    const TedModel back = load_ted(buf);
    CHECK(back.scaling == s);
    CHECK(back.t_max == 2);
    CHECK(back.class_means == t.class_means);
    CHECK(back.thresholds == t.thresholds);
    CHECK((back.norm_min.array() == t.norm_min.array()).all());
    CHECK((back.norm_max.array() == t.norm_max.array()).all());
  }
  std::stringstream junk("GFRA-TED\nversion 1\nt_max x\n");
  CHECK_THROWS_AS(load_ted(junk), FormatError);
}

}
