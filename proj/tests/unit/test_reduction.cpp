#include <doctest.h>

#include <filesystem>
#include <random>

#include "fixtures.hpp"
#include "phasechain/error.hpp"
#include "phasechain/geometry.hpp"
#include "phasechain/reduction.hpp"

using namespace phasechain;
using namespace phasechain::testing;

namespace {

Eigen::MatrixXd gaussian(std::uint64_t seed, Eigen::Index n, const Vector& scales) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd x(n, scales.size());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < scales.size(); ++j) x(i, j) = scales[j] * nd(rng);
  return x;
}

}  // namespace

TEST_CASE("rank-one data recovers its axis") {
  Eigen::MatrixXd x(5, 3);
  for (int i = 0; i < 5; ++i) x.row(i) << (i - 2.0) * 1.5, 0.0, 0.0;
  const auto model = fit_pca(x, 1);
  CHECK(std::fabs(model.components(0, 0) - 1.0) < 1e-12);
  CHECK(model.components.row(0).tail(2).norm() < 1e-12);
  CHECK(model.explained_variance[0] == doctest::Approx(4.5));
  CHECK(model.total_variance == doctest::Approx(4.5));
}

TEST_CASE("isotropic cloud splits variance evenly") {
  const auto x = gaussian(11, 10000, vec({1.0, 1.0}));
  const auto model = fit_pca(x, 2);
  const double ratio = model.explained_variance[1] / model.explained_variance[0];
  CHECK(ratio > 0.95);
  CHECK(ratio <= 1.0);
}

TEST_CASE("full rank projection is an isometry") {
  const auto x = gaussian(3, 200, vec({3.0, 1.0, 0.5, 0.1}));
  const auto model = fit_pca(x, 4);
  CHECK(model.explained_variance.sum() == doctest::Approx(model.total_variance).epsilon(1e-12));
  CHECK((model.components * model.components.transpose() - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-12);
  for (int i = 0; i < 20; ++i) {
    const Vector a = x.row(i).transpose(), b = x.row(i + 50).transpose();
    CHECK(std::fabs((model.project(a) - model.project(b)).norm() - (a - b).norm()) < 1e-10);
    CHECK((model.reconstruct(model.project(a)) - a).norm() < 1e-10);
  }
}

TEST_CASE("mean maps to origin and variances are ordered") {
  const auto x = gaussian(5, 500, vec({0.2, 2.0, 1.0, 4.0, 0.7}));
  const auto model = fit_pca(x, 3);
  CHECK(model.project(model.mean).norm() < 1e-12);
  for (Eigen::Index i = 1; i < model.rank(); ++i)
    CHECK(model.explained_variance[i] <= model.explained_variance[i - 1]);
  CHECK(model.explained_variance.sum() <= model.total_variance + 1e-12);
  CHECK(model.project(model.mean + Vector::Ones(5), 2).size() == 2);
  // sign convention
  for (Eigen::Index r = 0; r < model.rank(); ++r) {
    Eigen::Index idx;
    model.components.row(r).cwiseAbs().maxCoeff(&idx);
    CHECK(model.components(r, idx) > 0.0);
  }
}

TEST_CASE("duplicated samples leave the model unchanged") {
  const auto x = gaussian(8, 60, vec({1.0, 2.0, 3.0}));
  Eigen::MatrixXd twice(120, 3);
  twice << x, x;
  const auto a = fit_pca(x, 2), b = fit_pca(twice, 2);
  CHECK((a.components - b.components).norm() < 1e-10);
  CHECK((a.explained_variance - b.explained_variance).norm() < 1e-10);
  CHECK((a.mean - b.mean).norm() < 1e-12);
}

TEST_CASE("fitting is deterministic") {
  const auto x = gaussian(9, 300, vec({1.0, 1.5, 0.3, 2.2}));
  const auto a = fit_pca(x, 3), b = fit_pca(x, 3);
  CHECK(a.components == b.components);
  CHECK(a.explained_variance == b.explained_variance);
}

TEST_CASE("invalid k") {
  const auto x = gaussian(1, 10, vec({1.0, 1.0, 1.0}));
  CHECK_THROWS_AS(fit_pca(x, 0), ValidationError);
  CHECK_THROWS_AS(fit_pca(x, 4), ValidationError);
  const auto model = fit_pca(x, 2);
  CHECK_THROWS_AS(model.project(vec({1, 2, 3}), 3), ValidationError);
  CHECK_THROWS_AS(model.project(vec({1, 2})), ValidationError);
}

TEST_CASE("JSON round trip") {
  const auto model = fit_pca(gaussian(4, 50, vec({1.0, 0.5, 2.0})), 2);
  const auto back = pca_from_json(pca_to_json(model));
  CHECK(back.components == model.components);
  CHECK(back.mean == model.mean);
  CHECK(back.explained_variance == model.explained_variance);
  CHECK(back.total_variance == model.total_variance);

  const auto path = std::filesystem::temp_directory_path() / "phasechain_pca_roundtrip.json";
  save_pca(model, path);
  const auto loaded = load_pca(path);
  std::filesystem::remove(path);
  CHECK(loaded.components == model.components);
  CHECK_THROWS_AS(load_pca(path), IoError);
}

TEST_CASE("dataset fit pools steps but not references") {
  ChainDataset ds;
  add_chain(ds, make_chain("a", points({{1, 0}, {-1, 0}, {1, 0}}), vec({0, 100})));
  add_chain(ds, make_chain("b", points({{-1, 0}, {1, 0}, {-1, 0}}), vec({0, -100})));
  const auto model = fit_pca(ds, 1);
  CHECK(std::fabs(model.components(0, 0)) == doctest::Approx(1.0));
  CHECK(model.total_variance == doctest::Approx(1.0));
  const auto projected = project_chain(model, ds.chains[0]);
  CHECK(projected.id == "a");
  CHECK(projected.steps.size() == 3);
  CHECK(projected.reference.size() == 1);
}

TEST_CASE("summary features") {
  const auto x = gaussian(12, 100, vec({2.0, 1.0, 0.5}));
  const auto model = fit_pca(x, 2);

  const auto still = make_chain("c", {model.mean, model.mean, model.mean}, vec({1, 0, 0}));
  const auto f0 = chain_summary_features(model, still);
  REQUIRE(f0.size() == 4);
  CHECK(f0.head(2).norm() < 1e-12);
  CHECK(f0[2] == 0.0);
  CHECK(f0[3] == 1.0);

  const auto chain = make_chain("w", points({{0.1, 0.2, 0.3}, {1, -1, 0.5}, {2, 0, 1}, {0, 0, -1}}), vec({1, 0, 0}));
  const auto f = chain_summary_features(model, chain);
  Vector mean_q = Vector::Zero(2);
  for (const auto& s : chain.steps) mean_q += model.components * (s - model.mean);
  mean_q /= 4.0;
  CHECK((f.head(2) - mean_q).norm() < 1e-12);
  CHECK(std::fabs(f[2] - geometry::trajectory_length(chain.steps)) < 1e-12);
  CHECK(std::fabs(f[3] - geometry::smoothness(chain.steps)) < 1e-12);

  CHECK_THROWS_AS(chain_summary_features(fit_pca(x, 1), chain), ValidationError);
}
