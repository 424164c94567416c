#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "phasechain/canonical.hpp"
#include "phasechain/energy.hpp"
#include "phasechain/error.hpp"

using namespace phasechain;
using namespace phasechain::canonical;
using namespace phasechain::testing;

namespace {

constexpr double kPi = std::numbers::pi;

PhasePoint pp(double q, double p) { return {vec({q}), vec({p})}; }

PcaModel fit_on(const EmbeddedChain& chain, Eigen::Index k) {
  ChainDataset ds;
  add_chain(ds, chain);
  return fit_pca(ds, k);
}

}  // namespace

TEST_CASE("unit circle orbit has constant action") {
  std::vector<PhasePoint> pts;
  for (int i = 0; i < 50; ++i) {
    const double t = 2 * kPi * i / 50;
    pts.push_back(pp(std::cos(t), std::sin(t)));
  }
  const auto phase = action_angle("c", pts);
  for (double a : phase.actions) CHECK(a == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(phase.mean_action == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(phase.angle_range == doctest::Approx(2 * kPi * 49 / 50).epsilon(1e-12));
}

TEST_CASE("polar map examples") {
  const auto a = action_angle("a", {pp(1, 0)});
  CHECK(a.actions[0] == 0.5);
  CHECK(a.angles[0] == 0.0);
  const auto b = action_angle("b", {pp(0, 1)});
  CHECK(b.actions[0] == 0.5);
  CHECK(b.angles[0] == doctest::Approx(kPi / 2));
  CHECK(action_angle("n", {pp(-1, -0.0)}).angles[0] == kPi);
  CHECK_THROWS_AS(action_angle("e", {}), ValidationError);
}

TEST_CASE("phase momentum is the projected native momentum") {
  const auto chain = random_walk_fixture();
  const auto model = fit_on(chain, 3);
  const auto phase = phase_trajectory(model, chain, 3);
  REQUIRE(phase.points.size() == chain.steps.size() - 1);
  CHECK(phase.actions.size() == phase.points.size());
  CHECK(phase.angles.size() == phase.points.size());
  const auto momenta = momentum_sequence(chain.steps);
  for (std::size_t i = 0; i < phase.points.size(); ++i) {
    CHECK((phase.points[i].p - model.components.topRows(3) * momenta[i]).norm() < 1e-9);
    CHECK(phase.actions[i] >= 0.0);
  }
  CHECK_THROWS_AS(phase_trajectory(model, chain, 4), ValidationError);
  CHECK_THROWS_AS(phase_trajectory(fit_on(chain, 2), chain, 3), ValidationError);
}

TEST_CASE("rotating phase pairs shifts angles and keeps actions") {
  std::vector<PhasePoint> pts;
  for (int i = 0; i < 30; ++i) pts.push_back(pp(std::sin(0.37 * i) + 0.2 * i, std::cos(1.3 * i) - 0.5));
  const double phi = 0.4;
  std::vector<PhasePoint> rotated;
  for (const auto& pt : pts) {
    const double q = pt.q[0], p = pt.p[0];
    rotated.push_back(pp(std::cos(phi) * q - std::sin(phi) * p, std::sin(phi) * q + std::cos(phi) * p));
  }
  const auto a = action_angle("a", pts), b = action_angle("b", rotated);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(std::fabs(a.actions[i] - b.actions[i]) < 1e-12);
    CHECK(std::fabs(b.unwrapped_angles[i] - b.unwrapped_angles[0] - (a.unwrapped_angles[i] - a.unwrapped_angles[0])) <
          1e-9);
    double shift = std::remainder(b.angles[i] - a.angles[i] - phi, 2 * kPi);
    CHECK(std::fabs(shift) < 1e-9);
  }
}

TEST_CASE("unwrapped angles never jump more than pi") {
  std::vector<double> angles;
  for (int i = 0; i < 200; ++i) angles.push_back(std::remainder(0.9 * i + 0.3 * std::sin(i), 2 * kPi));
  const auto un = unwrap_angles(angles);
  for (std::size_t i = 1; i < un.size(); ++i) {
    CHECK(std::fabs(un[i] - un[i - 1]) <= kPi + 1e-12);
    CHECK(std::fabs(std::remainder(un[i] - angles[i], 2 * kPi)) < 1e-9);
  }
  CHECK(unwrap_angles(std::vector<double>{}).empty());
}

TEST_CASE("circular chain conserves all three quantities") {
  auto chain = make_chain("circle", circle(1.0, 40), vec({0, 0, 1}));
  const auto model = fit_on(chain, 2);
  const auto rep = conservation_report(model, chain);
  CHECK(rep.chain_id == "circle");
  CHECK(rep.hamiltonian_se < 1e-10);
  CHECK(rep.angular_momentum_se < 1e-10);
  CHECK(rep.energy_like_se < 1e-10);
  CHECK_THROWS_AS(conservation_report(fit_on(chain, 1), chain), ValidationError);
  chain.steps.resize(2);
  CHECK_THROWS_AS(conservation_report(model, chain), ValidationError);
}

TEST_CASE("harmonic orbit on an ellipse") {
  std::vector<PhasePoint> pts;
  std::vector<double> h;
  for (int i = 0; i < 64; ++i) {
    const double t = 0.21 * i;
    pts.push_back({vec({3 * std::cos(t), 0.5 * std::sin(t)}), vec({-3 * std::sin(t), 0.5 * std::cos(t)})});
    h.push_back(-1.25);
  }
  const auto rep = conservation_from_series("ellipse", h, pts);
  CHECK(rep.energy_like_se < 1e-10);
  CHECK(rep.angular_momentum_se < 1e-10);
  CHECK(rep.hamiltonian_se == 0.0);
}

TEST_CASE("radial motion has zero angular momentum") {
  std::vector<PhasePoint> pts;
  const Vector dir = vec({0.6, -0.8});
  for (int i = 0; i < 20; ++i) pts.push_back({(i - 7.0) * 0.3 * dir, 0.3 * dir});
  std::vector<double> h(pts.size(), 0.0);
  const auto rep = conservation_from_series("radial", h, pts);
  CHECK(rep.angular_momentum_se < 1e-12);
  CHECK(rep.energy_like_se > 0.0);
  CHECK_THROWS_AS(conservation_from_series("bad", std::vector<double>{0.0}, pts), ValidationError);
}

TEST_CASE("random walk fixture is not conserved") {
  const auto chain = random_walk_fixture();
  const auto model = fit_on(chain, 2);
  const auto rep = conservation_report(model, chain);
  CHECK(rep.hamiltonian_se > 1e-3);
  CHECK(rep.angular_momentum_se > 1e-3);
  CHECK(rep.energy_like_se > 1e-3);
  const auto again = conservation_report(model, chain);
  CHECK(again.hamiltonian_se == rep.hamiltonian_se);
  CHECK(again.angular_momentum_se == rep.angular_momentum_se);
  CHECK(again.energy_like_se == rep.energy_like_se);
}

TEST_CASE("cohort action test") {
  SUBCASE("identical groups") {
    std::vector<PhaseTrajectory> phases;
    std::vector<Label> labels;
    for (int g = 0; g < 2; ++g) {
      for (int i = 0; i < 4; ++i) {
        std::vector<PhasePoint> pts;
        for (int j = 0; j < 5; ++j) pts.push_back(pp(0.3 * i + j, 1.0 - 0.2 * i * j));
        phases.push_back(action_angle("x", pts));
        labels.push_back(g == 0 ? Label::valid : Label::invalid);
      }
    }
    const auto t = action_angle_cohort_test(phases, labels);
    CHECK(t.n_valid == 4);
    CHECK(t.n_invalid == 4);
    CHECK(t.action_test.t == 0.0);
    CHECK(t.angle_range_test.t == 0.0);
    CHECK(t.action_test.p == doctest::Approx(1.0));
  }
  SUBCASE("doubling embeddings scales actions by four") {
    const auto ds = synth_dataset({20, 20, 8, 6, 1});
    ChainDataset doubled;
    for (auto c : ds.chains) {
      for (auto& s : c.steps) s *= 2.0;
      c.reference *= 2.0;
      add_chain(doubled, std::move(c));
    }
    const auto a = action_angle_cohort_test(ds, fit_pca(ds, 3));
    const auto b = action_angle_cohort_test(doubled, fit_pca(doubled, 3));
    CHECK(b.valid_mean_action == doctest::Approx(4 * a.valid_mean_action).epsilon(1e-9));
    CHECK(b.invalid_mean_action == doctest::Approx(4 * a.invalid_mean_action).epsilon(1e-9));
    CHECK(b.action_test.t == doctest::Approx(a.action_test.t).epsilon(1e-9));
    CHECK(std::signbit(b.angle_range_test.t) == std::signbit(a.angle_range_test.t));
    CHECK(std::isfinite(a.action_test.t));
    CHECK((a.action_test.p >= 0.0 && a.action_test.p <= 1.0));
  }
  SUBCASE("needs both groups") {
    const auto ds = synth_dataset({5, 1, 4, 4, 2});
    CHECK_THROWS_AS(action_angle_cohort_test(ds, fit_pca(ds, 2)), ValidationError);
  }
}
