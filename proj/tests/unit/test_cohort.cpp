#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "phasechain/cohort.hpp"
#include "phasechain/error.hpp"

using namespace phasechain;
using namespace phasechain::testing;

namespace {

bool same_vectors(const std::vector<Vector>& a, const std::vector<Vector>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

void check_identical(const ChainRecord& a, const ChainRecord& b) {
  CHECK(a.chain_id == b.chain_id);
  CHECK(a.energy.hamiltonian == b.energy.hamiltonian);
  CHECK(a.energy.conservation_score == b.energy.conservation_score);
  CHECK(a.geometry.curvatures == b.geometry.curvatures);
  CHECK(a.geometry.torsions == b.geometry.torsions);
  CHECK(a.geometry.smoothness == b.geometry.smoothness);
  CHECK(same_vectors(a.projected, b.projected));
  CHECK(a.phase.actions == b.phase.actions);
  CHECK(a.phase.unwrapped_angles == b.phase.unwrapped_angles);
  CHECK(a.normalized_action == b.normalized_action);
  REQUIRE(a.conservation.has_value() == b.conservation.has_value());
  if (a.conservation) {
    CHECK(a.conservation->hamiltonian_se == b.conservation->hamiltonian_se);
    CHECK(a.conservation->angular_momentum_se == b.conservation->angular_momentum_se);
    CHECK(a.conservation->energy_like_se == b.conservation->energy_like_se);
  }
  CHECK(a.statmech.entropy == b.statmech.entropy);
  CHECK(a.statmech.free_energy == b.statmech.free_energy);
  REQUIRE(a.features.has_value() == b.features.has_value());
  if (a.features) CHECK(*a.features == *b.features);
  CHECK(a.flags == b.flags);
}

}  // namespace

TEST_CASE("parallel and serial paths agree bit for bit") {
  const auto ds = synth_dataset({150, 150, 12, 7, 4});
  const auto model = fit_pca(ds, 3);
  const auto serial = analyze_chains(ds, model, {}, Execution::serial);
  const auto parallel = analyze_chains(ds, model, {}, Execution::parallel);
  REQUIRE(serial.size() == ds.chains.size());
  REQUIRE(parallel.size() == ds.chains.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].chain_id == ds.chains[i].id);
    check_identical(serial[i], parallel[i]);
  }
}

TEST_CASE("records for a generic chain") {
  const auto ds = synth_dataset({10, 10, 6, 6, 2});
  const auto model = fit_pca(ds, 3);
  const auto r = analyze_chain(ds.chains[0], model, {});
  CHECK(r.steps == 6);
  CHECK(r.label == Label::valid);
  CHECK(r.torsion_from_reduction);
  CHECK(r.geometry.torsions.size() == 3);
  CHECK(r.frenet_frames + r.frenet_degenerate.size() == 3);
  CHECK(r.projected.size() == 6);
  CHECK(r.phase.points.size() == 5);
  CHECK(r.conservation.has_value());
  REQUIRE(r.features.has_value());
  CHECK(r.features->size() == 5);
  CHECK(r.flags.empty());
}

TEST_CASE("short chains are flagged, not dropped") {
  ChainDataset ds;
  add_chain(ds, make_chain("long", random_walk(1, 6, 4), vec({1, 0, 0, 0}), Label::valid));
  add_chain(ds, make_chain("short", random_walk(2, 2, 4), vec({0, 1, 0, 0}), Label::invalid));
  const auto model = fit_pca(ds, 2);
  const auto records = analyze_chains(ds, model, {});
  REQUIRE(records.size() == 2);
  const auto& r = records[1];
  CHECK(r.chain_id == "short");
  CHECK_FALSE(r.geometry.smoothness);
  CHECK_FALSE(r.conservation);
  CHECK_FALSE(r.features);
  CHECK(r.flags.size() == 4);
  CHECK(r.phase.points.size() == 1);
  CHECK(std::isfinite(r.statmech.free_energy));
}

TEST_CASE("stage failures name the chain and stage") {
  auto ds = synth_dataset({30, 30, 8, 5, 3});
  const auto model = fit_pca(ds, 3);
  // bypass the loader's dimension check
  ds.chains[7] = make_chain("bad-7", random_walk(1, 5, 5), vec({1, 0, 0, 0, 0}));
  ds.chains[40] = make_chain("bad-40", random_walk(2, 5, 5), vec({1, 0, 0, 0, 0}));
  for (auto exec : {Execution::serial, Execution::parallel}) {
    try {
      analyze_chains(ds, model, {}, exec);
      FAIL("expected a stage error");
    } catch (const StageError& e) {
      CHECK(e.chain_id() == "bad-7");
      CHECK(e.stage() == "reduction");
      CHECK(e.exit_code() == 2);
    }
  }
}

TEST_CASE("granularity names") {
  CHECK(parse_granularity("per-step") == Granularity::per_step);
  CHECK(parse_granularity("per-chain") == Granularity::per_chain);
  CHECK(to_string(Granularity::per_chain) == "per-chain");
  CHECK_THROWS_AS(parse_granularity("chain"), ValidationError);
}

TEST_CASE("cohort statistics on a separable synthetic cohort") {
  const auto ds = synth_dataset({100, 100, 16, 6, 1});
  const auto model = fit_pca(ds, 3);
  const auto records = analyze_chains(ds, model, {});

  const auto per_step = cohort_statistics(records, Granularity::per_step, 0);
  CHECK(per_step.n_valid == 100);
  CHECK(per_step.n_invalid == 100);
  CHECK(per_step.notes.empty());
  REQUIRE(per_step.energy);
  CHECK(per_step.energy->t_test.t < 0.0);
  CHECK(per_step.energy->t_test.p < 0.01);
  REQUIRE(per_step.smoothness);
  CHECK(per_step.smoothness->valid_mean > per_step.smoothness->invalid_mean);
  CHECK(per_step.smoothness->t_test.p < 0.01);
  CHECK(per_step.pca_axes.size() == 3);
  REQUIRE(per_step.manova);
  CHECK(per_step.manova_samples == 1200);
  CHECK(per_step.manova->df1 == 3.0);
  CHECK(per_step.manova->df2 == 1196.0);
  REQUIRE(per_step.classifier);
  CHECK(per_step.classifier->n_train + per_step.classifier->n_test == 200);
  CHECK(per_step.classifier->test_accuracy >= 0.9);
  REQUIRE(per_step.action_angle);
  REQUIRE(per_step.entropy);
  REQUIRE(per_step.hamiltonian_se);

  const auto per_chain = cohort_statistics(records, Granularity::per_chain, 0);
  REQUIRE(per_chain.manova);
  CHECK(per_chain.manova_samples == 200);
  CHECK(per_chain.manova->df2 == 196.0);
}

TEST_CASE("single-label cohorts leave comparisons empty") {
  const auto ds = synth_dataset({20, 0, 6, 5, 9});
  const auto model = fit_pca(ds, 3);
  const auto stats = cohort_statistics(analyze_chains(ds, model, {}), Granularity::per_step, 0);
  CHECK(stats.n_valid == 20);
  CHECK_FALSE(stats.energy);
  CHECK_FALSE(stats.manova);
  CHECK_FALSE(stats.classifier);
  CHECK_FALSE(stats.notes.empty());
}
