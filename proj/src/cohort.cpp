#include "phasechain/cohort.hpp"

#include <exception>
#include <functional>

#include "phasechain/error.hpp"

namespace phasechain {

namespace {

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const IoError*>(&e)) return 1;
  if (dynamic_cast<const ValidationError*>(&e)) return 2;
  return 3;
}

template <typename Fn>
auto stage(const std::string& chain_id, const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(chain_id, name, e.what(), exit_code_for(e));
  }
}

}  // namespace

ChainRecord analyze_chain(const EmbeddedChain& chain, const PcaModel& model, const AnalysisOptions& options) {
  ChainRecord r;
  r.chain_id = chain.id;
  r.label = chain.label;
  r.steps = chain.steps.size();
  const auto& id = chain.id;

  r.energy = stage(id, "energy", [&] { return energy_profile(chain); });
  r.geometry = stage(id, "geometry", [&] { return geometry::geometry_profile(chain); });
  r.projected = stage(id, "reduction", [&] { return project_chain(model, chain).steps; });

  if (chain.dimension() != 3 && model.rank() == 3 && r.steps >= 4) {
    r.geometry.torsions = stage(id, "geometry", [&] { return geometry::discrete_torsion(r.projected); });
    r.torsion_from_reduction = true;
  } else if (r.geometry.torsions.empty()) {
    r.flags.push_back("torsion undefined: needs a 3-D trajectory with at least 4 steps");
  }
  if (r.steps >= 4 && (chain.dimension() == 3 || model.rank() == 3)) {
    const auto& pts = chain.dimension() == 3 ? chain.steps : r.projected;
    const auto frames = stage(id, "frenet", [&] { return geometry::frenet_frames(pts); });
    r.frenet_frames = frames.frames.size();
    r.frenet_degenerate = frames.degenerate;
  }
  if (!r.geometry.smoothness) r.flags.push_back("smoothness undefined: fewer than 3 steps");

  const Eigen::Index phase_k = std::min<Eigen::Index>(model.rank(), 3);
  r.phase = stage(id, "canonical", [&] { return canonical::phase_trajectory(model, chain, phase_k); });
  r.normalized_action = canonical::rms_normalized_action(r.phase, chain);

  if (r.steps >= 3 && model.rank() >= 2) {
    r.conservation = stage(id, "conservation", [&] {
      return canonical::conservation_from_series(chain.id, r.energy.hamiltonian, r.phase.points);
    });
  } else {
    r.flags.push_back("conservation undefined: needs m >= 3 and a 2-D reduction");
  }

  r.statmech = stage(id, "statmech", [&] { return statmech_summary(chain, r.energy, options.temperature); });

  if (r.steps >= 3 && model.rank() >= 2) {
    r.features = stage(id, "features", [&] { return chain_summary_features(model, chain); });
  } else {
    r.flags.push_back("classifier features undefined: needs m >= 3");
  }
  return r;
}

std::vector<ChainRecord> analyze_chains(const ChainDataset& dataset, const PcaModel& model,
                                        const AnalysisOptions& options, Execution execution) {
  const auto n = static_cast<std::ptrdiff_t>(dataset.chains.size());
  std::vector<ChainRecord> records(dataset.chains.size());
  if (execution == Execution::serial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) records[i] = analyze_chain(dataset.chains[i], model, options);
    return records;
  }

  std::vector<std::exception_ptr> failures(dataset.chains.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      records[i] = analyze_chain(dataset.chains[i], model, options);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return records;
}

Granularity parse_granularity(std::string_view text) {
  if (text == "per-step") return Granularity::per_step;
  if (text == "per-chain") return Granularity::per_chain;
  throw ValidationError("unknown granularity '" + std::string(text) + "' (expected per-step or per-chain)");
}

std::string_view to_string(Granularity g) { return g == Granularity::per_step ? "per-step" : "per-chain"; }

namespace {

GroupComparison compare_groups(const std::vector<double>& valid, const std::vector<double>& invalid) {
  GroupComparison c;
  c.t_test = stats::welch_t_test(valid, invalid);
  c.valid_mean = stats::mean(valid);
  c.invalid_mean = stats::mean(invalid);
  try {
    c.cohens_d = stats::cohens_d(valid, invalid);
  } catch (const ValidationError&) {
  }
  return c;
}

template <typename T>
void attempt(std::optional<T>& slot, std::vector<std::string>& notes, const char* what,
             const std::function<T()>& fn) {
  try {
    slot = fn();
  } catch (const ValidationError& e) {
    notes.push_back(std::string(what) + ": " + e.what());
  } catch (const NumericalError& e) {
    notes.push_back(std::string(what) + ": " + e.what());
  }
}

}  // namespace

CohortStatistics cohort_statistics(const std::vector<ChainRecord>& records, Granularity granularity,
                                   std::uint64_t split_salt) {
  CohortStatistics s;
  s.granularity = granularity;
  std::vector<const ChainRecord*> labelled;
  for (const auto& r : records) {
    if (r.label == Label::valid) ++s.n_valid;
    else if (r.label == Label::invalid) ++s.n_invalid;
    else ++s.n_unknown;
    if (r.label != Label::unknown) labelled.push_back(&r);
  }

  // Splits a per-chain scalar by label, skipping chains where it is undefined.
  const auto split = [&](const std::function<std::optional<double>(const ChainRecord&)>& get) {
    std::pair<std::vector<double>, std::vector<double>> groups;
    for (const auto* r : labelled) {
      if (const auto v = get(*r)) (r->label == Label::valid ? groups.first : groups.second).push_back(*v);
    }
    return groups;
  };
  const auto comparison = [&](std::optional<GroupComparison>& slot, const char* what,
                              const std::function<std::optional<double>(const ChainRecord&)>& get) {
    attempt<GroupComparison>(slot, s.notes, what, [&] {
      const auto [v, i] = split(get);
      return compare_groups(v, i);
    });
  };

  attempt<CohortEnergyStats>(s.energy, s.notes, "energy", [&] {
    std::vector<EnergyProfile> profiles;
    std::vector<Label> labels;
    for (const auto* r : labelled) {
      profiles.push_back(r->energy);
      labels.push_back(r->label);
    }
    return cohort_energy_stats(profiles, labels);
  });

  comparison(s.length, "trajectory length", [](const ChainRecord& r) { return r.geometry.length; });
  comparison(s.smoothness, "smoothness", [](const ChainRecord& r) { return r.geometry.smoothness; });
  comparison(s.entropy, "entropy", [](const ChainRecord& r) { return r.statmech.entropy; });
  comparison(s.free_energy, "free energy", [](const ChainRecord& r) { return r.statmech.free_energy; });
  comparison(s.hamiltonian_se, "hamiltonian standard error", [](const ChainRecord& r) {
    return r.conservation ? std::optional(r.conservation->hamiltonian_se) : std::nullopt;
  });
  comparison(s.angular_momentum_se, "angular momentum standard error", [](const ChainRecord& r) {
    return r.conservation ? std::optional(r.conservation->angular_momentum_se) : std::nullopt;
  });
  comparison(s.energy_like_se, "energy-like standard error", [](const ChainRecord& r) {
    return r.conservation ? std::optional(r.conservation->energy_like_se) : std::nullopt;
  });

  attempt<canonical::ActionAngleCohortTest>(s.action_angle, s.notes, "action-angle", [&] {
    std::vector<canonical::PhaseTrajectory> phases;
    std::vector<Label> labels;
    for (const auto* r : labelled) {
      phases.push_back(r->phase);
      labels.push_back(r->label);
    }
    return canonical::action_angle_cohort_test(phases, labels);
  });

  // PCA-coordinate samples at the requested granularity.
  const Eigen::Index k = records.empty() || records.front().projected.empty()
                             ? 0
                             : std::min<Eigen::Index>(records.front().projected.front().size(), 3);
  std::vector<Vector> coords;
  std::vector<bool> coord_valid;
  for (const auto* r : labelled) {
    if (granularity == Granularity::per_step) {
      for (const auto& q : r->projected) {
        coords.push_back(q.head(k));
        coord_valid.push_back(r->label == Label::valid);
      }
    } else {
      Vector centroid = Vector::Zero(k);
      for (const auto& q : r->projected) centroid += q.head(k);
      coords.push_back(centroid / static_cast<double>(r->projected.size()));
      coord_valid.push_back(r->label == Label::valid);
    }
  }
  s.pca_axes.resize(static_cast<std::size_t>(k));
  for (Eigen::Index axis = 0; axis < k; ++axis) {
    const std::string what = "PCA axis " + std::to_string(axis + 1);
    attempt<GroupComparison>(s.pca_axes[static_cast<std::size_t>(axis)], s.notes, what.c_str(), [&] {
      std::vector<double> v, i;
      for (std::size_t j = 0; j < coords.size(); ++j) (coord_valid[j] ? v : i).push_back(coords[j][axis]);
      return compare_groups(v, i);
    });
  }
  s.manova_samples = coords.size();
  attempt<stats::ManovaResult>(s.manova, s.notes, "MANOVA", [&] {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(coords.size()), k);
    for (std::size_t j = 0; j < coords.size(); ++j) x.row(static_cast<Eigen::Index>(j)) = coords[j].transpose();
    return stats::manova_two_group(x, coord_valid);
  });

  attempt<ClassifierSummary>(s.classifier, s.notes, "logistic regression", [&] {
    std::vector<const ChainRecord*> train, test;
    for (const auto* r : labelled) {
      if (!r->features) continue;
      (stats::in_test_split(r->chain_id, split_salt) ? test : train).push_back(r);
    }
    if (test.empty()) throw ValidationError("held-out split is empty");
    const auto to_matrix = [](const std::vector<const ChainRecord*>& rows) {
      Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), rows.front()->features->size());
      for (std::size_t j = 0; j < rows.size(); ++j) x.row(static_cast<Eigen::Index>(j)) = rows[j]->features->transpose();
      return x;
    };
    const auto to_labels = [](const std::vector<const ChainRecord*>& rows) {
      std::vector<bool> out;
      for (const auto* r : rows) out.push_back(r->label == Label::valid);
      return out;
    };
    if (train.empty()) throw ValidationError("training split is empty");
    const auto train_y = to_labels(train);
    const auto test_y = to_labels(test);
    ClassifierSummary c;
    c.n_train = train.size();
    c.n_test = test.size();
    c.model = stats::fit_logistic(to_matrix(train), train_y);
    const auto predict_all = [&](const std::vector<const ChainRecord*>& rows) {
      std::vector<bool> out;
      for (const auto* r : rows) out.push_back(c.model.predict(*r->features));
      return out;
    };
    c.train_accuracy = stats::classification_report(predict_all(train), train_y).accuracy;
    c.report = stats::classification_report(predict_all(test), test_y);
    c.test_accuracy = c.report.accuracy;
    return c;
  });

  return s;
}

}  // namespace phasechain
