#include "phasechain/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "phasechain/energy.hpp"
#include "phasechain/error.hpp"

namespace phasechain::canonical {

std::vector<double> unwrap_angles(std::span<const double> angles) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  std::vector<double> out(angles.begin(), angles.end());
  double offset = 0.0;
  for (std::size_t i = 1; i < out.size(); ++i) {
    const double jump = angles[i] - angles[i - 1];
    offset -= kTwoPi * std::round(jump / kTwoPi);
    out[i] = angles[i] + offset;
  }
  return out;
}

PhaseTrajectory action_angle(std::string chain_id, std::vector<PhasePoint> points) {
  PhaseTrajectory phase;
  phase.chain_id = std::move(chain_id);
  phase.points = std::move(points);
  if (phase.points.empty()) throw ValidationError("action-angle map needs at least one phase point");
  phase.actions.reserve(phase.points.size());
  phase.angles.reserve(phase.points.size());
  for (const auto& pt : phase.points) {
    if (pt.q.size() < 1 || pt.p.size() < 1) throw ValidationError("phase point without coordinates");
    const double q0 = pt.q[0];
    const double p0 = pt.p[0];
    phase.actions.push_back(0.5 * (q0 * q0 + p0 * p0));
    double theta = std::atan2(p0, q0);
    if (theta == -std::numbers::pi) theta = std::numbers::pi;
    phase.angles.push_back(theta);
  }
  phase.unwrapped_angles = unwrap_angles(phase.angles);
  phase.mean_action = stats::mean(phase.actions);
  const auto [lo, hi] = std::minmax_element(phase.unwrapped_angles.begin(), phase.unwrapped_angles.end());
  phase.angle_range = *hi - *lo;
  return phase;
}

PhaseTrajectory phase_trajectory(const PcaModel& model, const EmbeddedChain& chain, Eigen::Index k) {
  if (k < 1 || k > 3) throw ValidationError("phase trajectory: k must be 1, 2 or 3");
  if (model.rank() < k) {
    throw ValidationError("phase trajectory: model has " + std::to_string(model.rank()) + " components, k=" +
                          std::to_string(k));
  }
  if (chain.steps.size() < 2) throw ValidationError("phase trajectory needs at least 2 steps");
  std::vector<Vector> q;
  q.reserve(chain.steps.size());
  for (const auto& s : chain.steps) q.push_back(model.project(s, k));
  std::vector<PhasePoint> points;
  points.reserve(q.size() - 1);
  for (std::size_t i = 0; i + 1 < q.size(); ++i) points.push_back({q[i], q[i + 1] - q[i]});
  return action_angle(chain.id, std::move(points));
}

double rms_normalized_action(const PhaseTrajectory& phase, const EmbeddedChain& chain) {
  double ss = 0.0;
  double count = 0.0;
  for (const auto& s : chain.steps) {
    ss += s.squaredNorm();
    count += static_cast<double>(s.size());
  }
  const double mean_square = ss / count;
  return mean_square > 0.0 ? phase.mean_action / mean_square : 0.0;
}

ActionAngleCohortTest action_angle_cohort_test(std::span<const PhaseTrajectory> phases,
                                               std::span<const Label> labels) {
  if (phases.size() != labels.size()) throw ValidationError("action-angle test: one label per trajectory");
  std::vector<double> va, ia, vr, ir;
  for (std::size_t i = 0; i < phases.size(); ++i) {
    if (labels[i] == Label::unknown) continue;
    const bool valid = labels[i] == Label::valid;
    (valid ? va : ia).push_back(phases[i].mean_action);
    (valid ? vr : ir).push_back(phases[i].angle_range);
  }
  if (va.size() < 2 || ia.size() < 2) {
    throw ValidationError("action-angle test needs at least 2 valid and 2 invalid chains");
  }
  ActionAngleCohortTest r;
  r.n_valid = va.size();
  r.n_invalid = ia.size();
  r.valid_mean_action = stats::mean(va);
  r.invalid_mean_action = stats::mean(ia);
  r.valid_mean_angle_range = stats::mean(vr);
  r.invalid_mean_angle_range = stats::mean(ir);
  r.action_test = stats::welch_t_test(va, ia);
  r.angle_range_test = stats::welch_t_test(vr, ir);
  return r;
}

ActionAngleCohortTest action_angle_cohort_test(const ChainDataset& dataset, const PcaModel& model) {
  std::vector<PhaseTrajectory> phases;
  std::vector<Label> labels;
  for (const auto& chain : dataset.chains) {
    phases.push_back(phase_trajectory(model, chain, std::min<Eigen::Index>(model.rank(), 3)));
    labels.push_back(chain.label);
  }
  return action_angle_cohort_test(phases, labels);
}

ConservationReport conservation_from_series(std::string chain_id, std::span<const double> hamiltonian,
                                            std::span<const PhasePoint> points) {
  if (hamiltonian.size() != points.size()) throw ValidationError("conservation: series lengths differ");
  if (points.size() < 2) throw ValidationError("conservation needs at least 2 steps (m >= 3)");
  std::vector<double> angular(points.size()), energy(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& q = points[i].q;
    const auto& p = points[i].p;
    if (q.size() < 2 || p.size() < 2) throw ValidationError("conservation needs a 2-D reduction");
    angular[i] = q[0] * p[1] - q[1] * p[0];
    energy[i] = 0.5 * p.head(2).squaredNorm() + 0.5 * q.head(2).squaredNorm();
  }
  ConservationReport r;
  r.chain_id = std::move(chain_id);
  r.hamiltonian_se = stats::standard_error(hamiltonian);
  r.angular_momentum_se = stats::standard_error(angular);
  r.energy_like_se = stats::standard_error(energy);
  return r;
}

ConservationReport conservation_report(const PcaModel& model, const EmbeddedChain& chain) {
  if (model.rank() < 2) throw ValidationError("conservation report needs a 2-D reduction");
  if (chain.steps.size() < 3) throw ValidationError("conservation report needs m >= 3");
  const auto energy = energy_profile(chain);
  const auto phase = phase_trajectory(model, chain, 2);
  return conservation_from_series(chain.id, energy.hamiltonian, phase.points);
}

}  // namespace phasechain::canonical
