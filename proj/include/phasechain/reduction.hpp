#pragma once

#include <filesystem>
#include <span>

#include <Eigen/Dense>
#include <json.hpp>

#include "phasechain/chain.hpp"

namespace phasechain {

/// Principal axes of the pooled step vectors of a cohort.
struct PcaModel {
  Vector mean;
  Eigen::MatrixXd components;  // k x d, one orthonormal axis per row
  Vector explained_variance;   // k entries, non-increasing
  double total_variance = 0.0;

  Eigen::Index dimension() const noexcept { return mean.size(); }
  Eigen::Index rank() const noexcept { return components.rows(); }

  Vector project(const Vector& x) const;
  /// Projection onto the leading `k` axes only.
  Vector project(const Vector& x, Eigen::Index k) const;
  Vector reconstruct(const Vector& coords) const;
};

/// Fits on the rows of `samples` (n x d). Covariance uses the 1/n
/// normalization. Each axis is signed so its largest-magnitude entry is
/// positive (first such entry on ties).
PcaModel fit_pca(const Eigen::MatrixXd& samples, Eigen::Index k);

/// Fits on every step vector of every chain; reference vectors are excluded.
PcaModel fit_pca(const ChainDataset& dataset, Eigen::Index k);

/// Maps steps and reference into component coordinates. Id, label and texts
/// are kept.
EmbeddedChain project_chain(const PcaModel& model, const EmbeddedChain& chain);

/// [mean projected coordinates (k values), native trajectory length, native
/// smoothness]: the classifier input for one chain.
Vector chain_summary_features(const PcaModel& model, const EmbeddedChain& chain);

nlohmann::ordered_json pca_to_json(const PcaModel& model);
PcaModel pca_from_json(const nlohmann::ordered_json& node);
void save_pca(const PcaModel& model, const std::filesystem::path& path);
PcaModel load_pca(const std::filesystem::path& path);

}  // namespace phasechain
