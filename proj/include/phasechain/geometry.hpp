#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "phasechain/chain.hpp"

namespace phasechain::geometry {

// Discrete curve descriptors. A trajectory is a sequence of points; each
// step between consecutive points is taken as unit parameter spacing, so
// p_i = x_{i+1} - x_i plays the role of the velocity and p_{i+1} - p_i the
// acceleration.

/// Below this norm a momentum (or cross product) is treated as zero.
inline constexpr double kDegenerateEps = 1e-12;

std::vector<double> step_magnitudes(std::span<const Vector> points);

/// Angle in [0, pi] between consecutive momenta; 0 when either is zero.
std::vector<double> turning_angles(std::span<const Vector> points);

/// kappa_i = |a x v| / |v|^3 with v = p_i, a = p_{i+1} - p_i, using the
/// component of a orthogonal to v so it holds in any dimension.
std::vector<double> discrete_curvature(std::span<const Vector> points);

/// tau_i = det(p_i, p_{i+1}, p_{i+2}) / |p_i x p_{i+1}|^2. 3-D only.
std::vector<double> discrete_torsion(std::span<const Vector> points);

struct FrenetFrame {
  std::size_t index = 0;  // step the frame is attached to
  Eigen::Vector3d tangent;
  Eigen::Vector3d normal;
  Eigen::Vector3d binormal;
  double kappa = 0.0;
  double tau = 0.0;
};

struct FrenetResult {
  std::vector<FrenetFrame> frames;
  std::vector<std::size_t> degenerate;  // indices where no frame exists
};

/// One frame per index i in [0, m - 3): T from p_i, N from the part of
/// T_{i+1} - T_i orthogonal to T_i, B = T x N. Needs a 3-D trajectory with
/// m >= 4.
FrenetResult frenet_frames(std::span<const Vector> points);

/// (theta_i, kappa_i * v_i) for each interior step; the discrete form of
/// dtheta/dt = kappa v with unit spacing.
std::vector<std::pair<double, double>> angle_rate_check(std::span<const Vector> points);

double trajectory_length(std::span<const Vector> points);

/// (1 + mean cos theta_i) / 2, in [0, 1]. Needs m >= 3.
double smoothness(std::span<const Vector> points);

struct GeometryProfile {
  std::string chain_id;
  double length = 0.0;
  std::optional<double> smoothness;  // empty when m < 3
  std::vector<double> magnitudes;
  std::vector<double> angles;
  std::vector<double> curvatures;
  std::vector<double> torsions;  // empty unless the trajectory is 3-D
};

GeometryProfile geometry_profile(std::span<const Vector> points, std::string chain_id);
inline GeometryProfile geometry_profile(const EmbeddedChain& chain) {
  return geometry_profile(chain.steps, chain.id);
}

}  // namespace phasechain::geometry
