#include "phasechain/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "phasechain/energy.hpp"
#include "phasechain/error.hpp"

namespace phasechain::geometry {

namespace {

Eigen::Vector3d as3(const Vector& v) { return Eigen::Vector3d(v[0], v[1], v[2]); }

void require_3d(std::span<const Vector> points, const char* what) {
  for (const auto& p : points) {
    if (p.size() != 3) throw ValidationError(std::string(what) + " needs a 3-D trajectory (reduce first)");
  }
}

double angle_between(const Vector& a, const Vector& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na < kDegenerateEps || nb < kDegenerateEps) return 0.0;
  const Vector ua = a / na;
  const Vector ub = b / nb;
  return 2.0 * std::atan2((ua - ub).norm(), (ua + ub).norm());
}

}  // namespace

std::vector<double> step_magnitudes(std::span<const Vector> points) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) out.push_back((points[i + 1] - points[i]).norm());
  return out;
}

std::vector<double> turning_angles(std::span<const Vector> points) {
  const auto momenta = momentum_sequence(points);
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < momenta.size(); ++i) out.push_back(angle_between(momenta[i], momenta[i + 1]));
  return out;
}

std::vector<double> discrete_curvature(std::span<const Vector> points) {
  const auto momenta = momentum_sequence(points);
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < momenta.size(); ++i) {
    const Vector& velocity = momenta[i];
    const double speed2 = velocity.squaredNorm();
    if (std::sqrt(speed2) < kDegenerateEps) {
      out.push_back(0.0);
      continue;
    }
    const Vector accel = momenta[i + 1] - velocity;
    const Vector normal_accel = accel - (accel.dot(velocity) / speed2) * velocity;
    // |a x v| = |a_perp| |v|, so kappa = |a_perp| / |v|^2. Same degeneracy
    // rule as the Frenet normal: tangent turn below eps counts as straight.
    const double perp = normal_accel.norm();
    out.push_back(perp < kDegenerateEps * std::sqrt(speed2) ? 0.0 : perp / speed2);
  }
  return out;
}

std::vector<double> discrete_torsion(std::span<const Vector> points) {
  require_3d(points, "torsion");
  const auto momenta = momentum_sequence(points);
  std::vector<double> out;
  for (std::size_t i = 0; i + 2 < momenta.size(); ++i) {
    // det(p0, p1, p2) == det(p0, d2, d3) with d2, d3 the second and third
    // differences; the latter avoids cancellation on finely sampled curves.
    const Eigen::Vector3d p0 = as3(momenta[i]);
    const Eigen::Vector3d d2 = as3(momenta[i + 1] - momenta[i]);
    const Eigen::Vector3d d3 = as3(momenta[i + 2] - 2.0 * momenta[i + 1] + momenta[i]);
    const Eigen::Vector3d cross = p0.cross(d2);
    const double cn = cross.norm();
    out.push_back(cn < kDegenerateEps ? 0.0 : cross.dot(d3) / (cn * cn));
  }
  return out;
}

FrenetResult frenet_frames(std::span<const Vector> points) {
  require_3d(points, "Frenet frames");
  if (points.size() < 4) throw ValidationError("Frenet frames need at least 4 points");
  const auto momenta = momentum_sequence(points);
  const auto kappa = discrete_curvature(points);
  const auto tau = discrete_torsion(points);
  FrenetResult result;
  for (std::size_t i = 0; i + 3 < points.size(); ++i) {
    const Eigen::Vector3d v0 = as3(momenta[i]);
    const Eigen::Vector3d v1 = as3(momenta[i + 1]);
    if (v0.norm() < kDegenerateEps || v1.norm() < kDegenerateEps) {
      result.degenerate.push_back(i);
      continue;
    }
    const Eigen::Vector3d t0 = v0.normalized();
    const Eigen::Vector3d dt = v1.normalized() - t0;
    const Eigen::Vector3d dt_perp = dt - dt.dot(t0) * t0;
    if (dt_perp.norm() < kDegenerateEps) {
      result.degenerate.push_back(i);
      continue;
    }
    FrenetFrame f;
    f.index = i;
    f.tangent = t0;
    f.normal = dt_perp.normalized();
    f.binormal = f.tangent.cross(f.normal);
    f.kappa = kappa[i];
    f.tau = tau[i];
    result.frames.push_back(f);
  }
  return result;
}

std::vector<std::pair<double, double>> angle_rate_check(std::span<const Vector> points) {
  constexpr double kStepSpacing = 1.0;
  const auto theta = turning_angles(points);
  const auto kappa = discrete_curvature(points);
  const auto speed = step_magnitudes(points);
  std::vector<std::pair<double, double>> out;
  out.reserve(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) out.emplace_back(theta[i], kappa[i] * speed[i] * kStepSpacing);
  return out;
}

double trajectory_length(std::span<const Vector> points) {
  double total = 0.0;
  for (double v : step_magnitudes(points)) total += v;
  return total;
}

double smoothness(std::span<const Vector> points) {
  if (points.size() < 3) throw ValidationError("smoothness needs at least 3 points");
  const auto theta = turning_angles(points);
  double sum_cos = 0.0;
  for (double a : theta) sum_cos += std::cos(a);
  const double s = 0.5 * (1.0 + sum_cos / static_cast<double>(theta.size()));
  return std::clamp(s, 0.0, 1.0);
}

GeometryProfile geometry_profile(std::span<const Vector> points, std::string chain_id) {
  if (points.size() < 2) throw ValidationError("geometry needs at least 2 points");
  GeometryProfile g;
  g.chain_id = std::move(chain_id);
  g.magnitudes = step_magnitudes(points);
  for (double v : g.magnitudes) g.length += v;
  g.angles = turning_angles(points);
  g.curvatures = discrete_curvature(points);
  if (points.size() >= 3) g.smoothness = smoothness(points);
  if (points.front().size() == 3) g.torsions = discrete_torsion(points);
  return g;
}

}  // namespace phasechain::geometry
