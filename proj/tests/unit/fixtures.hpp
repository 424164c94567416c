#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "phasechain/chain.hpp"

namespace phasechain::testing {

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline std::vector<Vector> points(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<Vector> out;
  for (const auto& r : rows) out.push_back(vec(r));
  return out;
}

/// n samples of a full circle of radius r in the xy-plane of R^3.
inline std::vector<Vector> circle(double r, int n) {
  std::vector<Vector> out;
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * std::numbers::pi * i / n;
    out.push_back(vec({r * std::cos(t), r * std::sin(t), 0.0}));
  }
  return out;
}

/// (cos t, sin t, t) for t in [0, 4 pi], n samples.
inline std::vector<Vector> helix(int n, double z_sign = 1.0) {
  std::vector<Vector> out;
  for (int i = 0; i < n; ++i) {
    const double t = 4.0 * std::numbers::pi * i / (n - 1);
    out.push_back(vec({std::cos(t), std::sin(t), z_sign * t}));
  }
  return out;
}

inline std::vector<Vector> line(int n, const Vector& origin, const Vector& direction) {
  std::vector<Vector> out;
  for (int i = 0; i < n; ++i) out.push_back(origin + static_cast<double>(i) * direction);
  return out;
}

inline EmbeddedChain make_chain(std::string id, std::vector<Vector> steps, Vector reference,
                                Label label = Label::unknown) {
  EmbeddedChain c;
  c.id = std::move(id);
  c.steps = std::move(steps);
  c.reference = std::move(reference);
  c.label = label;
  return c;
}

/// Fixed rotation of R^3 (not axis aligned).
inline Eigen::Matrix3d test_rotation() {
  return (Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, 3).normalized()) *
          Eigen::AngleAxisd(-1.1, Eigen::Vector3d(0, 1, -1).normalized()))
      .toRotationMatrix();
}

/// Isotropic Gaussian random walk in R^d starting at the origin.
inline std::vector<Vector> random_walk(std::uint64_t seed, int n, Eigen::Index d) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<Vector> out{Vector::Zero(d)};
  for (int i = 1; i < n; ++i) {
    Vector step(d);
    for (Eigen::Index j = 0; j < d; ++j) step[j] = nd(rng);
    out.push_back(out.back() + step);
  }
  return out;
}

/// Fixed non-conserving chain: seed 99, 12 steps in R^8, reference e0.
inline EmbeddedChain random_walk_fixture() {
  Vector ref = Vector::Zero(8);
  ref[0] = 1.0;
  return make_chain("walk-99", random_walk(99, 12, 8), ref);
}

}  // namespace phasechain::testing
