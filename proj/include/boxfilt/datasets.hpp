#pragma once

// Seeded synthetic point clouds used throughout the experiments: a noisy
// circle, a noisy ellipse, a circle with a central cluster, and two noisy
// concentric circles, plus Gaussian perturbation of an existing cloud.

#include <cmath>
#include <cstdint>

#include "boxfilt/box.hpp"
#include "boxfilt/rng.hpp"

namespace boxfilt {

inline constexpr double kTau = 2.0 * 3.14159265358979323846;

namespace detail {

inline void append_unit_circle(std::vector<point>& out, int n, double cx, double cy, rng& gen) {
  for (int i = 0; i < n; ++i) {
    const double t = kTau * gen.uniform01();
    out.push_back({cx + std::cos(t), cy + std::sin(t)});
  }
}

inline void append_uniform_square(std::vector<point>& out, int n, double a, double b, rng& gen) {
  for (int i = 0; i < n; ++i) {
    const double x = gen.uniform(a, b);
    const double y = gen.uniform(a, b);
    out.push_back({x, y});
  }
}

inline void scale_all(std::vector<point>& pts, double sx, double sy) {
  for (auto& p : pts) {
    p[0] *= sx;
    p[1] *= sy;
  }
}

}  // namespace detail

// Uniform samples on the unit circle centered at (1,1) plus uniform noise in
// [0,2]^2, the whole cloud scaled by 100.
inline point_cloud gen_noisy_circle(int n_circle, int n_noise, std::uint64_t seed) {
  rng gen(seed);
  std::vector<point> pts;
  pts.reserve(n_circle + n_noise);
  detail::append_unit_circle(pts, n_circle, 1.0, 1.0, gen);
  detail::append_uniform_square(pts, n_noise, 0.0, 2.0, gen);
  detail::scale_all(pts, 100.0, 100.0);
  return point_cloud(std::move(pts));
}

// Same construction as the noisy circle, but the x coordinates are scaled by
// 100 and the y coordinates by 20, then the cloud is rotated by 45 degrees
// about the origin.
inline point_cloud gen_noisy_ellipse(int n_circle, int n_noise, std::uint64_t seed) {
  rng gen(seed);
  std::vector<point> pts;
  pts.reserve(n_circle + n_noise);
  detail::append_unit_circle(pts, n_circle, 1.0, 1.0, gen);
  detail::append_uniform_square(pts, n_noise, 0.0, 2.0, gen);
  detail::scale_all(pts, 100.0, 20.0);
  const double c = std::cos(kTau / 8.0), s = std::sin(kTau / 8.0);
  for (auto& p : pts) {
    const double x = p[0], y = p[1];
    p[0] = c * x - s * y;
    p[1] = s * x + c * y;
  }
  return point_cloud(std::move(pts));
}

// Unit circle at (1,1) plus an isotropic Gaussian cluster at (1,1) with the
// given pre-scaling standard deviation, scaled by 100.
inline point_cloud gen_circle_with_cluster(int n_circle = 75, int n_cluster = 100,
                                           double cluster_noise = 0.2, std::uint64_t seed = 0) {
  rng gen(seed);
  std::vector<point> pts;
  pts.reserve(n_circle + n_cluster);
  detail::append_unit_circle(pts, n_circle, 1.0, 1.0, gen);
  for (int i = 0; i < n_cluster; ++i) {
    const double x = gen.normal(1.0, cluster_noise);
    const double y = gen.normal(1.0, cluster_noise);
    pts.push_back({x, y});
  }
  detail::scale_all(pts, 100.0, 100.0);
  return point_cloud(std::move(pts));
}

// Two concentric circles centered at (1,1) plus uniform noise in [0,2]^2,
// scaled by 100. The radii are 0.5 and 1.0 before scaling.
inline point_cloud gen_concentric(int n_inner = 100, int n_outer = 75, int n_noise = 20,
                                  std::uint64_t seed = 0) {
  rng gen(seed);
  std::vector<point> pts;
  pts.reserve(n_inner + n_outer + n_noise);
  for (int i = 0; i < n_inner; ++i) {
    const double t = kTau * gen.uniform01();
    pts.push_back({1.0 + 0.5 * std::cos(t), 1.0 + 0.5 * std::sin(t)});
  }
  detail::append_unit_circle(pts, n_outer, 1.0, 1.0, gen);
  detail::append_uniform_square(pts, n_noise, 0.0, 2.0, gen);
  detail::scale_all(pts, 100.0, 100.0);
  return point_cloud(std::move(pts));
}

// Independent N(0, sigma^2) displacement of every coordinate.
inline point_cloud add_gaussian_noise(const point_cloud& pcd, double sigma, std::uint64_t seed) {
  rng gen(seed);
  std::vector<point> pts = pcd.points;
  if (sigma != 0.0)
    for (auto& p : pts)
      for (auto& c : p) c += gen.normal(0.0, sigma);
  return point_cloud(std::move(pts));
}

// Uniform displacement in [-eps, eps] per coordinate; used by the stability
// experiments.
inline point_cloud add_uniform_noise(const point_cloud& pcd, double eps, std::uint64_t seed) {
  rng gen(seed);
  std::vector<point> pts = pcd.points;
  for (auto& p : pts)
    for (auto& c : p) c += gen.uniform(-eps, eps);
  return point_cloud(std::move(pts));
}

}  // namespace boxfilt
