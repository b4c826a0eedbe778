#pragma once

// Lloyd's k-means over real-valued feature vectors.
//
// One fit alternates two steps until the centroids stop moving:
//   assign     each point goes to its nearest centroid (squared Euclidean
//              distance, ties to the lowest centroid index);
//   recompute  each centroid becomes the mean of its members. A cluster that
//              ends up empty is re-seeded at the point lying farthest from
//              its own cluster's mean.
// Every function here is pure; a fit is fully determined by its inputs and
// the seed.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace grademiner {

struct Point {
  std::vector<double> coords;

  std::size_t dim() const noexcept { return coords.size(); }

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
};

struct KMeansConfig {
  std::size_t k = 3;
  std::uint64_t seed = 0;
  std::size_t max_iters = 100;
  double epsilon = 1e-9;  // max per-coordinate centroid movement
  // Worker threads for the assignment step. Results do not depend on it.
  std::size_t threads = 1;

  void validate() const;
};

struct ClusterModel {
  std::vector<Point> centroids;
  std::vector<std::size_t> assignment;
  std::size_t iterations = 0;
  double sse = 0.0;
  bool converged = false;
  // Objective after each assign+recompute round.
  std::vector<double> sse_trace;

  std::vector<std::size_t> cluster_sizes() const;

  friend bool operator==(const ClusterModel&, const ClusterModel&) = default;
};

double squared_distance(const Point& a, const Point& b);

/// Samples k distinct input points uniformly, without replacement, from a
/// mt19937_64 stream seeded with cfg.seed.
std::vector<Point> init_centroids(std::span<const Point> points, const KMeansConfig& cfg);

std::vector<std::size_t> assign_points(std::span<const Point> points,
                                       std::span<const Point> centroids,
                                       std::size_t threads = 1);

std::vector<Point> recompute_centroids(std::span<const Point> points,
                                       std::span<const std::size_t> assignment,
                                       std::size_t k);

double sse(std::span<const Point> points, std::span<const Point> centroids,
           std::span<const std::size_t> assignment);

/// Runs Lloyd iterations from init_centroids(). The returned centroids are
/// always the member means of the returned assignment. The model is marked
/// converged only when the last round moved no centroid coordinate by more
/// than epsilon and re-assigning against the final centroids reproduces the
/// assignment, so a converged model is a fixed point.
ClusterModel fit(std::span<const Point> points, const KMeansConfig& cfg);

/// Fits with seeds cfg.seed, cfg.seed + 1, ... and keeps the lowest sse
/// (earliest seed on ties).
ClusterModel fit_best_of(std::span<const Point> points, const KMeansConfig& cfg,
                         std::size_t restarts);

}  // namespace grademiner
