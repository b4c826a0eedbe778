#include "grademiner/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <thread>

#include "grademiner/error.hpp"

namespace grademiner {

namespace {

void check_points(std::span<const Point> points) {
  if (points.empty()) throw Error(ErrorCode::TooFewDistinctPoints, "no points");
  const auto dim = points.front().dim();
  if (dim == 0) throw Error(ErrorCode::DimensionMismatch, "points must have at least one coordinate");
  for (const auto& p : points) {
    if (p.dim() != dim) throw Error(ErrorCode::DimensionMismatch, "points differ in dimension");
    for (const double x : p.coords)
      if (!std::isfinite(x)) throw Error(ErrorCode::OutOfRange, "non-finite coordinate");
  }
}

// Unbiased draw from [0, n) on the raw mt19937_64 stream, so the sequence is
// identical on every standard library.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  while (true) {
    const std::uint64_t x = rng();
    if (x >= threshold) return x % n;
  }
}

std::size_t nearest(const Point& p, std::span<const Point> centroids) {
  std::size_t best = 0;
  double best_d = squared_distance(p, centroids[0]);
  for (std::size_t c = 1; c < centroids.size(); ++c) {
    const double d = squared_distance(p, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

double max_movement(std::span<const Point> before, std::span<const Point> after) {
  double m = 0.0;
  for (std::size_t c = 0; c < before.size(); ++c)
    for (std::size_t j = 0; j < before[c].dim(); ++j)
      m = std::max(m, std::abs(after[c].coords[j] - before[c].coords[j]));
  return m;
}

}  // namespace

void KMeansConfig::validate() const {
  if (k < 1) throw Error(ErrorCode::InvalidConfig, "k must be at least 1");
  if (max_iters < 1) throw Error(ErrorCode::InvalidConfig, "max_iters must be at least 1");
  if (!(epsilon >= 0.0)) throw Error(ErrorCode::InvalidConfig, "epsilon must be non-negative");
  if (threads < 1) throw Error(ErrorCode::InvalidConfig, "threads must be at least 1");
}

std::vector<std::size_t> ClusterModel::cluster_sizes() const {
  std::vector<std::size_t> sizes(centroids.size(), 0);
  for (const auto a : assignment) ++sizes[a];
  return sizes;
}

double squared_distance(const Point& a, const Point& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "dimension mismatch");
  double d = 0.0;
  for (std::size_t j = 0; j < a.dim(); ++j) {
    const double diff = a.coords[j] - b.coords[j];
    d += diff * diff;
  }
  return d;
}

std::vector<Point> init_centroids(std::span<const Point> points, const KMeansConfig& cfg) {
  cfg.validate();
  check_points(points);

  std::vector<Point> distinct;
  std::set<Point> seen;
  for (const auto& p : points)
    if (seen.insert(p).second) distinct.push_back(p);
  if (distinct.size() < cfg.k)
    throw Error(ErrorCode::TooFewDistinctPoints,
                "k = " + std::to_string(cfg.k) + " exceeds " + std::to_string(distinct.size()) +
                    " distinct points");

  std::mt19937_64 rng(cfg.seed);
  for (std::size_t i = 0; i < cfg.k; ++i) {
    const auto j = i + draw_below(rng, distinct.size() - i);
    std::swap(distinct[i], distinct[j]);
  }
  distinct.resize(cfg.k);
  return distinct;
}

std::vector<std::size_t> assign_points(std::span<const Point> points,
                                       std::span<const Point> centroids,
                                       std::size_t threads) {
  if (centroids.empty()) throw Error(ErrorCode::DimensionMismatch, "no centroids");
  const auto dim = centroids.front().dim();
  for (const auto& c : centroids)
    if (c.dim() != dim) throw Error(ErrorCode::DimensionMismatch, "centroids differ in dimension");
  for (const auto& p : points)
    if (p.dim() != dim) throw Error(ErrorCode::DimensionMismatch, "point/centroid dimension mismatch");

  std::vector<std::size_t> out(points.size());
  const auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = nearest(points[i], centroids);
  };

  const auto n_threads = std::min(std::max<std::size_t>(threads, 1), points.size());
  if (n_threads <= 1) {
    work(0, points.size());
    return out;
  }
  // Each point is written by exactly one worker; no shared accumulation.
  std::vector<std::jthread> pool;
  const auto chunk = (points.size() + n_threads - 1) / n_threads;
  for (std::size_t begin = 0; begin < points.size(); begin += chunk)
    pool.emplace_back(work, begin, std::min(points.size(), begin + chunk));
  pool.clear();
  return out;
}

std::vector<Point> recompute_centroids(std::span<const Point> points,
                                       std::span<const std::size_t> assignment,
                                       std::size_t k) {
  check_points(points);
  if (k < 1) throw Error(ErrorCode::InvalidAssignmentIndex, "k must be at least 1");
  if (assignment.size() != points.size())
    throw Error(ErrorCode::DimensionMismatch, "assignment length differs from point count");
  for (const auto a : assignment)
    if (a >= k)
      throw Error(ErrorCode::InvalidAssignmentIndex,
                  "cluster index " + std::to_string(a) + " not below k = " + std::to_string(k));

  const auto dim = points.front().dim();
  std::vector<Point> centroids(k, Point{std::vector<double>(dim, 0.0)});
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto& sum = centroids[assignment[i]].coords;
    for (std::size_t j = 0; j < dim; ++j) sum[j] += points[i].coords[j];
    ++counts[assignment[i]];
  }
  for (std::size_t c = 0; c < k; ++c)
    if (counts[c] > 0)
      for (auto& x : centroids[c].coords) x /= static_cast<double>(counts[c]);

  // Empty clusters take the point farthest from its own cluster's mean.
  std::vector<bool> taken(points.size(), false);
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] > 0) continue;
    std::size_t far = points.size();
    double far_d = -1.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (taken[i]) continue;
      const double d = squared_distance(points[i], centroids[assignment[i]]);
      if (d > far_d) {
        far_d = d;
        far = i;
      }
    }
    if (far == points.size()) break;  // more empty clusters than points
    taken[far] = true;
    centroids[c] = points[far];
  }
  return centroids;
}

double sse(std::span<const Point> points, std::span<const Point> centroids,
           std::span<const std::size_t> assignment) {
  if (assignment.size() != points.size())
    throw Error(ErrorCode::DimensionMismatch, "assignment length differs from point count");
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (assignment[i] >= centroids.size())
      throw Error(ErrorCode::InvalidAssignmentIndex, "assignment refers to a missing centroid");
    total += squared_distance(points[i], centroids[assignment[i]]);
  }
  return total;
}

ClusterModel fit(std::span<const Point> points, const KMeansConfig& cfg) {
  ClusterModel model;
  model.centroids = init_centroids(points, cfg);

  for (std::size_t it = 1; it <= cfg.max_iters; ++it) {
    auto assignment = assign_points(points, model.centroids, cfg.threads);
    auto next = recompute_centroids(points, assignment, cfg.k);
    const double moved = max_movement(model.centroids, next);
    model.centroids = std::move(next);
    model.iterations = it;
    model.sse_trace.push_back(sse(points, model.centroids, assignment));
    model.assignment = std::move(assignment);
    if (moved <= cfg.epsilon &&
        assign_points(points, model.centroids, cfg.threads) == model.assignment) {
      model.converged = true;
      break;
    }
  }
  model.sse = model.sse_trace.back();
  return model;
}

ClusterModel fit_best_of(std::span<const Point> points, const KMeansConfig& cfg,
                         std::size_t restarts) {
  if (restarts < 1) throw Error(ErrorCode::InvalidConfig, "restarts must be at least 1");
  ClusterModel best;
  for (std::size_t r = 0; r < restarts; ++r) {
    auto run_cfg = cfg;
    run_cfg.seed = cfg.seed + r;
    auto model = fit(points, run_cfg);
    if (r == 0 || model.sse < best.sse) best = std::move(model);
  }
  return best;
}

}  // namespace grademiner
