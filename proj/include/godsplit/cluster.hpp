#pragma once

#include <cstddef>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "godsplit/structsim.hpp"

namespace godsplit {

struct ClusterConfig {
  std::size_t min_methods = 3;  // OPTICS minPts, also the smallest cluster kept
  double xi = 0.05;
  // A reachability step counts as steep only if it also changes by at least this much.
  double min_step = 0.1;
  // A candidate cluster whose members are all reached at this distance or
  // more (no positive similarity to anything before them) is dropped.
  double max_link_distance = 1.0;

  void validate() const;
};

// Every method is assigned to exactly one of k sub-classes.
struct Partition {
  std::vector<int> labels;
  int k = 0;
  std::set<std::size_t> noise_assigned;
  std::vector<std::string> warnings;

  bool operator==(const Partition&) const = default;
};

// 1 - similarity clamped to [0, 2], zero diagonal.
Eigen::MatrixXd to_distance(const SimilarityMatrix& similarity);

struct OpticsResult {
  std::vector<std::size_t> ordering;
  std::vector<double> reachability;  // indexed by method id; +inf for the first point
  std::vector<double> core_distance;
  std::vector<long> predecessor;     // -1 where undefined
};

// OPTICS with an unbounded radius. Processing starts at method 0 and ties are
// broken by the smaller method id. Throws TooFewMethods when n < min_methods.
OpticsResult optics_order(const Eigen::MatrixXd& distance, std::size_t min_methods);

inline constexpr int kNoise = -1;

// Xi-steep-area extraction over the reachability plot. Innermost clusters win
// and clusters smaller than min_methods are not formed. Returns one label per
// method id; unclustered methods get kNoise.
std::vector<int> extract_clusters(const OpticsResult& optics, const ClusterConfig& config);

// Plain xi extraction: no min_step and no max_link_distance.
std::vector<int> extract_clusters(const OpticsResult& optics, double xi, std::size_t min_methods);

// Each noise method joins the cluster with the highest mean similarity to the
// cluster's original members (smaller index on ties). Cluster indices are
// renumbered by smallest member id first. Throws NoClusters if all are noise.
Partition assign_noise(const std::vector<int>& raw_labels, const SimilarityMatrix& similarity);

// to_distance -> optics_order -> extract_clusters -> assign_noise. Falls back
// to a single sub-class with a warning when nothing can be clustered.
Partition refactor(const SimilarityMatrix& similarity, const ClusterConfig& config = {});

// Chance-corrected agreement between two labelings of the same items.
double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace godsplit
