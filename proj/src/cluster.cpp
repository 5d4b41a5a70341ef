#include "godsplit/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "godsplit/error.hpp"

namespace godsplit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SteepDownArea {
  std::size_t start;
  std::size_t end;
  double mib;
};

// Extends a steep area starting at `start`. At most min_samples consecutive
// non-steep points are absorbed, and the area ends where the plot reverses.
// Ratios against an infinite reachability (the first point and the terminator)
// form areas of their own.
std::size_t extend_region(const std::vector<bool>& steep, const std::vector<bool>& reverses,
                          const std::vector<double>& plot, std::size_t start, std::size_t min_samples) {
  auto at_infinity = [&](std::size_t i) { return std::isinf(plot[i]) || std::isinf(plot[i + 1]); };
  if (at_infinity(start)) return start;
  std::size_t non_steep = 0;
  std::size_t end = start;
  for (std::size_t i = start; i < steep.size() && !at_infinity(i); ++i) {
    if (steep[i]) {
      non_steep = 0;
      end = i;
    } else if (!reverses[i]) {
      if (++non_steep > min_samples) break;
    } else {
      return end;
    }
  }
  return end;
}

std::vector<SteepDownArea> update_filter_sdas(const std::vector<SteepDownArea>& sdas, double mib, double xi_complement,
                                              const std::vector<double>& plot) {
  if (std::isinf(mib)) return {};
  std::vector<SteepDownArea> kept;
  for (auto sda : sdas) {
    if (mib <= plot[sda.start] * xi_complement) {
      sda.mib = std::max(sda.mib, mib);
      kept.push_back(sda);
    }
  }
  return kept;
}

// Trims the cluster end until the start is higher than the end or the end's
// predecessor lies inside the cluster.
bool correct_predecessor(const std::vector<double>& plot, const std::vector<long>& predecessor_plot,
                         const std::vector<std::size_t>& ordering, std::size_t& s, std::size_t& e) {
  while (s < e) {
    if (plot[s] > plot[e]) return true;
    const long p_e = predecessor_plot[e];
    for (std::size_t i = s; i < e; ++i)
      if (p_e >= 0 && static_cast<std::size_t>(p_e) == ordering[i]) return true;
    --e;
  }
  return false;
}

}  // namespace

void ClusterConfig::validate() const {
  if (min_methods < 2) throw ConfigError("min_methods must be at least 2");
  if (!(xi > 0.0 && xi < 1.0)) throw ConfigError("xi must lie in (0, 1)");
  if (!(max_link_distance > 0.0)) throw ConfigError("max_link_distance must be positive");
  if (!(min_step >= 0.0) || std::isinf(min_step)) throw ConfigError("min_step must be finite and non-negative");
}

Eigen::MatrixXd to_distance(const SimilarityMatrix& similarity) {
  Eigen::MatrixXd d = (1.0 - similarity.values.array()).cwiseMax(0.0).cwiseMin(2.0).matrix();
  d.diagonal().setZero();
  return d;
}

OpticsResult optics_order(const Eigen::MatrixXd& distance, std::size_t min_methods) {
  const auto n = static_cast<std::size_t>(distance.rows());
  if (min_methods < 2) throw ConfigError("min_methods must be at least 2");
  if (n < min_methods) throw TooFewMethods(n, min_methods);

  OpticsResult out;
  out.reachability.assign(n, kInf);
  out.core_distance.assign(n, kInf);
  out.predecessor.assign(n, -1);
  for (std::size_t p = 0; p < n; ++p) {
    std::vector<double> others;
    others.reserve(n - 1);
    for (std::size_t q = 0; q < n; ++q)
      if (q != p) others.push_back(distance(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)));
    std::nth_element(others.begin(), others.begin() + static_cast<long>(min_methods - 2), others.end());
    out.core_distance[p] = others[min_methods - 2];
  }

  std::vector<bool> processed(n, false);
  std::vector<bool> seeded(n, false);
  auto expand = [&](std::size_t p) {
    processed[p] = true;
    out.ordering.push_back(p);
    for (std::size_t o = 0; o < n; ++o) {
      if (processed[o]) continue;
      const double reach =
          std::max(out.core_distance[p], distance(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(o)));
      if (reach < out.reachability[o]) {
        out.reachability[o] = reach;
        out.predecessor[o] = static_cast<long>(p);
        seeded[o] = true;
      }
    }
  };
  for (std::size_t start = 0; start < n; ++start) {
    if (processed[start]) continue;
    expand(start);
    while (true) {
      std::size_t next = n;
      for (std::size_t o = 0; o < n; ++o) {
        if (processed[o] || !seeded[o]) continue;
        if (next == n || out.reachability[o] < out.reachability[next]) next = o;
      }
      if (next == n) break;
      expand(next);
    }
  }
  return out;
}

std::vector<int> extract_clusters(const OpticsResult& optics, const ClusterConfig& config) {
  const double xi = config.xi;
  const std::size_t min_methods = config.min_methods;
  const std::size_t n = optics.ordering.size();
  std::vector<double> plot(n + 1);
  std::vector<long> predecessor_plot(n);
  for (std::size_t i = 0; i < n; ++i) {
    plot[i] = optics.reachability[optics.ordering[i]];
    predecessor_plot[i] = optics.predecessor[optics.ordering[i]];
  }
  plot[n] = kInf;

  const double xi_complement = 1.0 - xi;
  std::vector<bool> steep_up(n), steep_down(n), downward(n), upward(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ratio = plot[i] / plot[i + 1];  // NaN for inf/inf and 0/0: compares false
    const bool big_step = std::abs(plot[i] - plot[i + 1]) >= config.min_step;  // true when one side is inf
    steep_up[i] = big_step && ratio <= xi_complement;
    steep_down[i] = big_step && ratio >= 1.0 / xi_complement;
    downward[i] = ratio > 1.0;
    upward[i] = ratio < 1.0;
  }

  std::vector<std::pair<std::size_t, std::size_t>> clusters;
  std::vector<SteepDownArea> sdas;
  std::size_t index = 0;
  double mib = 0.0;
  for (std::size_t steep_index = 0; steep_index < n; ++steep_index) {
    if (!(steep_up[steep_index] || steep_down[steep_index])) continue;
    if (steep_index < index) continue;
    for (std::size_t k = index; k <= steep_index; ++k) mib = std::max(mib, plot[k]);

    if (steep_down[steep_index]) {
      sdas = update_filter_sdas(sdas, mib, xi_complement, plot);
      const std::size_t d_end = extend_region(steep_down, upward, plot, steep_index, min_methods);
      sdas.push_back({steep_index, d_end, 0.0});
      index = d_end + 1;
      mib = plot[index];
      continue;
    }

    sdas = update_filter_sdas(sdas, mib, xi_complement, plot);
    const std::size_t u_start = steep_index;
    const std::size_t u_end = extend_region(steep_up, downward, plot, u_start, min_methods);
    index = u_end + 1;
    mib = plot[index];

    std::vector<std::pair<std::size_t, std::size_t>> found;
    for (const auto& d : sdas) {
      std::size_t c_start = d.start;
      std::size_t c_end = u_end;
      if (plot[c_end + 1] * xi_complement < d.mib) continue;
      const double d_max = plot[d.start];
      if (d_max * xi_complement >= plot[c_end + 1]) {
        while (plot[c_start + 1] > plot[c_end + 1] && c_start < d.end) ++c_start;
      } else if (plot[c_end + 1] * xi_complement >= d_max) {
        while (plot[c_end - 1] > d_max && c_end > u_start) --c_end;
      }
      if (!correct_predecessor(plot, predecessor_plot, optics.ordering, c_start, c_end)) continue;
      if (c_end - c_start + 1 < min_methods) continue;
      if (c_start > d.end) continue;
      if (c_end < u_start) continue;
      found.emplace_back(c_start, c_end);
    }
    // smaller clusters first
    clusters.insert(clusters.end(), found.rbegin(), found.rend());
  }

  std::vector<int> by_position(n, kNoise);
  int label = 0;
  for (const auto& [s, e] : clusters) {
    bool linked = false;
    for (std::size_t i = s + 1; i <= e; ++i) linked = linked || plot[i] < config.max_link_distance;
    if (!linked) continue;
    bool free = true;
    for (std::size_t i = s; i <= e; ++i) free = free && by_position[i] == kNoise;
    if (!free) continue;
    for (std::size_t i = s; i <= e; ++i) by_position[i] = label;
    ++label;
  }
  std::vector<int> labels(n, kNoise);
  for (std::size_t i = 0; i < n; ++i) labels[optics.ordering[i]] = by_position[i];
  return labels;
}

std::vector<int> extract_clusters(const OpticsResult& optics, double xi, std::size_t min_methods) {
  ClusterConfig plain;
  plain.xi = xi;
  plain.min_methods = min_methods;
  plain.min_step = 0.0;
  plain.max_link_distance = kInf;
  return extract_clusters(optics, plain);
}

Partition assign_noise(const std::vector<int>& raw_labels, const SimilarityMatrix& similarity) {
  const std::size_t n = raw_labels.size();
  if (static_cast<std::size_t>(similarity.size()) != n)
    throw DimensionMismatch("labels and similarity matrix disagree on the method count");

  std::map<int, int> renumber;  // raw label -> compact label, by first member id
  for (std::size_t i = 0; i < n; ++i)
    if (raw_labels[i] != kNoise && !renumber.contains(raw_labels[i]))
      renumber.emplace(raw_labels[i], static_cast<int>(renumber.size()));
  if (renumber.empty()) throw NoClusters();

  Partition p;
  p.k = static_cast<int>(renumber.size());
  p.labels.assign(n, kNoise);
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(p.k));
  for (std::size_t i = 0; i < n; ++i) {
    if (raw_labels[i] == kNoise) continue;
    p.labels[i] = renumber.at(raw_labels[i]);
    members[static_cast<std::size_t>(p.labels[i])].push_back(i);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (raw_labels[i] != kNoise) continue;
    int best = 0;
    double best_mean = -kInf;
    for (int c = 0; c < p.k; ++c) {
      double sum = 0.0;
      for (auto m : members[static_cast<std::size_t>(c)])
        sum += similarity(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m));
      const double mean = sum / static_cast<double>(members[static_cast<std::size_t>(c)].size());
      if (mean > best_mean) {
        best_mean = mean;
        best = c;
      }
    }
    p.labels[i] = best;
    p.noise_assigned.insert(i);
  }
  return p;
}

Partition refactor(const SimilarityMatrix& similarity, const ClusterConfig& config) {
  config.validate();
  const auto n = static_cast<std::size_t>(similarity.size());
  if (similarity.values.rows() != similarity.values.cols())
    throw DimensionMismatch("similarity matrix is not square");
  if (n == 0) throw DataError("cannot cluster an empty class");

  auto single = [&](std::string why) {
    Partition p;
    p.labels.assign(n, 0);
    p.k = 1;
    p.warnings.push_back(std::move(why));
    return p;
  };
  if (n < config.min_methods)
    return single("fewer methods than min_methods; no refactoring recommended");

  const auto optics = optics_order(to_distance(similarity), config.min_methods);
  const auto raw = extract_clusters(optics, config);
  try {
    return assign_noise(raw, similarity);
  } catch (const NoClusters&) {
    return single("no cluster structure found; no refactoring recommended");
  }
}

double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) throw DimensionMismatch("labelings differ in length");
  const std::size_t n = a.size();
  if (n < 2) return 1.0;
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> rows, cols;
  for (std::size_t i = 0; i < n; ++i) {
    joint[{a[i], b[i]}] += 1.0;
    rows[a[i]] += 1.0;
    cols[b[i]] += 1.0;
  }
  auto pairs = [](double x) { return x * (x - 1.0) / 2.0; };
  double index = 0.0, sum_rows = 0.0, sum_cols = 0.0;
  for (const auto& [key, count] : joint) index += pairs(count);
  for (const auto& [key, count] : rows) sum_rows += pairs(count);
  for (const auto& [key, count] : cols) sum_cols += pairs(count);
  const double expected = sum_rows * sum_cols / pairs(static_cast<double>(n));
  const double max_index = 0.5 * (sum_rows + sum_cols);
  if (max_index == expected) return index == max_index ? 1.0 : 0.0;
  return (index - expected) / (max_index - expected);
}

}  // namespace godsplit
