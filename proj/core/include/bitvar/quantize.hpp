#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bitvar/matrix.hpp"

namespace bitvar {

using Edge = std::pair<std::size_t, std::size_t>;

/// Undirected connected graph over d sensors. Edges are stored as (i, j)
/// with i < j in lexicographic order; that order fixes the layout of the
/// predominance bits.
class SensorGraph {
 public:
  /// Throws kInvalidArgument on self-loops, out-of-range vertices or a
  /// disconnected graph. Duplicate edges are merged.
  SensorGraph(std::size_t d, std::vector<Edge> edges);

  static SensorGraph complete(std::size_t d);
  /// Edges (center, k) for every k != center.
  static SensorGraph star(std::size_t d, std::size_t center = 0);

  std::size_t dim() const noexcept { return d_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::optional<std::size_t> edge_index(std::size_t i, std::size_t j) const;
  bool has_edge(std::size_t i, std::size_t j) const {
    return edge_index(i, j).has_value();
  }

  /// Vertices of a BFS shortest path from `from` to `to`, both included.
  /// Ties go to the smaller vertex index, so the path is deterministic.
  std::vector<std::size_t> shortest_path(std::size_t from, std::size_t to) const;

 private:
  std::size_t d_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adjacency_;
};

/// Bit streams from one trajectory. x(i, t) are thresholded or sign bits;
/// q(e, t) = [|Z_i(t)| >= |Z_j(t)|] for edge e = (i, j) of `edges`.
struct BinaryRecord {
  std::size_t d = 0;
  std::size_t T = 0;
  std::vector<std::uint8_t> x_bits;  // d * T, row-major
  std::vector<Edge> edges;           // sorted, i < j
  std::vector<std::uint8_t> q_bits;  // edges.size() * T, row-major
  std::optional<std::vector<double>> thresholds;

  std::uint8_t x(std::size_t i, std::size_t t) const { return x_bits[i * T + t]; }
  std::uint8_t q(std::size_t e, std::size_t t) const { return q_bits[e * T + t]; }
  std::span<const std::uint8_t> x_row(std::size_t i) const {
    return {x_bits.data() + i * T, T};
  }
  std::span<const std::uint8_t> q_row(std::size_t e) const {
    return {q_bits.data() + e * T, T};
  }
  std::optional<std::size_t> edge_index(std::size_t i, std::size_t j) const;

  friend bool operator==(const BinaryRecord&, const BinaryRecord&) = default;
};

/// Mean of x(i, .).
double bit_mean(const BinaryRecord& rec, std::size_t i);

/// (1 / (T - tau)) * #{t >= tau : x(i, t) == x(j, t - tau)}
double match_fraction(const BinaryRecord& rec, std::size_t i, std::size_t j,
                      std::size_t tau);

/// x(i, t) = [Z_i(t) >= c_i]. Throws kZeroThreshold if some c_i == 0.
BinaryRecord threshold_quantize(const Matrix& traj, std::span<const double> c);

/// Sign bits for every series plus predominance bits on the graph's edges.
BinaryRecord sign_and_predominance(const Matrix& traj, const SensorGraph& g);

}  // namespace bitvar
