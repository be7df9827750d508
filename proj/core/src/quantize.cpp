#include "bitvar/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "bitvar/error.hpp"

namespace bitvar {

SensorGraph::SensorGraph(std::size_t d, std::vector<Edge> edges)
    : d_(d), adjacency_(d) {
  for (Edge& e : edges) {
    if (e.first == e.second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "SensorGraph: self-loop at " + std::to_string(e.first));
    }
    if (e.first >= d || e.second >= d) {
      throw Error(ErrorCode::kInvalidArgument, "SensorGraph: vertex out of range");
    }
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);
  for (const auto& [i, j] : edges_) {
    adjacency_[i].push_back(j);
    adjacency_[j].push_back(i);
  }
  for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());

  if (d_ > 0) {
    std::vector<bool> seen(d_, false);
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      for (std::size_t w : adjacency_[v]) {
        if (!seen[w]) {
          seen[w] = true;
          ++reached;
          queue.push_back(w);
        }
      }
    }
    if (reached != d_) {
      throw Error(ErrorCode::kInvalidArgument, "SensorGraph: graph is not connected");
    }
  }
}

SensorGraph SensorGraph::complete(std::size_t d) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) edges.emplace_back(i, j);
  }
  return SensorGraph(d, std::move(edges));
}

SensorGraph SensorGraph::star(std::size_t d, std::size_t center) {
  std::vector<Edge> edges;
  for (std::size_t k = 0; k < d; ++k) {
    if (k != center) edges.emplace_back(center, k);
  }
  return SensorGraph(d, std::move(edges));
}

std::optional<std::size_t> SensorGraph::edge_index(std::size_t i,
                                                   std::size_t j) const {
  const Edge key = i < j ? Edge{i, j} : Edge{j, i};
  const auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) return std::nullopt;
  return static_cast<std::size_t>(it - edges_.begin());
}

std::vector<std::size_t> SensorGraph::shortest_path(std::size_t from,
                                                    std::size_t to) const {
  if (from >= d_ || to >= d_) {
    throw Error(ErrorCode::kInvalidArgument, "shortest_path: vertex out of range");
  }
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> parent(d_, kNone);
  parent[from] = from;
  std::deque<std::size_t> queue{from};
  while (!queue.empty() && parent[to] == kNone) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t w : adjacency_[v]) {
      if (parent[w] == kNone) {
        parent[w] = v;
        queue.push_back(w);
      }
    }
  }
  std::vector<std::size_t> path{to};
  while (path.back() != from) path.push_back(parent[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

std::optional<std::size_t> BinaryRecord::edge_index(std::size_t i,
                                                    std::size_t j) const {
  const Edge key = i < j ? Edge{i, j} : Edge{j, i};
  const auto it = std::lower_bound(edges.begin(), edges.end(), key);
  if (it == edges.end() || *it != key) return std::nullopt;
  return static_cast<std::size_t>(it - edges.begin());
}

double bit_mean(const BinaryRecord& rec, std::size_t i) {
  std::size_t ones = 0;
  for (std::uint8_t b : rec.x_row(i)) ones += b;
  return static_cast<double>(ones) / static_cast<double>(rec.T);
}

double match_fraction(const BinaryRecord& rec, std::size_t i, std::size_t j,
                      std::size_t tau) {
  if (tau >= rec.T) {
    throw Error(ErrorCode::kInvalidArgument, "match_fraction: tau >= T");
  }
  const std::uint8_t* xi = rec.x_bits.data() + i * rec.T;
  const std::uint8_t* xj = rec.x_bits.data() + j * rec.T;
  std::size_t same = 0;
  for (std::size_t t = tau; t < rec.T; ++t) same += xi[t] == xj[t - tau];
  return static_cast<double>(same) / static_cast<double>(rec.T - tau);
}

BinaryRecord threshold_quantize(const Matrix& traj, std::span<const double> c) {
  if (c.size() != traj.rows()) {
    throw Error(ErrorCode::kInvalidArgument,
                "threshold_quantize: one threshold per series required");
  }
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0.0 || !std::isfinite(c[i])) {
      throw Error(ErrorCode::kZeroThreshold,
                  "threshold for series " + std::to_string(i) + " must be nonzero");
    }
  }
  BinaryRecord rec;
  rec.d = traj.rows();
  rec.T = traj.cols();
  rec.x_bits.resize(rec.d * rec.T);
  for (std::size_t i = 0; i < rec.d; ++i) {
    const auto z = traj.row(i);
    for (std::size_t t = 0; t < rec.T; ++t) {
      rec.x_bits[i * rec.T + t] = z[t] >= c[i] ? 1 : 0;
    }
  }
  rec.thresholds.emplace(c.begin(), c.end());
  return rec;
}

BinaryRecord sign_and_predominance(const Matrix& traj, const SensorGraph& g) {
  if (g.dim() != traj.rows()) {
    throw Error(ErrorCode::kInvalidArgument,
                "sign_and_predominance: graph and trajectory dimensions differ");
  }
  BinaryRecord rec;
  rec.d = traj.rows();
  rec.T = traj.cols();
  rec.x_bits.resize(rec.d * rec.T);
  for (std::size_t i = 0; i < rec.d; ++i) {
    const auto z = traj.row(i);
    for (std::size_t t = 0; t < rec.T; ++t) {
      rec.x_bits[i * rec.T + t] = z[t] >= 0.0 ? 1 : 0;
    }
  }
  rec.edges = g.edges();
  rec.q_bits.resize(rec.edges.size() * rec.T);
  for (std::size_t e = 0; e < rec.edges.size(); ++e) {
    const auto zi = traj.row(rec.edges[e].first);
    const auto zj = traj.row(rec.edges[e].second);
    for (std::size_t t = 0; t < rec.T; ++t) {
      rec.q_bits[e * rec.T + t] = std::abs(zi[t]) >= std::abs(zj[t]) ? 1 : 0;
    }
  }
  return rec;
}

}  // namespace bitvar
