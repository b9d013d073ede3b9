#ifndef GALIGN_GRAPH_HPP
#define GALIGN_GRAPH_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace galign {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;
using NodePair = std::pair<NodeId, NodeId>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * Undirected simple graph with dense node ids 0..n-1.
 *
 * Adjacency is stored in CSR form with sorted neighbor lists, so edge
 * membership is a binary search. Every node carries the string label it was
 * loaded with; label lookup goes through a hash map.
 */
class Graph {
 public:
  Graph() = default;

  /// Builds a graph over `labels`. Self-loops and duplicate edges (in either
  /// orientation) are dropped; the optional counters report how many.
  static Graph from_edges(std::vector<std::string> labels, std::span<const Edge> edges,
                          std::size_t* self_loops_dropped = nullptr,
                          std::size_t* duplicates_dropped = nullptr);

  std::size_t node_count() const { return labels_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  std::span<const NodeId> neighbors(NodeId u) const {
    return {targets_.data() + offsets_[u], targets_.data() + offsets_[u + 1]};
  }
  std::size_t degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }
  std::size_t max_degree() const;

  bool has_edge(NodeId u, NodeId v) const;

  const std::string& label(NodeId u) const { return labels_[u]; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<NodeId> find(std::string_view label) const;
  /// Like find() but throws Error when the label is unknown.
  NodeId require(std::string_view label) const;

  /// All edges as (u, v) with u < v, sorted.
  std::vector<Edge> edges() const;

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> by_label_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> targets_;
  std::size_t edge_count_ = 0;
};

struct LoadStats {
  std::size_t lines = 0;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_dropped = 0;
};

/// Parses "u v" lines. Blank lines and lines starting with '#' are skipped.
/// Labels are interned to ids in order of first appearance.
Graph parse_edge_list(std::istream& in, LoadStats* stats = nullptr);
Graph load_edge_list(const std::filesystem::path& path, LoadStats* stats = nullptr);

void write_edge_list(const Graph& g, std::ostream& out);
void save_edge_list(const Graph& g, const std::filesystem::path& path);

/// Removes floor(fraction * m) edges chosen uniformly with a seeded generator.
/// All nodes (and their ids) are kept. Removed edges are returned sorted.
std::pair<Graph, std::vector<Edge>> perturb_edges(const Graph& g, double fraction,
                                                  std::uint64_t rng_seed);

/// degree -> number of nodes with that degree.
std::map<std::size_t, std::size_t> degree_stats(const Graph& g);
void write_degree_csv(const std::map<std::size_t, std::size_t>& hist, std::ostream& out);

/// Barabasi-Albert style generator: starts from a clique on
/// `edges_per_node + 1` nodes, then each new node attaches to
/// `edges_per_node` distinct existing nodes chosen proportionally to degree.
/// Labels are "n0", "n1", ...
Graph preferential_attachment(std::size_t n, std::size_t edges_per_node, std::uint64_t rng_seed);

/// Uniform integer in [0, bound) drawn from a 64-bit engine by rejection, so
/// sequences are identical across standard library implementations.
template <class Engine>
std::uint64_t uniform_below(Engine& eng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = eng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace galign

#endif  // GALIGN_GRAPH_HPP
