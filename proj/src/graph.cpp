#include "galign/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace galign {

Graph Graph::from_edges(std::vector<std::string> labels, std::span<const Edge> edges,
                        std::size_t* self_loops_dropped, std::size_t* duplicates_dropped) {
  Graph g;
  g.labels_ = std::move(labels);
  const std::size_t n = g.labels_.size();
  g.by_label_.reserve(n);
  for (NodeId i = 0; i < n; ++i) {
    if (!g.by_label_.emplace(g.labels_[i], i).second) {
      throw Error("duplicate node label '" + g.labels_[i] + "'");
    }
  }

  std::vector<Edge> clean;
  clean.reserve(edges.size());
  std::size_t loops = 0;
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw Error("edge endpoint out of range");
    if (u == v) {
      ++loops;
      continue;
    }
    clean.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(clean.begin(), clean.end());
  const auto before = clean.size();
  clean.erase(std::unique(clean.begin(), clean.end()), clean.end());
  if (self_loops_dropped) *self_loops_dropped = loops;
  if (duplicates_dropped) *duplicates_dropped = before - clean.size();

  std::vector<std::size_t> deg(n, 0);
  for (auto [u, v] : clean) {
    ++deg[u];
    ++deg[v];
  }
  g.offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] = g.offsets_[i] + deg[i];
  g.targets_.resize(g.offsets_[n]);
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (auto [u, v] : clean) {
    g.targets_[fill[u]++] = v;
    g.targets_[fill[v]++] = u;
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(g.targets_.begin() + g.offsets_[i], g.targets_.begin() + g.offsets_[i + 1]);
  }
  g.edge_count_ = clean.size();
  return g;
}

std::size_t Graph::max_degree() const {
  std::size_t best = 0;
  for (NodeId u = 0; u < node_count(); ++u) best = std::max(best, degree(u));
  return best;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  if (degree(u) > degree(v)) std::swap(u, v);
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::optional<NodeId> Graph::find(std::string_view label) const {
  auto it = by_label_.find(std::string(label));
  if (it == by_label_.end()) return std::nullopt;
  return it->second;
}

NodeId Graph::require(std::string_view label) const {
  auto id = find(label);
  if (!id) throw Error("node '" + std::string(label) + "' is not in the graph");
  return *id;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (NodeId u = 0; u < node_count(); ++u) {
    for (NodeId v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

Graph parse_edge_list(std::istream& in, LoadStats* stats) {
  std::vector<std::string> labels;
  std::unordered_map<std::string, NodeId> ids;
  std::vector<Edge> edges;
  auto intern = [&](const std::string& s) {
    auto [it, inserted] = ids.emplace(s, static_cast<NodeId>(labels.size()));
    if (inserted) labels.push_back(s);
    return it->second;
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(std::move(t));
    if (tok.empty() || tok[0][0] == '#') continue;
    if (tok.size() != 2) {
      throw Error("edge list line " + std::to_string(lineno) + ": expected 2 tokens, got " +
                  std::to_string(tok.size()));
    }
    const NodeId u = intern(tok[0]);
    const NodeId v = intern(tok[1]);
    edges.emplace_back(u, v);
  }

  LoadStats local;
  local.lines = lineno;
  Graph g = Graph::from_edges(std::move(labels), edges, &local.self_loops_dropped,
                              &local.duplicates_dropped);
  if (stats) *stats = local;
  return g;
}

Graph load_edge_list(const std::filesystem::path& path, LoadStats* stats) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open edge list '" + path.string() + "'");
  return parse_edge_list(in, stats);
}

void write_edge_list(const Graph& g, std::ostream& out) {
  for (auto [u, v] : g.edges()) out << g.label(u) << ' ' << g.label(v) << '\n';
}

void save_edge_list(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  write_edge_list(g, out);
}

std::pair<Graph, std::vector<Edge>> perturb_edges(const Graph& g, double fraction,
                                                  std::uint64_t rng_seed) {
  if (!(fraction >= 0.0 && fraction < 1.0)) {
    throw Error("perturbation fraction must be in [0, 1)");
  }
  auto edges = g.edges();
  const auto remove = static_cast<std::size_t>(std::floor(fraction * edges.size()));
  std::mt19937_64 rng(rng_seed);
  // partial Fisher-Yates: the first `remove` slots become the removed set
  for (std::size_t i = 0; i < remove; ++i) {
    const auto j = i + uniform_below(rng, edges.size() - i);
    std::swap(edges[i], edges[j]);
  }
  std::vector<Edge> removed(edges.begin(), edges.begin() + remove);
  std::vector<Edge> kept(edges.begin() + remove, edges.end());
  std::sort(removed.begin(), removed.end());
  return {Graph::from_edges(g.labels(), kept), std::move(removed)};
}

std::map<std::size_t, std::size_t> degree_stats(const Graph& g) {
  std::map<std::size_t, std::size_t> hist;
  for (NodeId u = 0; u < g.node_count(); ++u) ++hist[g.degree(u)];
  return hist;
}

void write_degree_csv(const std::map<std::size_t, std::size_t>& hist, std::ostream& out) {
  out << "degree,count\n";
  for (auto [d, c] : hist) out << d << ',' << c << '\n';
}

Graph preferential_attachment(std::size_t n, std::size_t edges_per_node, std::uint64_t rng_seed) {
  if (edges_per_node == 0) throw Error("edges_per_node must be positive");
  const std::size_t seed_size = std::min(n, edges_per_node + 1);
  std::vector<Edge> edges;
  // every endpoint occurrence, so sampling an element is degree-proportional
  std::vector<NodeId> endpoints;
  for (NodeId u = 0; u < seed_size; ++u) {
    for (NodeId v = u + 1; v < seed_size; ++v) {
      edges.emplace_back(u, v);
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  }
  std::mt19937_64 rng(rng_seed);
  std::vector<NodeId> picked;
  for (auto u = static_cast<NodeId>(seed_size); u < n; ++u) {
    picked.clear();
    while (picked.size() < edges_per_node) {
      const NodeId v = endpoints[uniform_below(rng, endpoints.size())];
      if (std::find(picked.begin(), picked.end(), v) == picked.end()) picked.push_back(v);
    }
    for (NodeId v : picked) {
      edges.emplace_back(v, u);
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  }
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = "n" + std::to_string(i);
  return Graph::from_edges(std::move(labels), edges);
}

}  // namespace galign
