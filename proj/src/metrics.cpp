#include "galign/metrics.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace galign {

double S3Counts::value() const {
  const auto den = denominator();
  return den == 0 ? 1.0 : static_cast<double>(conserved) / static_cast<double>(den);
}

bool is_one_to_one(std::span<const NodePair> pairs) {
  std::unordered_set<NodeId> firsts, seconds;
  for (auto [u, v] : pairs) {
    if (!firsts.insert(u).second || !seconds.insert(v).second) return false;
  }
  return true;
}

S3Counts s3_counts(std::span<const NodePair> pairs, const Graph& g1, const Graph& g2) {
  std::unordered_map<NodeId, NodeId> forward;
  std::unordered_set<NodeId> image;
  for (auto [u, v] : pairs) {
    if (u >= g1.node_count() || v >= g2.node_count()) throw Error("s3: node absent from graph");
    forward.emplace(u, v);
    image.insert(v);
  }
  S3Counts c;
  for (auto [u, v] : forward) {
    for (NodeId w : g1.neighbors(u)) {
      if (w <= u) continue;
      auto it = forward.find(w);
      if (it == forward.end()) continue;
      ++c.edges1;
      if (g2.has_edge(v, it->second)) ++c.conserved;
    }
    for (NodeId x : g2.neighbors(v)) {
      if (x > v && image.count(x)) ++c.edges2;
    }
  }
  return c;
}

double s3(std::span<const NodePair> pairs, const Graph& g1, const Graph& g2) {
  return s3_counts(pairs, g1, g2).value();
}

GroundTruth GroundTruth::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open ground truth '" + path.string() + "'");
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string a, b, extra;
    if (!(ss >> a) || a[0] == '#') continue;
    if (!(ss >> b) || (ss >> extra)) throw Error("ground truth lines need exactly two labels");
    pairs.emplace_back(std::move(a), std::move(b));
  }
  return from_pairs(std::move(pairs));
}

GroundTruth GroundTruth::from_pairs(std::vector<std::pair<std::string, std::string>> pairs) {
  GroundTruth t;
  t.explicit_ = true;
  std::unordered_set<std::string> targets;
  for (auto& [a, b] : pairs) {
    if (!targets.insert(b).second || !t.map_.emplace(a, b).second) {
      throw Error("ground truth is not injective at '" + a + "' -> '" + b + "'");
    }
  }
  return t;
}

std::optional<std::string> GroundTruth::counterpart(const std::string& label) const {
  if (!explicit_) return label;
  auto it = map_.find(label);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

NodeCorrectness node_correctness(std::span<const NodePair> pairs, const Graph& g1, const Graph& g2,
                                 const GroundTruth& truth) {
  if (pairs.empty()) throw Error("node correctness of an empty alignment");
  NodeCorrectness nc;
  for (auto [u, v] : pairs) {
    const auto want = truth.counterpart(g1.label(u));
    if (!want) {
      ++nc.unknown;
      continue;
    }
    if (*want == g2.label(v)) ++nc.correct;
  }
  nc.value = static_cast<double>(nc.correct) / static_cast<double>(pairs.size());
  return nc;
}

double alignment_score(std::size_t size, double nc, double s3_value) {
  return static_cast<double>(size) * nc * nc * s3_value * s3_value;
}

std::vector<NodePair> largest_connected_alignment(std::span<const NodePair> pairs, const Graph& g1) {
  if (pairs.empty()) return {};
  std::vector<NodePair> sorted(pairs.begin(), pairs.end());
  std::sort(sorted.begin(), sorted.end());
  std::unordered_map<NodeId, std::size_t> index;
  for (std::size_t i = 0; i < sorted.size(); ++i) index.emplace(sorted[i].first, i);

  std::vector<std::size_t> parent(sorted.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (NodeId w : g1.neighbors(sorted[i].first)) {
      auto it = index.find(w);
      if (it != index.end()) parent[find(i)] = find(it->second);
    }
  }
  std::vector<std::size_t> size(sorted.size(), 0);
  for (std::size_t i = 0; i < sorted.size(); ++i) ++size[find(i)];
  // sorted by node id, so the first root reaching the maximum holds the smallest id
  std::size_t best = find(0);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (size[find(i)] > size[best]) best = find(i);
  }
  std::vector<NodePair> out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (find(i) == best) out.push_back(sorted[i]);
  }
  return out;
}

void write_alignment(const Graph& g1, const Graph& g2, std::span<const NodePair> pairs,
                     const Metadata& meta, std::ostream& out) {
  for (const auto& [k, v] : meta) out << "# " << k << '=' << v << '\n';
  for (auto [u, v] : pairs) out << g1.label(u) << '\t' << g2.label(v) << '\n';
}

void save_alignment(const Graph& g1, const Graph& g2, std::span<const NodePair> pairs,
                    const Metadata& meta, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write alignment '" + path.string() + "'");
  write_alignment(g1, g2, pairs, meta, out);
}

std::vector<NodePair> read_alignment(const Graph& g1, const Graph& g2, std::istream& in) {
  std::vector<NodePair> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string a, b, extra;
    if (!(ss >> a) || a[0] == '#') continue;
    if (!(ss >> b) || (ss >> extra)) {
      throw Error("alignment line " + std::to_string(lineno) + ": expected two labels");
    }
    pairs.emplace_back(g1.require(a), g2.require(b));
  }
  if (!is_one_to_one(pairs)) throw Error("alignment is not 1-to-1");
  return pairs;
}

std::vector<NodePair> load_alignment(const Graph& g1, const Graph& g2,
                                     const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open alignment '" + path.string() + "'");
  return read_alignment(g1, g2, in);
}

}  // namespace galign
