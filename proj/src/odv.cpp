#include "galign/odv.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <map>
#include <tuple>
#include <sstream>

#include "galign/graphlet.hpp"

namespace galign {

namespace {

constexpr int kMaxOdvSize = 5;

void check_max_size(int max_size) {
  if (max_size != 4 && max_size != 5) throw Error("ODV graphlet size must be 4 or 5");
}

/// Orbit numbering plus a direct lookup from raw encodings of up to 5 nodes.
class OrbitTable {
 public:
  static const OrbitTable& instance() {
    static const OrbitTable table;
    return table;
  }

  int orbit(CanonicalGraphletId id, int pos) const {
    auto it = canonical_.find({id.k, id.bits});
    if (it == canonical_.end()) throw Error("no ODV orbit for graphlet " + id.to_string());
    return it->second.at(pos);
  }

  /// Global orbit of each position of a connected raw k-node encoding.
  const std::array<std::int8_t, kMaxOdvSize>& raw(int k, AdjacencyBits bits) const {
    return raw_[k][bits];
  }

  int count(int max_size) const { return first_orbit_[max_size + 1]; }

 private:
  OrbitTable() {
    int next = 0;
    first_orbit_[2] = 0;
    canonical_[{2, 1}] = {next, next};
    ++next;
    for (int k = 3; k <= kMaxOdvSize; ++k) {
      first_orbit_[k] = next;
      struct Shape {
        int edges, max_degree;
        CanonicalGraphletId id;
        std::array<int, kMaxOdvSize> degree{};
      };
      std::vector<Shape> shapes;
      for (auto id : enumerate_connected_graphlets(k)) {
        Shape s{std::popcount(id.bits), 0, id, {}};
        for (int j = 1; j < k; ++j) {
          for (int i = 0; i < j; ++i) {
            if (adjacent(k, id.bits, i, j)) {
              ++s.degree[i];
              ++s.degree[j];
            }
          }
        }
        s.max_degree = *std::max_element(s.degree.begin(), s.degree.begin() + k);
        shapes.push_back(s);
      }
      std::sort(shapes.begin(), shapes.end(), [](const Shape& a, const Shape& b) {
        return std::tie(a.edges, a.max_degree, a.id) < std::tie(b.edges, b.max_degree, b.id);
      });
      for (const auto& s : shapes) {
        const auto& part = orbits(s.id);
        // (degree, first position) per local orbit
        std::vector<std::pair<int, int>> order(part.orbit_count, {0, kMaxOdvSize});
        for (int p = k - 1; p >= 0; --p) order[part.orbit_of[p]] = {s.degree[p], p};
        std::vector<int> local(part.orbit_count);
        std::vector<int> rank(part.orbit_count);
        for (int o = 0; o < part.orbit_count; ++o) local[o] = o;
        std::sort(local.begin(), local.end(), [&](int a, int b) { return order[a] < order[b]; });
        for (int r = 0; r < part.orbit_count; ++r) rank[local[r]] = r;
        std::vector<int> global(k);
        for (int p = 0; p < k; ++p) global[p] = next + rank[part.orbit_of[p]];
        canonical_[{k, s.id.bits}] = std::move(global);
        next += part.orbit_count;
      }
    }
    first_orbit_[kMaxOdvSize + 1] = next;

    for (int k = 2; k <= kMaxOdvSize; ++k) {
      raw_[k].assign(std::size_t{1} << pair_count(k), {});
      for (AdjacencyBits bits = 0; bits < (AdjacencyBits{1} << pair_count(k)); ++bits) {
        if (k == 2) {
          raw_[k][bits] = {0, 0};
          continue;
        }
        if (!is_connected(k, bits)) continue;
        const auto c = canonize(k, bits);
        const auto& global = canonical_.at({k, c.id.bits});
        for (int p = 0; p < k; ++p) raw_[k][bits][p] = static_cast<std::int8_t>(global[c.permutation[p]]);
      }
    }
  }

  std::map<std::pair<int, AdjacencyBits>, std::vector<int>> canonical_;
  std::array<std::vector<std::array<std::int8_t, kMaxOdvSize>>, kMaxOdvSize + 1> raw_;
  std::array<int, kMaxOdvSize + 2> first_orbit_{};
};

/// ESU enumeration: each connected node set is visited exactly once, from
/// its smallest node.
class SubgraphCounter {
 public:
  SubgraphCounter(const Graph& g, int max_size, std::vector<OrbitDegreeVector>& out)
      : g_(g), max_size_(max_size), out_(out), table_(OrbitTable::instance()) {}

  void run() {
    for (NodeId v = 0; v < g_.node_count(); ++v) {
      root_ = v;
      sub_.assign(1, v);
      std::vector<NodeId> ext;
      for (NodeId u : g_.neighbors(v)) {
        if (u > v) ext.push_back(u);
      }
      extend(ext);
    }
  }

 private:
  void record() {
    const int k = static_cast<int>(sub_.size());
    AdjacencyBits bits = 1;
    if (k > 2) {
      bits = 0;
      for (int j = 1; j < k; ++j) {
        for (int i = 0; i < j; ++i) {
          if (g_.has_edge(sub_[i], sub_[j])) bits |= AdjacencyBits{1} << pair_bit(k, i, j);
        }
      }
    }
    const auto& orbit = table_.raw(k, bits);
    for (int p = 0; p < k; ++p) ++out_[sub_[p]][orbit[p]];
  }

  bool touches_sub(NodeId u) const {
    for (NodeId s : sub_) {
      if (s == u || g_.has_edge(s, u)) return true;
    }
    return false;
  }

  void extend(std::vector<NodeId> ext) {
    if (sub_.size() >= 2) record();
    if (static_cast<int>(sub_.size()) == max_size_) return;
    while (!ext.empty()) {
      const NodeId w = ext.back();
      ext.pop_back();
      std::vector<NodeId> next = ext;
      for (NodeId u : g_.neighbors(w)) {
        if (u > root_ && !touches_sub(u)) next.push_back(u);
      }
      sub_.push_back(w);
      extend(std::move(next));
      sub_.pop_back();
    }
  }

  const Graph& g_;
  int max_size_;
  std::vector<OrbitDegreeVector>& out_;
  const OrbitTable& table_;
  NodeId root_ = 0;
  std::vector<NodeId> sub_;
};

}  // namespace

int odv_orbit_count(int max_size) {
  check_max_size(max_size);
  return OrbitTable::instance().count(max_size);
}

int odv_orbit(CanonicalGraphletId id, int pos) { return OrbitTable::instance().orbit(id, pos); }

std::vector<OrbitDegreeVector> compute_odv(const Graph& g, int max_size) {
  const int orbits = odv_orbit_count(max_size);
  std::vector<OrbitDegreeVector> out(g.node_count(), OrbitDegreeVector(orbits, 0));
  SubgraphCounter(g, max_size, out).run();
  return out;
}

double odv_similarity(std::span<const std::uint64_t> u, std::span<const std::uint64_t> v,
                      std::span<const double> weights) {
  if (u.size() != v.size() || u.size() != weights.size()) {
    throw Error("odv_similarity: vector lengths differ");
  }
  double distance = 0.0;
  double total = 0.0;
  for (std::size_t o = 0; o < u.size(); ++o) {
    const double a = static_cast<double>(u[o]);
    const double b = static_cast<double>(v[o]);
    distance += weights[o] * std::abs(std::log(a + 1.0) - std::log(b + 1.0)) /
                std::log(std::max(a, b) + 2.0);
    total += weights[o];
  }
  if (total <= 0.0) throw Error("odv_similarity: weights must be positive");
  return std::clamp(1.0 - distance / total, 0.0, 1.0);
}

std::vector<double> uniform_odv_weights(int orbit_count) {
  return std::vector<double>(static_cast<std::size_t>(orbit_count), 1.0);
}

std::vector<double> load_odv_weights(const std::filesystem::path& path, int orbit_count) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open ODV weights '" + path.string() + "'");
  std::vector<double> w;
  for (double x; in >> x;) {
    if (!(x > 0.0 && x <= 1.0)) throw Error("ODV weights must lie in (0, 1]");
    w.push_back(x);
  }
  if (static_cast<int>(w.size()) != orbit_count) {
    throw Error("ODV weight file has " + std::to_string(w.size()) + " values, expected " +
                std::to_string(orbit_count));
  }
  return w;
}

double alignment_mean_odv(const SeedAlignment& seed, const OdvTables& odv) {
  if (seed.pairs.empty()) throw Error("alignment_mean_odv: empty seed");
  double sum = 0.0;
  for (auto [u, v] : seed.pairs) {
    if (u >= odv.first.size() || v >= odv.second.size()) {
      throw Error("alignment_mean_odv: node without an ODV");
    }
    sum += odv_similarity(odv.first[u], odv.second[v], odv.weights);
  }
  return sum / static_cast<double>(seed.pairs.size());
}

void write_odv(const Graph& g, std::span<const OrbitDegreeVector> odv, std::ostream& out) {
  for (NodeId u = 0; u < odv.size(); ++u) {
    out << g.label(u);
    for (auto c : odv[u]) out << ' ' << c;
    out << '\n';
  }
}

void save_odv(const Graph& g, std::span<const OrbitDegreeVector> odv,
              const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write ODV file '" + path.string() + "'");
  write_odv(g, odv, out);
}

std::vector<OrbitDegreeVector> read_odv(const Graph& g, std::istream& in) {
  std::vector<OrbitDegreeVector> odv(g.node_count());
  std::size_t width = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string label;
    if (!(ss >> label) || label[0] == '#') continue;
    OrbitDegreeVector counts;
    for (std::uint64_t c; ss >> c;) counts.push_back(c);
    if (!ss.eof()) throw Error("ODV line " + std::to_string(lineno) + ": bad count");
    if (width == 0) width = counts.size();
    if (counts.size() != width || width == 0) {
      throw Error("ODV line " + std::to_string(lineno) + ": inconsistent vector length");
    }
    odv[g.require(label)] = std::move(counts);
  }
  for (auto& v : odv) {
    if (v.empty()) v.assign(width, 0);
  }
  return odv;
}

std::vector<OrbitDegreeVector> load_odv(const Graph& g, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open ODV file '" + path.string() + "'");
  return read_odv(g, in);
}

}  // namespace galign
