#include "galign/graphlet.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <mutex>
#include <numeric>
#include <shared_mutex>
#include <unordered_map>
#include <unordered_set>

namespace galign {

namespace {

void check_size(int k) {
  if (k < kMinGraphletSize || k > kMaxGraphletSize) {
    throw Error("graphlet size " + std::to_string(k) + " outside 3..8");
  }
}

using NeighborMasks = std::array<std::uint8_t, kMaxGraphletSize>;

NeighborMasks neighbor_masks(int k, AdjacencyBits bits) {
  NeighborMasks adj{};
  for (int j = 1; j < k; ++j) {
    for (int i = 0; i < j; ++i) {
      if (adjacent(k, bits, i, j)) {
        adj[i] |= static_cast<std::uint8_t>(1U << j);
        adj[j] |= static_cast<std::uint8_t>(1U << i);
      }
    }
  }
  return adj;
}

/// Branch and bound over relabelings, filling canonical positions in order.
/// Column j of the encoding is fixed once positions 0..j are assigned, so any
/// branch whose columns exceed the best found so far is cut.
class CanonicalSearch {
 public:
  CanonicalSearch(int k, AdjacencyBits bits) : k_(k), adj_(neighbor_masks(k, bits)) {}

  Canonization run() {
    descend(0, 0);
    Canonization c;
    c.id.k = k_;
    AdjacencyBits out = 0;
    for (int j = 1; j < k_; ++j) out = (out << j) | best_cols_[j];
    c.id.bits = out;
    for (int pos = 0; pos < k_; ++pos) c.permutation[best_order_[pos]] = static_cast<std::uint8_t>(pos);
    return c;
  }

 private:
  // <0, 0, >0 comparing cur_cols_[1..pos] against best_cols_[1..pos]
  int compare_prefix(int pos) const {
    for (int j = 1; j <= pos; ++j) {
      if (cur_cols_[j] != best_cols_[j]) return cur_cols_[j] < best_cols_[j] ? -1 : 1;
    }
    return 0;
  }

  void descend(int pos, unsigned used) {
    if (pos == k_) {
      if (!have_best_ || compare_prefix(k_ - 1) < 0) {
        best_cols_ = cur_cols_;
        best_order_ = order_;
        have_best_ = true;
      }
      return;
    }
    for (int v = 0; v < k_; ++v) {
      if (used & (1U << v)) continue;
      unsigned col = 0;
      for (int i = 0; i < pos; ++i) col = (col << 1) | ((adj_[order_[i]] >> v) & 1U);
      cur_cols_[pos] = col;
      order_[pos] = static_cast<std::uint8_t>(v);
      if (have_best_ && compare_prefix(pos) > 0) continue;
      descend(pos + 1, used | (1U << v));
    }
  }

  int k_;
  NeighborMasks adj_;
  std::array<unsigned, kMaxGraphletSize> cur_cols_{};
  std::array<unsigned, kMaxGraphletSize> best_cols_{};
  std::array<std::uint8_t, kMaxGraphletSize> order_{};
  std::array<std::uint8_t, kMaxGraphletSize> best_order_{};
  bool have_best_ = false;
};

struct GraphletInfo {
  OrbitPartition orbits;
  std::uint64_t automorphisms = 0;
  std::uint64_t multiplicity = 0;
};

/// Enumerates automorphisms of a canonical graphlet by backtracking with
/// degree and adjacency consistency checks.
GraphletInfo analyze(CanonicalGraphletId id) {
  const int k = id.k;
  const auto adj = neighbor_masks(k, id.bits);
  std::array<int, kMaxGraphletSize> parent{};
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  GraphletInfo info;
  std::array<int, kMaxGraphletSize> image{};
  auto rec = [&](auto& self, int pos, unsigned used) -> void {
    if (pos == k) {
      ++info.automorphisms;
      for (int p = 0; p < k; ++p) parent[find(p)] = find(image[p]);
      return;
    }
    for (int w = 0; w < k; ++w) {
      if (used & (1U << w)) continue;
      if (std::popcount(adj[pos]) != std::popcount(adj[w])) continue;
      bool ok = true;
      for (int i = 0; i < pos && ok; ++i) {
        ok = (((adj[i] >> pos) & 1U) == ((adj[image[i]] >> w) & 1U));
      }
      if (!ok) continue;
      image[pos] = w;
      self(self, pos + 1, used | (1U << w));
    }
  };
  rec(rec, 0, 0);

  info.orbits.orbit_of.assign(k, -1);
  std::array<int, kMaxGraphletSize> dense{};
  dense.fill(-1);
  for (int p = 0; p < k; ++p) {
    const int r = find(p);
    if (dense[r] < 0) dense[r] = info.orbits.orbit_count++;
    info.orbits.orbit_of[p] = dense[r];
  }
  info.multiplicity = 1;
  for (int size : info.orbits.orbit_sizes()) {
    for (int f = 2; f <= size; ++f) info.multiplicity *= static_cast<std::uint64_t>(f);
  }
  return info;
}

/// pre[p] is the rank of position p by (degree, sum of neighbor degrees),
/// ties by position.
Permutation invariant_order(int k, AdjacencyBits bits) {
  const auto adj = neighbor_masks(k, bits);
  std::array<unsigned, kMaxGraphletSize> score{};
  for (int v = 0; v < k; ++v) {
    unsigned around = 0;
    for (int w = 0; w < k; ++w) {
      if (adj[v] >> w & 1U) around += static_cast<unsigned>(std::popcount(adj[w]));
    }
    score[v] = static_cast<unsigned>(std::popcount(adj[v])) << 8 | around;
  }
  std::array<std::uint8_t, kMaxGraphletSize> order{};
  std::iota(order.begin(), order.begin() + k, 0);
  std::stable_sort(order.begin(), order.begin() + k,
                   [&](int a, int b) { return score[a] < score[b]; });
  Permutation pre{};
  for (int r = 0; r < k; ++r) pre[order[r]] = static_cast<std::uint8_t>(r);
  return pre;
}

std::uint32_t memo_key(int k, AdjacencyBits bits) {
  return (static_cast<std::uint32_t>(k) << 28) | bits;
}

/// Process-wide memo tables. Readers take a shared lock; misses compute
/// outside the lock and insert under an exclusive one.
class Catalog {
 public:
  static Catalog& instance() {
    static Catalog catalog;
    return catalog;
  }

  // Inputs are first relabeled by a cheap vertex invariant, which folds most
  // of the k! labelings of a class onto a few memo keys. The composed
  // permutation can differ from canonize_uncached() by an automorphism.
  Canonization canonize(int k, AdjacencyBits bits) {
    const auto pre = invariant_order(k, bits);
    const auto normalized = permute_bits(k, bits, pre);
    const auto key = memo_key(k, normalized);
    Canonization c;
    bool found = false;
    {
      std::shared_lock lock(mutex_);
      if (auto it = canon_.find(key); it != canon_.end()) {
        c = it->second;
        found = true;
      }
    }
    if (!found) {
      c = canonize_uncached(k, normalized);
      std::unique_lock lock(mutex_);
      canon_.emplace(key, c);
    }
    Canonization out{c.id, {}};
    for (int p = 0; p < k; ++p) out.permutation[p] = c.permutation[pre[p]];
    return out;
  }

  const GraphletInfo& info(CanonicalGraphletId id) {
    check_size(id.k);
    const auto key = memo_key(id.k, id.bits);
    {
      std::shared_lock lock(mutex_);
      if (auto it = info_.find(key); it != info_.end()) return it->second;
    }
    if (canonize(id.k, id.bits).id != id) throw Error(id.to_string() + " is not a canonical id");
    auto computed = analyze(id);
    std::unique_lock lock(mutex_);
    // node-based map: references stay valid across rehashing
    return info_.emplace(key, std::move(computed)).first->second;
  }

 private:
  std::shared_mutex mutex_;
  std::unordered_map<std::uint32_t, Canonization> canon_;
  std::unordered_map<std::uint32_t, GraphletInfo> info_;
};

}  // namespace

bool is_connected(int k, AdjacencyBits bits) {
  if (k <= 0) return false;
  const auto adj = neighbor_masks(k, bits);
  unsigned seen = 1;
  unsigned frontier = 1;
  while (frontier) {
    unsigned next = 0;
    for (int v = 0; v < k; ++v) {
      if (frontier & (1U << v)) next |= adj[v];
    }
    frontier = next & ~seen;
    seen |= next;
  }
  return seen == (1U << k) - 1;
}

std::string CanonicalGraphletId::to_string() const {
  char buf[16];
  auto res = std::to_chars(buf, buf + sizeof buf, bits, 16);
  return "k" + std::to_string(k) + ":" + std::string(buf, res.ptr);
}

CanonicalGraphletId CanonicalGraphletId::parse(std::string_view text) {
  auto fail = [&]() -> CanonicalGraphletId {
    throw Error("malformed graphlet id '" + std::string(text) + "'");
  };
  if (text.size() < 4 || text[0] != 'k' || text[2] != ':') return fail();
  CanonicalGraphletId id;
  id.k = text[1] - '0';
  if (id.k < 2 || id.k > kMaxGraphletSize) return fail();
  const auto hex = text.substr(3);
  auto res = std::from_chars(hex.data(), hex.data() + hex.size(), id.bits, 16);
  if (res.ec != std::errc() || res.ptr != hex.data() + hex.size()) return fail();
  if (pair_count(id.k) < 32 && (id.bits >> pair_count(id.k)) != 0) return fail();
  return id;
}

std::vector<int> OrbitPartition::orbit_sizes() const {
  std::vector<int> sizes(orbit_count, 0);
  for (int o : orbit_of) ++sizes[o];
  return sizes;
}

GraphletEncoding encode_graphlet(const Graph& g, std::span<const NodeId> nodes) {
  const int k = static_cast<int>(nodes.size());
  check_size(k);
  for (int i = 0; i < k; ++i) {
    if (nodes[i] >= g.node_count()) throw Error("graphlet node " + std::to_string(nodes[i]) + " not in graph");
    for (int j = 0; j < i; ++j) {
      if (nodes[i] == nodes[j]) throw Error("duplicate graphlet node " + std::to_string(nodes[i]));
    }
  }
  GraphletEncoding enc;
  enc.k = k;
  enc.nodes.assign(nodes.begin(), nodes.end());
  for (int j = 1; j < k; ++j) {
    for (int i = 0; i < j; ++i) {
      if (g.has_edge(nodes[i], nodes[j])) enc.bits |= AdjacencyBits{1} << pair_bit(k, i, j);
    }
  }
  enc.connected = is_connected(k, enc.bits);
  return enc;
}

AdjacencyBits permute_bits(int k, AdjacencyBits bits, const Permutation& perm) {
  AdjacencyBits out = 0;
  for (int j = 1; j < k; ++j) {
    for (int i = 0; i < j; ++i) {
      if (adjacent(k, bits, i, j)) out |= AdjacencyBits{1} << pair_bit(k, perm[i], perm[j]);
    }
  }
  return out;
}

Canonization canonize_uncached(int k, AdjacencyBits bits) {
  check_size(k);
  if (!is_connected(k, bits)) throw Error("cannot canonize a disconnected graphlet");
  return CanonicalSearch(k, bits).run();
}

Canonization canonize(int k, AdjacencyBits bits) {
  check_size(k);
  return Catalog::instance().canonize(k, bits);
}

Canonization canonize(const GraphletEncoding& enc) { return canonize(enc.k, enc.bits); }

const OrbitPartition& orbits(CanonicalGraphletId id) { return Catalog::instance().info(id).orbits; }

bool is_ambiguous(CanonicalGraphletId id) { return orbits(id).orbit_count < id.k; }

std::uint64_t alignment_multiplicity(CanonicalGraphletId id) {
  return Catalog::instance().info(id).multiplicity;
}

std::uint64_t automorphism_count(CanonicalGraphletId id) {
  return Catalog::instance().info(id).automorphisms;
}

std::vector<CanonicalGraphletId> enumerate_connected_graphlets(int k, EnumerationMode mode) {
  check_size(k);
  const int pairs = pair_count(k);
  std::unordered_set<AdjacencyBits> seen;
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << pairs); ++b) {
    const auto bits = static_cast<AdjacencyBits>(b);
    if (mode == EnumerationMode::kDegreeOrdered) {
      const auto adj = neighbor_masks(k, bits);
      bool sorted = true;
      for (int v = 1; v < k && sorted; ++v) sorted = std::popcount(adj[v - 1]) <= std::popcount(adj[v]);
      if (!sorted || std::popcount(adj[0]) == 0) continue;
    }
    if (!is_connected(k, bits)) continue;
    seen.insert(canonize_uncached(k, bits).id.bits);
  }
  std::vector<CanonicalGraphletId> out;
  out.reserve(seen.size());
  for (auto bits : seen) out.push_back({k, bits});
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace galign
