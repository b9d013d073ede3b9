#ifndef GALIGN_GRAPHLET_HPP
#define GALIGN_GRAPHLET_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "galign/graph.hpp"

namespace galign {

inline constexpr int kMinGraphletSize = 3;
inline constexpr int kMaxGraphletSize = 8;

/// Upper-triangular adjacency of a k-node graphlet, k(k-1)/2 bits.
///
/// Pairs are ordered column by column, (0,1) (0,2) (1,2) (0,3) (1,3) ..., and
/// the first pair is the most significant bit. Comparing two encodings as
/// integers therefore compares their bit-strings lexicographically, and the
/// bits of the first j columns only depend on the first j+1 nodes.
using AdjacencyBits = std::uint32_t;

constexpr int pair_count(int k) { return k * (k - 1) / 2; }

constexpr int pair_bit(int k, int i, int j) {
  if (i > j) std::swap(i, j);
  return pair_count(k) - 1 - (j * (j - 1) / 2 + i);
}

constexpr bool adjacent(int k, AdjacencyBits bits, int i, int j) {
  return (bits >> pair_bit(k, i, j)) & 1U;
}

bool is_connected(int k, AdjacencyBits bits);

struct GraphletEncoding {
  int k = 0;
  AdjacencyBits bits = 0;
  std::vector<NodeId> nodes;  ///< row/column order of `bits`
  bool connected = false;
};

/// Lexicographically least encoding over all k! relabelings.
struct CanonicalGraphletId {
  int k = 0;
  AdjacencyBits bits = 0;

  friend auto operator<=>(const CanonicalGraphletId&, const CanonicalGraphletId&) = default;

  /// "k<k>:<lowercase hex>", e.g. "k3:7".
  std::string to_string() const;
  static CanonicalGraphletId parse(std::string_view text);
};

/// permutation[p] is the canonical position of input position p.
using Permutation = std::array<std::uint8_t, kMaxGraphletSize>;

struct Canonization {
  CanonicalGraphletId id;
  Permutation permutation{};
};

struct OrbitPartition {
  std::vector<int> orbit_of;  ///< canonical position -> dense orbit index
  int orbit_count = 0;

  std::vector<int> orbit_sizes() const;
};

/// Reads the induced adjacency of `nodes` (3..8 distinct nodes of g).
/// Disconnected sets are encoded and flagged, not rejected.
GraphletEncoding encode_graphlet(const Graph& g, std::span<const NodeId> nodes);

/// Relabels position p to perm[p].
AdjacencyBits permute_bits(int k, AdjacencyBits bits, const Permutation& perm);

/// Memoized. Throws Error for disconnected input or k outside 3..8.
Canonization canonize(int k, AdjacencyBits bits);
Canonization canonize(const GraphletEncoding& enc);
/// Same id as canonize() without touching the memo. The permutation may
/// differ from canonize()'s by an automorphism of the graphlet.
Canonization canonize_uncached(int k, AdjacencyBits bits);

/// Vertex orbits of the automorphism group (memoized).
const OrbitPartition& orbits(CanonicalGraphletId id);
bool is_ambiguous(CanonicalGraphletId id);
/// Number of orbit-preserving ways to align two copies: prod over orbits of size!.
std::uint64_t alignment_multiplicity(CanonicalGraphletId id);
/// |Aut(G)|.
std::uint64_t automorphism_count(CanonicalGraphletId id);

enum class EnumerationMode {
  kDegreeOrdered,  ///< only labelings with non-decreasing degrees (every class has one)
  kAllLabelings,
};

/// Every connected k-node graph up to isomorphism, sorted by id.
std::vector<CanonicalGraphletId> enumerate_connected_graphlets(
    int k, EnumerationMode mode = EnumerationMode::kDegreeOrdered);

}  // namespace galign

template <>
struct std::hash<galign::CanonicalGraphletId> {
  std::size_t operator()(const galign::CanonicalGraphletId& id) const noexcept {
    return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(id.k) << 32) | id.bits);
  }
};

#endif  // GALIGN_GRAPHLET_HPP
