#ifndef GALIGN_PATCH_HPP
#define GALIGN_PATCH_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "galign/graph.hpp"
#include "galign/index.hpp"

namespace galign {

using PositionPair = std::pair<int, int>;

/// Two adjacent index entries sharing at least one node.
struct PatchedGraphlet {
  IndexEntry first;
  IndexEntry second;
  std::vector<PositionPair> overlap;      ///< (position in first, position in second), sorted
  std::vector<PositionPair> cross_edges;  ///< edges between the exclusive parts, sorted
  std::vector<NodeId> nodes;              ///< first's nodes, then second's exclusive nodes
  std::string key;
};

/// "P|<id1>|<id2>|ov:<p1>-<p2>,...|xe:<p1>-<p2>,..." from sorted pair lists.
std::string patch_key(const CanonicalGraphletId& first, const CanonicalGraphletId& second,
                      std::span<const PositionPair> overlap,
                      std::span<const PositionPair> cross_edges);

/// Patches `second` onto `first`; nullopt when they share no node.
/// Cross edges are looked up in g.
std::optional<PatchedGraphlet> patch(const Graph& g, const IndexEntry& first,
                                     const IndexEntry& second);

/// Members of one key, deduplicated by their sorted node set.
struct PatchBucket {
  std::vector<PatchedGraphlet> members;
  std::set<std::vector<NodeId>> node_sets;

  bool insert(PatchedGraphlet p);
};

using PatchedIndex = std::map<std::string, PatchBucket>;

/// Pairs every index line with the line after it.
PatchedIndex patch_index(const Graph& g, std::span<const IndexEntry> entries);

struct SeedAlignment {
  std::vector<NodePair> pairs;  ///< (node in graph 1, node in graph 2)
  std::string source_key;
};

/// Position-wise mapping between two patched graphlets with equal keys.
SeedAlignment align_nodes(const PatchedGraphlet& a, const PatchedGraphlet& b);

/// One seed per key held by exactly one patched graphlet in each index,
/// in key order.
std::vector<SeedAlignment> find_aligned_pairs(const PatchedIndex& first,
                                              const PatchedIndex& second);

struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Node-correctness ceiling min(n1,n2)/(n1*n2) for a key seen n1 and n2 times,
/// in lowest terms.
Rational specificity_bound(std::uint64_t n1, std::uint64_t n2);

/// "key<TAB>u1:v1,u2:v2,..." per seed, with node labels.
void write_seeds(const Graph& g1, const Graph& g2, std::span<const SeedAlignment> seeds,
                 std::ostream& out);
void save_seeds(const Graph& g1, const Graph& g2, std::span<const SeedAlignment> seeds,
                const std::filesystem::path& path);
std::vector<SeedAlignment> read_seeds(const Graph& g1, const Graph& g2, std::istream& in);
std::vector<SeedAlignment> load_seeds(const Graph& g1, const Graph& g2,
                                      const std::filesystem::path& path);

}  // namespace galign

#endif  // GALIGN_PATCH_HPP
