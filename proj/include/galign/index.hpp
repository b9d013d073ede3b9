#ifndef GALIGN_INDEX_HPP
#define GALIGN_INDEX_HPP

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "galign/graph.hpp"
#include "galign/graphlet.hpp"

namespace galign {

struct IndexParams {
  int k = 8;
  int breadth = 2;  ///< number of distinct degree values expanded per step

  void validate() const;
};

/// An unambiguous graphlet; nodes[i] sits at canonical position i.
struct IndexEntry {
  CanonicalGraphletId id;
  std::vector<NodeId> nodes;

  friend bool operator==(const IndexEntry&, const IndexEntry&) = default;
};

struct IndexStats {
  std::size_t roots = 0;
  std::size_t leaves = 0;      ///< k-node sets reached
  std::size_t emitted = 0;     ///< unambiguous leaves written
  std::size_t max_expand = 0;  ///< largest expansion set seen (M)
};

/// Nodes by descending degree, ties by ascending id.
std::vector<NodeId> root_order(const Graph& g);

/**
 * Candidate nodes for growing `current` by one.
 *
 * Takes every neighbor of the current set that is not already in it and
 * defers the h = max(0, min(k-1-c, |neighbors|-D)) highest-degree ones (lowest
 * id first among equal degrees) by giving them heuristic value 0. Every other
 * neighbor is valued by its degree. Returns all nodes whose value is among the
 * D largest distinct values, ordered by descending value, then ascending id.
 * Deferred hubs therefore come back only when the rest offer fewer than D
 * distinct degrees.
 */
std::vector<NodeId> expand_neighbors(const Graph& g, std::span<const NodeId> current,
                                     const IndexParams& params);

using EntrySink = std::function<void(IndexEntry&&)>;

/// Depth-first expansion of `current` (backtracking in place). Emits an
/// entry for every unambiguous k-node set reached.
void expand(const Graph& g, const IndexParams& params, std::vector<NodeId>& current,
            const EntrySink& emit, IndexStats* stats = nullptr);

/// Runs expand() from every root in root_order(). With threads > 1, roots are
/// processed concurrently but the result keeps root order, so the output is
/// identical for any thread count.
std::vector<IndexEntry> create_index(const Graph& g, const IndexParams& params,
                                     unsigned threads = 1, IndexStats* stats = nullptr);

/// "<id> <label_1> ... <label_k>" per line.
void write_index(const Graph& g, std::span<const IndexEntry> entries, std::ostream& out);
void save_index(const Graph& g, std::span<const IndexEntry> entries,
                const std::filesystem::path& path);
std::vector<IndexEntry> read_index(const Graph& g, std::istream& in);
std::vector<IndexEntry> load_index(const Graph& g, const std::filesystem::path& path);

}  // namespace galign

#endif  // GALIGN_INDEX_HPP
