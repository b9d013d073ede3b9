#ifndef GALIGN_METRICS_HPP
#define GALIGN_METRICS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "galign/graph.hpp"

namespace galign {

/// Conserved edges C and the induced edge counts E1, E2 of an alignment.
struct S3Counts {
  std::uint64_t conserved = 0;
  std::uint64_t edges1 = 0;
  std::uint64_t edges2 = 0;

  std::uint64_t denominator() const { return edges1 + edges2 - conserved; }
  /// C / (E1 + E2 - C), or 1 for an alignment that induces no edges.
  double value() const;
};

bool is_one_to_one(std::span<const NodePair> pairs);

S3Counts s3_counts(std::span<const NodePair> pairs, const Graph& g1, const Graph& g2);
double s3(std::span<const NodePair> pairs, const Graph& g1, const Graph& g2);

/// Counterpart map from graph-1 labels to graph-2 labels. Without an explicit
/// map every node's counterpart is the node with the same label.
class GroundTruth {
 public:
  GroundTruth() = default;
  static GroundTruth identity() { return {}; }
  /// Two columns "label1 label2"; must be injective.
  static GroundTruth load(const std::filesystem::path& path);
  static GroundTruth from_pairs(std::vector<std::pair<std::string, std::string>> pairs);

  bool is_identity() const { return !explicit_; }
  /// nullopt when the label has no known counterpart.
  std::optional<std::string> counterpart(const std::string& label) const;

 private:
  bool explicit_ = false;
  std::unordered_map<std::string, std::string> map_;
};

struct NodeCorrectness {
  double value = 0.0;
  std::size_t correct = 0;
  std::size_t unknown = 0;  ///< pairs whose first node has no counterpart (counted incorrect)
};

NodeCorrectness node_correctness(std::span<const NodePair> pairs, const Graph& g1, const Graph& g2,
                                 const GroundTruth& truth);

/// size * nc^2 * s3^2.
double alignment_score(std::size_t size, double nc, double s3_value);

/// Pairs whose graph-1 nodes form the largest connected component of the
/// induced subgraph on all aligned graph-1 nodes. Ties go to the component
/// holding the smallest node id. Output is sorted by the first node.
std::vector<NodePair> largest_connected_alignment(std::span<const NodePair> pairs, const Graph& g1);

/// Alignment file: '#'-prefixed "key=value" metadata lines, then "u<TAB>v".
using Metadata = std::vector<std::pair<std::string, std::string>>;
void write_alignment(const Graph& g1, const Graph& g2, std::span<const NodePair> pairs,
                     const Metadata& meta, std::ostream& out);
void save_alignment(const Graph& g1, const Graph& g2, std::span<const NodePair> pairs,
                    const Metadata& meta, const std::filesystem::path& path);
std::vector<NodePair> read_alignment(const Graph& g1, const Graph& g2, std::istream& in);
std::vector<NodePair> load_alignment(const Graph& g1, const Graph& g2,
                                     const std::filesystem::path& path);

}  // namespace galign

#endif  // GALIGN_METRICS_HPP
