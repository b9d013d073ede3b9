#ifndef GALIGN_MERGE_HPP
#define GALIGN_MERGE_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "galign/graph.hpp"
#include "galign/odv.hpp"
#include "galign/patch.hpp"

namespace galign {

struct MergeParams {
  double odv_threshold = 0.95;  ///< seeds with mean ODV similarity >= this are dropped
  double s3_threshold = 0.95;
  std::uint64_t iterations = 20000;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

/// Change in conserved edges (C) and in the S3 denominator (E1 + E2 - C).
struct S3Delta {
  std::int64_t conserved = 0;
  std::int64_t denominator = 0;

  friend bool operator==(const S3Delta&, const S3Delta&) = default;
};

/**
 * A union of seed alignments kept 1-to-1.
 *
 * Pairs are reference counted by the member seeds that contain them, so
 * removing a seed only drops pairs no other member holds. The S3 numerator
 * and denominator are maintained incrementally.
 */
class MergedAlignment {
 public:
  MergedAlignment(const Graph& g1, const Graph& g2, std::size_t seed_count);

  bool is_member(std::size_t seed_index) const { return member_[seed_index]; }
  /// Every pair (u, v) has u unmapped or mapped to v, and v unmapped or mapped from u.
  bool is_one2one(const SeedAlignment& seed) const;
  /// Effect of adding `seed`; requires is_one2one(seed).
  S3Delta inc_s3_add(const SeedAlignment& seed) const;

  void add(std::size_t seed_index, const SeedAlignment& seed);
  void remove(std::size_t seed_index, const SeedAlignment& seed);

  std::size_t size() const { return size_; }
  std::uint64_t s3_numerator() const { return conserved_; }
  std::uint64_t s3_denominator() const { return denominator_; }
  /// 1 when the denominator is 0.
  double s3() const;
  /// S3 after adding a delta, same convention.
  double s3_with(const S3Delta& d) const;

  static constexpr NodeId kUnmapped = UINT32_MAX;
  NodeId forward(NodeId u) const { return forward_[u]; }
  NodeId backward(NodeId v) const { return backward_[v]; }
  std::uint32_t refcount(NodeId u) const { return refcount_[u]; }

  /// Current pairs sorted by the first node.
  std::vector<NodePair> pairs() const;

 private:
  /// Edge deltas from inserting nodes `fresh` (pairs absent from the maps) on
  /// top of the current maps.
  S3Delta delta_for(std::span<const NodePair> fresh) const;

  const Graph& g1_;
  const Graph& g2_;
  std::vector<NodeId> forward_;
  std::vector<NodeId> backward_;
  std::vector<std::uint32_t> refcount_;
  std::vector<char> member_;
  std::vector<NodeId> aligned_;  // first coordinates currently mapped
  std::vector<std::size_t> slot_;
  std::size_t size_ = 0;
  std::uint64_t conserved_ = 0;
  std::uint64_t denominator_ = 0;
};

struct MergeResult {
  std::vector<NodePair> pairs;  ///< largest alignment seen with S3 >= t
  std::uint64_t s3_numerator = 0;
  std::uint64_t s3_denominator = 0;
  std::size_t seeds_in = 0;
  std::size_t seeds_kept = 0;  ///< after the ODV filter
  std::uint64_t best_iteration = 0;

  double s3() const;
};

/// Observer invoked after every iteration, for invariant checks.
using MergeObserver = std::function<void(const MergedAlignment&)>;

/// Drops seeds whose mean ODV similarity is >= params.odv_threshold, then runs
/// params.iterations random add/remove steps. `odv` may be null only when the
/// threshold exceeds 1 (the filter cannot reject anything).
MergeResult merge(std::span<const SeedAlignment> seeds, const Graph& g1, const Graph& g2,
                  const OdvTables* odv, const MergeParams& params,
                  const MergeObserver& observer = {});

}  // namespace galign

#endif  // GALIGN_MERGE_HPP
