#include "galign/merge.hpp"

#include <algorithm>
#include <random>

namespace galign {

void MergeParams::validate() const {
  if (!(s3_threshold > 0.0 && s3_threshold <= 1.0)) throw Error("S3 threshold t must be in (0, 1]");
  if (iterations < 1) throw Error("iteration count s must be at least 1");
}

MergedAlignment::MergedAlignment(const Graph& g1, const Graph& g2, std::size_t seed_count)
    : g1_(g1), g2_(g2), forward_(g1.node_count(), kUnmapped), backward_(g2.node_count(), kUnmapped),
      refcount_(g1.node_count(), 0), member_(seed_count, 0), slot_(g1.node_count(), 0) {}

bool MergedAlignment::is_one2one(const SeedAlignment& seed) const {
  for (auto [u, v] : seed.pairs) {
    if (forward_[u] != kUnmapped && forward_[u] != v) return false;
    if (backward_[v] != kUnmapped && backward_[v] != u) return false;
  }
  return true;
}

S3Delta MergedAlignment::delta_for(std::span<const NodePair> fresh) const {
  std::int64_t e1 = 0, e2 = 0, c = 0;
  for (std::size_t i = 0; i < fresh.size(); ++i) {
    const auto [u, v] = fresh[i];
    for (std::size_t j = i + 1; j < fresh.size(); ++j) {
      const bool a = g1_.has_edge(u, fresh[j].first);
      const bool b = g2_.has_edge(v, fresh[j].second);
      e1 += a;
      e2 += b;
      c += a && b;
    }
    // fresh nodes are unmapped, so the maps only see existing pairs
    if (g1_.degree(u) <= aligned_.size()) {
      for (NodeId w : g1_.neighbors(u)) {
        if (forward_[w] == kUnmapped) continue;
        ++e1;
        c += g2_.has_edge(v, forward_[w]);
      }
    } else {
      for (NodeId w : aligned_) {
        if (!g1_.has_edge(u, w)) continue;
        ++e1;
        c += g2_.has_edge(v, forward_[w]);
      }
    }
    if (g2_.degree(v) <= aligned_.size()) {
      for (NodeId x : g2_.neighbors(v)) e2 += backward_[x] != kUnmapped;
    } else {
      for (NodeId w : aligned_) e2 += g2_.has_edge(v, forward_[w]);
    }
  }
  return {c, e1 + e2 - c};
}

S3Delta MergedAlignment::inc_s3_add(const SeedAlignment& seed) const {
  std::vector<NodePair> fresh;
  for (auto p : seed.pairs) {
    if (forward_[p.first] == kUnmapped) fresh.push_back(p);
  }
  return delta_for(fresh);
}

void MergedAlignment::add(std::size_t seed_index, const SeedAlignment& seed) {
  if (member_[seed_index]) throw Error("merge: seed is already a member");
  if (!is_one2one(seed)) throw Error("merge: adding seed would break 1-to-1");
  const auto d = inc_s3_add(seed);
  for (auto [u, v] : seed.pairs) {
    if (refcount_[u]++ == 0) {
      forward_[u] = v;
      backward_[v] = u;
      slot_[u] = aligned_.size();
      aligned_.push_back(u);
      ++size_;
    }
  }
  conserved_ += d.conserved;
  denominator_ += d.denominator;
  member_[seed_index] = 1;
}

void MergedAlignment::remove(std::size_t seed_index, const SeedAlignment& seed) {
  if (!member_[seed_index]) throw Error("merge: removing a seed that is not a member");
  std::vector<NodePair> dropped;
  for (auto [u, v] : seed.pairs) {
    if (--refcount_[u] > 0) continue;
    dropped.emplace_back(u, v);
    forward_[u] = kUnmapped;
    backward_[v] = kUnmapped;
    const NodeId last = aligned_.back();
    aligned_[slot_[u]] = last;
    slot_[last] = slot_[u];
    aligned_.pop_back();
    --size_;
  }
  const auto d = delta_for(dropped);
  conserved_ -= d.conserved;
  denominator_ -= d.denominator;
  member_[seed_index] = 0;
}

double MergedAlignment::s3() const {
  return denominator_ == 0 ? 1.0
                           : static_cast<double>(conserved_) / static_cast<double>(denominator_);
}

double MergedAlignment::s3_with(const S3Delta& d) const {
  const auto num = static_cast<std::int64_t>(conserved_) + d.conserved;
  const auto den = static_cast<std::int64_t>(denominator_) + d.denominator;
  return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::vector<NodePair> MergedAlignment::pairs() const {
  std::vector<NodePair> out;
  out.reserve(size_);
  for (NodeId u : aligned_) out.emplace_back(u, forward_[u]);
  std::sort(out.begin(), out.end());
  return out;
}

double MergeResult::s3() const {
  return s3_denominator == 0
             ? 1.0
             : static_cast<double>(s3_numerator) / static_cast<double>(s3_denominator);
}

MergeResult merge(std::span<const SeedAlignment> seeds, const Graph& g1, const Graph& g2,
                  const OdvTables* odv, const MergeParams& params, const MergeObserver& observer) {
  params.validate();
  MergeResult result;
  result.seeds_in = seeds.size();

  std::vector<const SeedAlignment*> kept;
  if (params.odv_threshold > 1.0) {
    for (const auto& s : seeds) kept.push_back(&s);
  } else {
    if (odv == nullptr) throw Error("merge: ODV tables are required when the filter is active");
    for (const auto& s : seeds) {
      if (alignment_mean_odv(s, *odv) < params.odv_threshold) kept.push_back(&s);
    }
  }
  result.seeds_kept = kept.size();
  if (kept.empty()) return result;

  MergedAlignment m(g1, g2, kept.size());
  std::mt19937_64 rng(params.rng_seed);
  for (std::uint64_t it = 1; it <= params.iterations; ++it) {
    const auto i = static_cast<std::size_t>(uniform_below(rng, kept.size()));
    const auto& seed = *kept[i];
    if (m.is_member(i)) {
      m.remove(i, seed);
    } else if (m.is_one2one(seed) && m.s3_with(m.inc_s3_add(seed)) >= params.s3_threshold) {
      m.add(i, seed);
    }
    // removals can also land on a valid state larger than the best so far
    if (m.size() > result.pairs.size() && m.s3() >= params.s3_threshold) {
      result.pairs = m.pairs();
      result.s3_numerator = m.s3_numerator();
      result.s3_denominator = m.s3_denominator();
      result.best_iteration = it;
    }
    if (observer) observer(m);
  }
  return result;
}

}  // namespace galign
