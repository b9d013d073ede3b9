#include "galign/index.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

namespace galign {

void IndexParams::validate() const {
  if (k < 6 || k > kMaxGraphletSize) throw Error("index graphlet size k must be in 6..8");
  if (breadth < 1) throw Error("expansion breadth D must be at least 1");
}

std::vector<NodeId> root_order(const Graph& g) {
  std::vector<NodeId> order(g.node_count());
  for (NodeId u = 0; u < order.size(); ++u) order[u] = u;
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return g.degree(a) > g.degree(b); });
  return order;
}

namespace {

/// Reusable buffers for one expansion thread.
struct ExpandScratch {
  std::vector<std::uint32_t> stamp;
  std::uint32_t epoch = 0;
  std::vector<std::uint64_t> keys;
  std::vector<std::size_t> degrees;

  explicit ExpandScratch(std::size_t n) : stamp(n, 0) {}
};

// Sorting keys descending yields descending degree, then ascending id.
std::uint64_t order_key(const Graph& g, NodeId v) {
  return (static_cast<std::uint64_t>(g.degree(v)) << 32) | (0xFFFFFFFFU - v);
}

NodeId key_node(std::uint64_t key) { return 0xFFFFFFFFU - static_cast<NodeId>(key & 0xFFFFFFFFU); }
std::size_t key_degree(std::uint64_t key) { return static_cast<std::size_t>(key >> 32); }

void expand_neighbors_into(const Graph& g, std::span<const NodeId> current,
                           const IndexParams& params, ExpandScratch& scratch,
                           std::vector<NodeId>& out) {
  out.clear();
  if (++scratch.epoch == 0) {
    std::fill(scratch.stamp.begin(), scratch.stamp.end(), 0);
    scratch.epoch = 1;
  }
  for (NodeId u : current) scratch.stamp[u] = scratch.epoch;
  auto& keys = scratch.keys;
  keys.clear();
  for (NodeId u : current) {
    for (NodeId v : g.neighbors(u)) {
      if (scratch.stamp[v] == scratch.epoch) continue;
      scratch.stamp[v] = scratch.epoch;
      keys.push_back(order_key(g, v));
    }
  }
  if (keys.empty()) return;

  // Hub neighborhoods can be large, so avoid a full sort: pick the deferred
  // keys with nth_element, then find the D-th largest distinct degree among
  // the rest in one pass and sort only what passes it.
  const auto c = static_cast<long>(current.size());
  const auto count = static_cast<long>(keys.size());
  const long deferred = std::max(0L, std::min<long>(params.k - 1 - c, count - params.breadth));
  const auto rest = keys.begin() + deferred;
  if (deferred > 0) std::nth_element(keys.begin(), rest - 1, keys.end(), std::greater<>());

  auto& top = scratch.degrees;  // largest distinct degrees, descending
  top.clear();
  const auto want = static_cast<std::size_t>(params.breadth);
  for (auto it = rest; it != keys.end(); ++it) {
    const auto d = key_degree(*it);
    if (top.size() == want && d <= top.back()) continue;
    const auto pos = std::lower_bound(top.begin(), top.end(), d, std::greater<>());
    if (pos != top.end() && *pos == d) continue;
    top.insert(pos, d);
    if (top.size() > want) top.pop_back();
  }
  const auto threshold = top.back();
  const auto kept = std::partition(rest, keys.end(),
                                   [&](std::uint64_t key) { return key_degree(key) >= threshold; });
  std::sort(rest, kept, std::greater<>());
  for (auto it = rest; it != kept; ++it) out.push_back(key_node(*it));

  // deferred hubs carry heuristic value 0, the lowest class
  if (deferred > 0 && top.size() < want) {
    const auto first = static_cast<long>(out.size());
    for (long i = 0; i < deferred; ++i) out.push_back(key_node(keys[i]));
    std::sort(out.begin() + first, out.end());
  }
}

}  // namespace

std::vector<NodeId> expand_neighbors(const Graph& g, std::span<const NodeId> current,
                                     const IndexParams& params) {
  ExpandScratch scratch(g.node_count());
  std::vector<NodeId> out;
  expand_neighbors_into(g, current, params, scratch, out);
  return out;
}

namespace {

class Expander {
 public:
  Expander(const Graph& g, const IndexParams& params, const EntrySink& emit, IndexStats* stats)
      : g_(g), params_(params), emit_(emit), stats_(stats), scratch_(g.node_count()),
        levels_(params.k) {}

  void run(std::vector<NodeId>& current) {
    const auto depth = current.size();
    if (static_cast<int>(depth) == params_.k) {
      leaf(current);
      return;
    }
    auto& next = levels_[depth];
    expand_neighbors_into(g_, current, params_, scratch_, next);
    if (stats_) stats_->max_expand = std::max(stats_->max_expand, next.size());
    for (NodeId u : next) {
      current.push_back(u);
      run(current);
      current.pop_back();
    }
  }

 private:
  void leaf(const std::vector<NodeId>& nodes) {
    if (stats_) ++stats_->leaves;
    const auto enc = encode_graphlet(g_, nodes);
    const auto canon = canonize(enc);
    if (is_ambiguous(canon.id)) return;
    IndexEntry entry;
    entry.id = canon.id;
    entry.nodes.resize(nodes.size());
    for (std::size_t p = 0; p < nodes.size(); ++p) entry.nodes[canon.permutation[p]] = nodes[p];
    if (stats_) ++stats_->emitted;
    emit_(std::move(entry));
  }

  const Graph& g_;
  const IndexParams& params_;
  const EntrySink& emit_;
  IndexStats* stats_;
  ExpandScratch scratch_;
  std::vector<std::vector<NodeId>> levels_;  // expansion list per depth
};

}  // namespace

void expand(const Graph& g, const IndexParams& params, std::vector<NodeId>& current,
            const EntrySink& emit, IndexStats* stats) {
  params.validate();
  if (current.empty()) return;
  Expander(g, params, emit, stats).run(current);
}

std::vector<IndexEntry> create_index(const Graph& g, const IndexParams& params, unsigned threads,
                                     IndexStats* stats) {
  params.validate();
  const auto roots = root_order(g);
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(roots.size())));

  std::vector<std::vector<IndexEntry>> per_root(roots.size());
  std::vector<IndexStats> per_thread(threads);
  std::atomic<std::size_t> next{0};
  auto worker = [&](unsigned t) {
    std::vector<IndexEntry>* sink = nullptr;
    const EntrySink emit = [&sink](IndexEntry&& e) { sink->push_back(std::move(e)); };
    Expander expander(g, params, emit, &per_thread[t]);
    std::vector<NodeId> current;
    for (std::size_t i; (i = next.fetch_add(1)) < roots.size();) {
      sink = &per_root[i];
      current.assign(1, roots[i]);
      expander.run(current);
      ++per_thread[t].roots;
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
  }

  std::vector<IndexEntry> out;
  std::size_t total = 0;
  for (const auto& v : per_root) total += v.size();
  out.reserve(total);
  for (auto& v : per_root) std::move(v.begin(), v.end(), std::back_inserter(out));

  if (stats) {
    *stats = {};
    for (const auto& s : per_thread) {
      stats->roots += s.roots;
      stats->leaves += s.leaves;
      stats->emitted += s.emitted;
      stats->max_expand = std::max(stats->max_expand, s.max_expand);
    }
  }
  return out;
}

void write_index(const Graph& g, std::span<const IndexEntry> entries, std::ostream& out) {
  for (const auto& e : entries) {
    out << e.id.to_string();
    for (NodeId u : e.nodes) out << ' ' << g.label(u);
    out << '\n';
  }
}

void save_index(const Graph& g, std::span<const IndexEntry> entries,
                const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write index '" + path.string() + "'");
  write_index(g, entries, out);
}

std::vector<IndexEntry> read_index(const Graph& g, std::istream& in) {
  std::vector<IndexEntry> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string id_text;
    if (!(ss >> id_text)) continue;
    IndexEntry e;
    try {
      e.id = CanonicalGraphletId::parse(id_text);
    } catch (const Error& err) {
      throw Error("index line " + std::to_string(lineno) + ": " + err.what());
    }
    for (std::string label; ss >> label;) {
      auto u = g.find(label);
      if (!u) throw Error("index line " + std::to_string(lineno) + ": node '" + label + "' not in graph");
      e.nodes.push_back(*u);
    }
    if (static_cast<int>(e.nodes.size()) != e.id.k) {
      throw Error("index line " + std::to_string(lineno) + ": expected " + std::to_string(e.id.k) +
                  " nodes, got " + std::to_string(e.nodes.size()));
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<IndexEntry> load_index(const Graph& g, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open index '" + path.string() + "'");
  return read_index(g, in);
}

}  // namespace galign
