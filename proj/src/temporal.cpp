#include "galign/temporal.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace galign {

TemporalEdgeStream parse_temporal(std::istream& in) {
  TemporalEdgeStream stream;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(std::move(t));
    if (tok.empty() || tok[0][0] == '#') continue;
    if (tok.size() != 3) {
      throw Error("temporal line " + std::to_string(lineno) + ": expected 'u v timestamp'");
    }
    TemporalEvent ev{tok[0], tok[1], 0};
    try {
      std::size_t used = 0;
      ev.time = std::stoll(tok[2], &used);
      if (used != tok[2].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error("temporal line " + std::to_string(lineno) + ": bad timestamp '" + tok[2] + "'");
    }
    stream.events.push_back(std::move(ev));
  }
  std::stable_sort(stream.events.begin(), stream.events.end(),
                   [](const TemporalEvent& a, const TemporalEvent& b) { return a.time < b.time; });
  return stream;
}

TemporalEdgeStream load_temporal(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open temporal edge list '" + path.string() + "'");
  return parse_temporal(in);
}

namespace {

constexpr std::size_t kSelfLoop = SIZE_MAX;

struct InternedEvent {
  NodeId a, b;
  std::size_t edge;  // distinct undirected edge id, or kSelfLoop
};

/// Multiset of events in a contiguous stream slice [begin, end).
class SlidingWindow {
 public:
  SlidingWindow(const std::vector<InternedEvent>& events, std::size_t nodes, std::size_t edges,
                const WindowCaps& caps, std::size_t budget)
      : events_(events), node_count_(nodes, 0), edge_count_(edges, 0), caps_(caps),
        budget_(budget) {}

  std::size_t begin() const { return begin_; }
  std::size_t end() const { return end_; }
  std::size_t distinct_edges() const { return distinct_edges_; }
  std::size_t edge_multiplicity(std::size_t e) const { return edge_count_[e]; }

  /// Takes events greedily until the next one is inadmissible.
  void extend() {
    while (end_ < events_.size() && admissible(events_[end_])) add(events_[end_++]);
  }

  void pop_front() {
    const auto& ev = events_[begin_++];
    if (ev.edge == kSelfLoop) return;
    if (--edge_count_[ev.edge] == 0) --distinct_edges_;
    if (--node_count_[ev.a] == 0) --distinct_nodes_;
    if (--node_count_[ev.b] == 0) --distinct_nodes_;
  }

  /// Repositions an empty window.
  void seek(std::size_t start) {
    if (begin_ != end_) throw Error("seek on a non-empty window");
    begin_ = end_ = start;
  }

  /// Receives ids of edges that go from absent to present during extend().
  std::vector<std::size_t>* gained = nullptr;

 private:
  bool admissible(const InternedEvent& ev) const {
    if (ev.edge == kSelfLoop || edge_count_[ev.edge] > 0) return true;
    const std::size_t nodes =
        distinct_nodes_ + (node_count_[ev.a] == 0 ? 1 : 0) + (node_count_[ev.b] == 0 ? 1 : 0);
    const std::size_t edges = distinct_edges_ + 1;
    return nodes <= caps_.max_nodes && edges <= caps_.max_edges &&
           static_cast<double>(edges) <= caps_.max_edge_node_ratio * static_cast<double>(nodes) &&
           edges <= budget_;
  }

  void add(const InternedEvent& ev) {
    if (ev.edge == kSelfLoop) return;
    if (edge_count_[ev.edge]++ == 0) {
      ++distinct_edges_;
      if (gained) gained->push_back(ev.edge);
    }
    if (node_count_[ev.a]++ == 0) ++distinct_nodes_;
    if (node_count_[ev.b]++ == 0) ++distinct_nodes_;
  }

  const std::vector<InternedEvent>& events_;
  std::vector<std::size_t> node_count_;
  std::vector<std::size_t> edge_count_;
  WindowCaps caps_;
  std::size_t budget_;
  std::size_t begin_ = 0;
  std::size_t end_ = 0;
  std::size_t distinct_nodes_ = 0;
  std::size_t distinct_edges_ = 0;
};

Graph slice_graph(const std::vector<InternedEvent>& events, const std::vector<std::string>& labels,
                  std::size_t begin, std::size_t end) {
  std::unordered_map<NodeId, NodeId> local;
  std::vector<std::string> names;
  std::vector<Edge> edges;
  auto id = [&](NodeId x) {
    auto [it, inserted] = local.emplace(x, static_cast<NodeId>(names.size()));
    if (inserted) names.push_back(labels[x]);
    return it->second;
  };
  for (std::size_t i = begin; i < end; ++i) {
    const auto& ev = events[i];
    if (ev.edge == kSelfLoop) continue;
    const NodeId a = id(ev.a);
    const NodeId b = id(ev.b);
    edges.emplace_back(a, b);
  }
  return Graph::from_edges(std::move(names), edges);
}

}  // namespace

std::vector<TemporalWindow> build_windows(const TemporalEdgeStream& stream,
                                          const std::vector<double>& shift_percents,
                                          const WindowCaps& caps,
                                          std::vector<std::string>* warnings) {
  if (stream.events.empty()) throw Error("temporal stream is empty");
  for (double p : shift_percents) {
    if (!(p >= 0.0 && p < 100.0)) throw Error("window shift must be in [0, 100) percent");
  }

  std::vector<std::string> labels;
  std::unordered_map<std::string, NodeId> node_ids;
  std::unordered_map<std::uint64_t, std::size_t> edge_ids;
  std::vector<InternedEvent> events;
  events.reserve(stream.events.size());
  auto node = [&](const std::string& s) {
    auto [it, inserted] = node_ids.emplace(s, static_cast<NodeId>(labels.size()));
    if (inserted) labels.push_back(s);
    return it->second;
  };
  for (const auto& ev : stream.events) {
    const NodeId a = node(ev.u);
    const NodeId b = node(ev.v);
    std::size_t e = kSelfLoop;
    if (a != b) {
      const std::uint64_t key = (static_cast<std::uint64_t>(std::min(a, b)) << 32) | std::max(a, b);
      e = edge_ids.emplace(key, edge_ids.size()).first->second;
    }
    events.push_back({a, b, e});
  }

  // window 0: no budget, caps only
  SlidingWindow first(events, labels.size(), edge_ids.size(), caps, SIZE_MAX);
  first.extend();
  const std::size_t end0 = first.end();
  const std::size_t budget = first.distinct_edges();
  std::vector<char> in_window0(edge_ids.size(), 0);
  for (std::size_t i = 0; i < end0; ++i) {
    if (events[i].edge != kSelfLoop) in_window0[events[i].edge] = 1;
  }

  // start index for each requested shift, found in one left-to-right sweep
  std::vector<std::size_t> starts(shift_percents.size(), SIZE_MAX);
  std::size_t pending = 0;
  for (std::size_t i = 0; i < shift_percents.size(); ++i) {
    if (shift_percents[i] == 0.0) {
      starts[i] = 0;
    } else {
      ++pending;
    }
  }
  if (pending > 0) {
    std::vector<std::size_t> gained;
    SlidingWindow sweep(events, labels.size(), edge_ids.size(), caps, budget);
    sweep.gained = &gained;
    sweep.extend();
    std::size_t lost = 0;
    for (std::size_t s = 1; s <= events.size() && pending > 0; ++s) {
      const auto& ev = events[s - 1];
      if (sweep.begin() == sweep.end()) {
        sweep.seek(s);
      } else {
        const bool was_single = ev.edge != kSelfLoop && sweep.edge_multiplicity(ev.edge) == 1;
        sweep.pop_front();
        if (was_single && in_window0[ev.edge]) ++lost;
      }
      gained.clear();
      sweep.extend();
      for (std::size_t e : gained) {
        if (in_window0[e]) --lost;
      }
      for (std::size_t i = 0; i < shift_percents.size(); ++i) {
        if (starts[i] == SIZE_MAX &&
            static_cast<double>(lost) * 100.0 >= shift_percents[i] * static_cast<double>(budget)) {
          starts[i] = s;
          --pending;
        }
      }
    }
  }

  std::vector<TemporalWindow> out;
  for (std::size_t i = 0; i < shift_percents.size(); ++i) {
    if (starts[i] == SIZE_MAX || starts[i] >= events.size()) {
      if (warnings) {
        warnings->push_back("shift " + std::to_string(shift_percents[i]) +
                            "% unreachable: stream exhausted; window omitted");
      }
      continue;
    }
    SlidingWindow w(events, labels.size(), edge_ids.size(), caps,
                    starts[i] == 0 ? SIZE_MAX : budget);
    w.seek(starts[i]);
    w.extend();
    TemporalWindow tw;
    tw.shift_percent = shift_percents[i];
    tw.start_event = w.begin();
    tw.end_event = w.end();
    tw.budget = budget;
    std::size_t lost = 0;
    for (std::size_t e = 0; e < in_window0.size(); ++e) {
      if (in_window0[e] && w.edge_multiplicity(e) == 0) ++lost;
    }
    tw.lost_edges = lost;
    if (warnings && w.distinct_edges() < budget && w.end() == events.size()) {
      warnings->push_back("shift " + std::to_string(shift_percents[i]) +
                          "% window reached the end of the stream with " +
                          std::to_string(w.distinct_edges()) + " of " + std::to_string(budget) +
                          " edges");
    }
    tw.graph = slice_graph(events, labels, tw.start_event, tw.end_event);
    out.push_back(std::move(tw));
  }
  return out;
}

}  // namespace galign
