#ifndef GALIGN_TEMPORAL_HPP
#define GALIGN_TEMPORAL_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "galign/graph.hpp"

namespace galign {

struct TemporalEvent {
  std::string u;
  std::string v;
  std::int64_t time = 0;
};

/// Events sorted non-decreasing by timestamp.
struct TemporalEdgeStream {
  std::vector<TemporalEvent> events;
};

/// Parses "u v timestamp" lines and stable-sorts them by timestamp.
TemporalEdgeStream parse_temporal(std::istream& in);
TemporalEdgeStream load_temporal(const std::filesystem::path& path);

struct WindowCaps {
  std::size_t max_nodes = 20000;
  std::size_t max_edges = 400000;
  double max_edge_node_ratio = 20.0;
};

struct TemporalWindow {
  double shift_percent = 0.0;
  std::size_t start_event = 0;  ///< first event index (inclusive)
  std::size_t end_event = 0;    ///< one past the last event index
  std::size_t lost_edges = 0;   ///< window-0 edges absent from this window
  std::size_t budget = 0;       ///< distinct edges in window 0
  Graph graph;
};

/**
 * Cuts a stream into comparable windows.
 *
 * Window 0 starts at the first event and takes events until adding the next
 * new edge would exceed a cap; its distinct-edge count becomes the budget B.
 * The window for shift p starts at the earliest event index whose window
 * (B distinct edges, caps as a hard stop) is missing at least p% of window
 * 0's edges. A window-0 edge that reappears later in the stream counts as
 * regained. Unreachable shifts are skipped and reported in `warnings`.
 */
std::vector<TemporalWindow> build_windows(const TemporalEdgeStream& stream,
                                          const std::vector<double>& shift_percents,
                                          const WindowCaps& caps = {},
                                          std::vector<std::string>* warnings = nullptr);

}  // namespace galign

#endif  // GALIGN_TEMPORAL_HPP
