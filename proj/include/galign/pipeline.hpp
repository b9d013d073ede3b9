#ifndef GALIGN_PIPELINE_HPP
#define GALIGN_PIPELINE_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "galign/graph.hpp"
#include "galign/index.hpp"
#include "galign/merge.hpp"
#include "galign/metrics.hpp"

namespace galign {

/// Runs f, rethrowing any exception as Error("<stage>: <message>").
template <class F>
decltype(auto) run_stage(const std::string& stage, F&& f) {
  try {
    return std::forward<F>(f)();
  } catch (const std::exception& e) {
    throw Error(stage + ": " + e.what());
  }
}

struct PipelineConfig {
  std::filesystem::path graph1;
  std::filesystem::path graph2;
  std::optional<std::filesystem::path> truth;  ///< label identity when unset
  IndexParams index;
  MergeParams merge;
  int odv_max_size = 4;
  std::optional<std::filesystem::path> odv_weights;
  std::filesystem::path work_dir = ".";
  unsigned threads = 1;
  bool reuse_index = true;
  bool report_timing = false;  ///< timing lines make reports differ between runs
};

/// Ordered "key=value" lines.
struct EvalReport {
  std::vector<std::pair<std::string, std::string>> fields;

  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, std::uint64_t value);
  const std::string* get(const std::string& key) const;
  double number(const std::string& key) const;

  void write(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;
};

/// size, s3, s3 counts, nc, nc counts and score of one alignment.
EvalReport evaluate(std::span<const NodePair> pairs, const Graph& g1, const Graph& g2,
                    const GroundTruth& truth);

/// Index file for `g` under `work_dir`, keyed by the file stem, k, D and a
/// hash of the edge set so that a changed graph never reuses a stale index.
std::filesystem::path index_cache_path(const std::filesystem::path& work_dir,
                                       const std::filesystem::path& graph_path, const Graph& g,
                                       const IndexParams& params);

/// Loads the cached index when present, otherwise builds and saves it.
std::vector<IndexEntry> cached_index(const Graph& g, const std::filesystem::path& cache,
                                     const IndexParams& params, unsigned threads, bool reuse,
                                     bool* hit = nullptr);

struct PipelineResult {
  std::vector<NodePair> alignment;  ///< largest connected alignment
  EvalReport report;
  std::filesystem::path alignment_path;
  std::filesystem::path report_path;
};

/// Index, patch and match, ODV filter, merge, largest connected alignment,
/// evaluation. Writes alignment.tsv and report.txt into work_dir. Errors are
/// rethrown prefixed with the failing stage.
PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace galign

#endif  // GALIGN_PIPELINE_HPP
