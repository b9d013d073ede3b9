#include "galign/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <iostream>

#include "galign/odv.hpp"
#include "galign/patch.hpp"

namespace galign {

namespace {

std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

/// Independent of node ids and edge order: a sum of per-edge label hashes.
std::uint64_t edge_hash(const Graph& g) {
  auto fnv = [](std::string_view s, std::uint64_t h) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    h ^= 0xff;
    return h * 1099511628211ULL;
  };
  std::uint64_t sum = g.edge_count();
  for (auto [u, v] : g.edges()) {
    auto [a, b] = std::minmax(g.label(u), g.label(v));
    std::uint64_t h = fnv(b, fnv(a, 1469598103934665603ULL));
    // splitmix finalizer so that sums of similar hashes stay spread out
    h ^= h >> 30;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 27;
    h *= 0x94d049bb133111ebULL;
    h ^= h >> 31;
    sum += h;
  }
  return sum;
}

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

}  // namespace

void EvalReport::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : fields) {
    if (k == key) {
      v = value;
      return;
    }
  }
  fields.emplace_back(key, value);
}

void EvalReport::set(const std::string& key, double value) { set(key, format_double(value)); }

void EvalReport::set(const std::string& key, std::uint64_t value) {
  set(key, std::to_string(value));
}

const std::string* EvalReport::get(const std::string& key) const {
  for (const auto& [k, v] : fields) {
    if (k == key) return &v;
  }
  return nullptr;
}

double EvalReport::number(const std::string& key) const {
  const auto* v = get(key);
  if (!v) throw Error("report has no field '" + key + "'");
  return std::stod(*v);
}

void EvalReport::write(std::ostream& out) const {
  for (const auto& [k, v] : fields) out << k << '=' << v << '\n';
}

void EvalReport::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write report '" + path.string() + "'");
  write(out);
}

EvalReport evaluate(std::span<const NodePair> pairs, const Graph& g1, const Graph& g2,
                    const GroundTruth& truth) {
  EvalReport r;
  const auto counts = s3_counts(pairs, g1, g2);
  r.set("size", std::uint64_t{pairs.size()});
  r.set("s3", counts.value());
  r.set("s3_conserved", counts.conserved);
  r.set("s3_edges1", counts.edges1);
  r.set("s3_edges2", counts.edges2);
  NodeCorrectness nc;
  if (!pairs.empty()) nc = node_correctness(pairs, g1, g2, truth);
  r.set("nc", nc.value);
  r.set("nc_correct", std::uint64_t{nc.correct});
  r.set("nc_unknown", std::uint64_t{nc.unknown});
  r.set("score", alignment_score(pairs.size(), nc.value, counts.value()));
  return r;
}

std::filesystem::path index_cache_path(const std::filesystem::path& work_dir,
                                       const std::filesystem::path& graph_path, const Graph& g,
                                       const IndexParams& params) {
  char hex[17];
  auto [end, ec] = std::to_chars(hex, hex + 16, edge_hash(g), 16);
  const std::string name = graph_path.stem().string() + ".k" + std::to_string(params.k) + ".D" +
                           std::to_string(params.breadth) + "." + std::string(hex, end) + ".idx";
  return work_dir / name;
}

std::vector<IndexEntry> cached_index(const Graph& g, const std::filesystem::path& cache,
                                     const IndexParams& params, unsigned threads, bool reuse,
                                     bool* hit) {
  if (reuse && std::filesystem::exists(cache)) {
    if (hit) *hit = true;
    return load_index(g, cache);
  }
  if (hit) *hit = false;
  auto entries = create_index(g, params, threads);
  // write to a temporary name first so an interrupted run leaves no partial cache
  auto tmp = cache;
  tmp += ".tmp";
  save_index(g, entries, tmp);
  std::filesystem::rename(tmp, cache);
  return entries;
}

PipelineResult run_pipeline(const PipelineConfig& config) {
  run_stage("config", [&] {
    config.index.validate();
    config.merge.validate();
    odv_orbit_count(config.odv_max_size);
  });
  Stopwatch clock;
  std::filesystem::create_directories(config.work_dir);

  LoadStats ls1, ls2;
  const Graph g1 = run_stage("load", [&] { return load_edge_list(config.graph1, &ls1); });
  const Graph g2 = run_stage("load", [&] { return load_edge_list(config.graph2, &ls2); });
  const GroundTruth truth = run_stage("load", [&] {
    return config.truth ? GroundTruth::load(*config.truth) : GroundTruth::identity();
  });
  const double t_load = clock.lap();

  std::vector<IndexEntry> idx1, idx2;
  run_stage("index", [&] {
    bool hit = false;
    idx1 = cached_index(g1, index_cache_path(config.work_dir, config.graph1, g1, config.index),
                        config.index, config.threads, config.reuse_index, &hit);
    std::clog << "index: graph1 " << (hit ? "reused cached index" : "built") << '\n';
    idx2 = cached_index(g2, index_cache_path(config.work_dir, config.graph2, g2, config.index),
                        config.index, config.threads, config.reuse_index, &hit);
    std::clog << "index: graph2 " << (hit ? "reused cached index" : "built") << '\n';
  });
  const double t_index = clock.lap();

  std::vector<SeedAlignment> seeds;
  std::size_t keys1 = 0, keys2 = 0;
  run_stage("align", [&] {
    const auto p1 = patch_index(g1, idx1);
    const auto p2 = patch_index(g2, idx2);
    keys1 = p1.size();
    keys2 = p2.size();
    seeds = find_aligned_pairs(p1, p2);
    save_seeds(g1, g2, seeds, config.work_dir / "seeds.tsv");
  });
  const double t_align = clock.lap();

  // the filter can only reject seeds when m <= 1
  const bool filter = config.merge.odv_threshold <= 1.0;
  OdvTables odv;
  run_stage("odv", [&] {
    if (!filter) return;
    const int orbits = odv_orbit_count(config.odv_max_size);
    odv.first = compute_odv(g1, config.odv_max_size);
    odv.second = compute_odv(g2, config.odv_max_size);
    odv.weights = config.odv_weights ? load_odv_weights(*config.odv_weights, orbits)
                                     : uniform_odv_weights(orbits);
  });
  const double t_odv = clock.lap();

  const MergeResult merged = run_stage("merge", [&] {
    return merge(seeds, g1, g2, filter ? &odv : nullptr, config.merge);
  });
  const double t_merge = clock.lap();

  PipelineResult result;
  run_stage("eval", [&] {
    result.alignment = largest_connected_alignment(merged.pairs, g1);
    EvalReport& r = result.report;
    r.set("graph1", config.graph1.filename().string());
    r.set("graph2", config.graph2.filename().string());
    r.set("n1", std::uint64_t{g1.node_count()});
    r.set("m1", std::uint64_t{g1.edge_count()});
    r.set("n2", std::uint64_t{g2.node_count()});
    r.set("m2", std::uint64_t{g2.edge_count()});
    r.set("k", std::uint64_t(config.index.k));
    r.set("D", std::uint64_t(config.index.breadth));
    r.set("m", config.merge.odv_threshold);
    r.set("t", config.merge.s3_threshold);
    r.set("s", config.merge.iterations);
    r.set("rng_seed", config.merge.rng_seed);
    r.set("odv_filter", std::string(filter ? "on" : "off"));
    r.set("odv_orbits", std::uint64_t(odv_orbit_count(config.odv_max_size)));
    r.set("odv_weights", config.odv_weights ? config.odv_weights->filename().string()
                                            : std::string("uniform"));
    r.set("truth", config.truth ? config.truth->filename().string() : std::string("identity"));
    r.set("nc_missing_truth", std::string("incorrect"));
    r.set("connected_network", std::string("graph1"));
    r.set("index_entries1", std::uint64_t{idx1.size()});
    r.set("index_entries2", std::uint64_t{idx2.size()});
    r.set("patch_keys1", std::uint64_t{keys1});
    r.set("patch_keys2", std::uint64_t{keys2});
    r.set("seeds", std::uint64_t{merged.seeds_in});
    r.set("seeds_kept", std::uint64_t{merged.seeds_kept});
    std::size_t largest_seed = 0;
    for (const auto& s : seeds) largest_seed = std::max(largest_seed, s.pairs.size());
    r.set("largest_seed", std::uint64_t{largest_seed});
    r.set("merged_size", std::uint64_t{merged.pairs.size()});
    r.set("merged_s3", merged.s3());
    r.set("best_iteration", merged.best_iteration);
    for (auto& field : evaluate(result.alignment, g1, g2, truth).fields) {
      r.set(field.first, field.second);
    }
    if (config.report_timing) {
      r.set("time_load_s", t_load);
      r.set("time_index_s", t_index);
      r.set("time_align_s", t_align);
      r.set("time_odv_s", t_odv);
      r.set("time_merge_s", t_merge);
    }

    Metadata meta;
    for (const char* key : {"k", "D", "m", "t", "s", "rng_seed", "size", "s3"}) {
      meta.emplace_back(key, *r.get(key));
    }
    result.alignment_path = config.work_dir / "alignment.tsv";
    result.report_path = config.work_dir / "report.txt";
    save_alignment(g1, g2, result.alignment, meta, result.alignment_path);
    r.save(result.report_path);
  });
  return result;
}

}  // namespace galign
