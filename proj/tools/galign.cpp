#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "galign/graph.hpp"
#include "galign/index.hpp"
#include "galign/merge.hpp"
#include "galign/metrics.hpp"
#include "galign/odv.hpp"
#include "galign/patch.hpp"
#include "galign/pipeline.hpp"
#include "galign/temporal.hpp"

using namespace galign;
namespace fs = std::filesystem;

namespace {

struct Globals {
  std::uint64_t rng_seed = 0;
  unsigned threads = 1;
  std::string report;
};

int max_size_for_orbits(int orbits) {
  if (orbits == 15) return 4;
  if (orbits == 73) return 5;
  throw Error("--orbits must be 15 or 73");
}

void emit(const Globals& globals, const EvalReport& r) {
  r.write(std::cout);
  if (!globals.report.empty()) r.save(globals.report);
}

Graph load_graph(const std::string& path) {
  LoadStats st;
  Graph g = load_edge_list(path, &st);
  if (st.self_loops_dropped || st.duplicates_dropped) {
    std::clog << path << ": dropped " << st.self_loops_dropped << " self-loops, "
              << st.duplicates_dropped << " duplicate edges\n";
  }
  return g;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topology-only local graph alignment from unambiguous graphlets"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals globals;
  app.add_option("--rng-seed", globals.rng_seed, "Seed for every random choice");
  app.add_option("--threads", globals.threads, "Worker threads for indexing")
      ->check(CLI::PositiveNumber);
  app.add_option("--report", globals.report, "Write key=value metrics to FILE");

  // index
  std::string index_graph, index_out;
  IndexParams index_params;
  auto* index = app.add_subcommand("index", "Build the graphlet index of a graph");
  index->add_option("--graph", index_graph)->required();
  index->add_option("--k", index_params.k, "Graphlet size (6..8)");
  index->add_option("--D", index_params.breadth, "Expansion breadth");
  index->add_option("--out", index_out)->required();
  index->callback([&] {
    run_stage("index", [&] {
      index_params.validate();
      const Graph g = load_graph(index_graph);
      IndexStats st;
      const auto entries = create_index(g, index_params, globals.threads, &st);
      save_index(g, entries, index_out);
      EvalReport r;
      r.set("entries", std::uint64_t{entries.size()});
      r.set("roots", std::uint64_t{st.roots});
      r.set("leaves", std::uint64_t{st.leaves});
      r.set("max_expand", std::uint64_t{st.max_expand});
      emit(globals, r);
    });
  });

  // align
  std::string align_idx1, align_idx2, align_g1, align_g2, align_out;
  auto* align = app.add_subcommand("align", "Match doubly-unique patched graphlets");
  align->add_option("--index1", align_idx1)->required();
  align->add_option("--graph1", align_g1)->required();
  align->add_option("--index2", align_idx2)->required();
  align->add_option("--graph2", align_g2)->required();
  align->add_option("--out", align_out)->required();
  align->callback([&] {
    run_stage("align", [&] {
      const Graph g1 = load_graph(align_g1);
      const Graph g2 = load_graph(align_g2);
      const auto p1 = patch_index(g1, load_index(g1, align_idx1));
      const auto p2 = patch_index(g2, load_index(g2, align_idx2));
      const auto seeds = find_aligned_pairs(p1, p2);
      save_seeds(g1, g2, seeds, align_out);
      std::size_t shared = 0;
      for (const auto& [key, bucket] : p1) shared += p2.count(key);
      EvalReport r;
      r.set("patch_keys1", std::uint64_t{p1.size()});
      r.set("patch_keys2", std::uint64_t{p2.size()});
      r.set("shared_keys", std::uint64_t{shared});
      r.set("seeds", std::uint64_t{seeds.size()});
      emit(globals, r);
    });
  });

  // odv
  std::string odv_graph, odv_out;
  int odv_orbits = 15;
  auto* odv = app.add_subcommand("odv", "Compute orbit degree vectors");
  odv->add_option("--graph", odv_graph)->required();
  odv->add_option("--out", odv_out)->required();
  odv->add_option("--orbits", odv_orbits, "15 (up to 4 nodes) or 73 (up to 5 nodes)");
  odv->callback([&] {
    run_stage("odv", [&] {
      const int max_size = max_size_for_orbits(odv_orbits);
      const Graph g = load_graph(odv_graph);
      save_odv(g, compute_odv(g, max_size), odv_out);
      EvalReport r;
      r.set("nodes", std::uint64_t{g.node_count()});
      r.set("orbits", std::uint64_t(odv_orbits));
      emit(globals, r);
    });
  });

  // merge
  std::string merge_seeds, merge_g1, merge_g2, merge_odv1, merge_odv2, merge_weights, merge_out;
  MergeParams merge_params;
  auto* mergecmd = app.add_subcommand("merge", "Merge seed alignments");
  mergecmd->add_option("--seeds", merge_seeds)->required();
  mergecmd->add_option("--graph1", merge_g1)->required();
  mergecmd->add_option("--graph2", merge_g2)->required();
  mergecmd->add_option("--odv1", merge_odv1, "Required unless --m exceeds 1");
  mergecmd->add_option("--odv2", merge_odv2, "Required unless --m exceeds 1");
  mergecmd->add_option("--weights", merge_weights, "ODV weights, one value per orbit");
  mergecmd->add_option("--m", merge_params.odv_threshold, "Drop seeds with mean ODV similarity >= m");
  mergecmd->add_option("--t", merge_params.s3_threshold, "Minimum S3 of the merged alignment");
  mergecmd->add_option("--s", merge_params.iterations, "Iterations");
  mergecmd->add_option("--out", merge_out)->required();
  mergecmd->callback([&] {
    run_stage("merge", [&] {
      merge_params.rng_seed = globals.rng_seed;
      merge_params.validate();
      const Graph g1 = load_graph(merge_g1);
      const Graph g2 = load_graph(merge_g2);
      const auto seeds = load_seeds(g1, g2, merge_seeds);
      OdvTables tables;
      const bool filter = merge_params.odv_threshold <= 1.0;
      if (filter) {
        if (merge_odv1.empty() || merge_odv2.empty()) throw Error("--odv1 and --odv2 are required");
        tables.first = load_odv(g1, merge_odv1);
        tables.second = load_odv(g2, merge_odv2);
        const int width = tables.first.empty() ? 0 : static_cast<int>(tables.first[0].size());
        tables.weights = merge_weights.empty() ? uniform_odv_weights(width)
                                               : load_odv_weights(merge_weights, width);
      }
      const auto result = merge(seeds, g1, g2, filter ? &tables : nullptr, merge_params);
      Metadata meta{{"m", std::to_string(merge_params.odv_threshold)},
                    {"t", std::to_string(merge_params.s3_threshold)},
                    {"s", std::to_string(merge_params.iterations)},
                    {"rng_seed", std::to_string(merge_params.rng_seed)},
                    {"size", std::to_string(result.pairs.size())},
                    {"s3", std::to_string(result.s3())}};
      save_alignment(g1, g2, result.pairs, meta, merge_out);
      EvalReport r;
      r.set("seeds", std::uint64_t{result.seeds_in});
      r.set("seeds_kept", std::uint64_t{result.seeds_kept});
      r.set("size", std::uint64_t{result.pairs.size()});
      r.set("s3", result.s3());
      r.set("best_iteration", result.best_iteration);
      emit(globals, r);
    });
  });

  // eval
  std::string eval_alignment, eval_g1, eval_g2, eval_truth, eval_out;
  bool eval_connected = false;
  auto* eval = app.add_subcommand("eval", "Score an alignment");
  eval->add_option("--alignment", eval_alignment)->required();
  eval->add_option("--graph1", eval_g1)->required();
  eval->add_option("--graph2", eval_g2)->required();
  eval->add_option("--truth", eval_truth, "Two-column counterpart map (default: equal labels)");
  eval->add_flag("--connected", eval_connected,
                 "Restrict to the largest connected alignment in graph 1 first");
  eval->add_option("--out", eval_out, "Write the evaluated alignment here");
  eval->callback([&] {
    run_stage("eval", [&] {
      const Graph g1 = load_graph(eval_g1);
      const Graph g2 = load_graph(eval_g2);
      const GroundTruth truth =
          eval_truth.empty() ? GroundTruth::identity() : GroundTruth::load(eval_truth);
      auto pairs = load_alignment(g1, g2, eval_alignment);
      if (eval_connected) pairs = largest_connected_alignment(pairs, g1);
      const EvalReport r = evaluate(pairs, g1, g2, truth);
      if (!eval_out.empty()) save_alignment(g1, g2, pairs, {}, eval_out);
      emit(globals, r);
    });
  });

  // pipeline
  PipelineConfig config;
  std::string pipe_g1, pipe_g2, pipe_truth, pipe_weights, pipe_work = "galign-work";
  int pipe_orbits = 15;
  bool no_cache = false;
  auto* pipeline = app.add_subcommand("pipeline", "Index, align, merge and evaluate two graphs");
  pipeline->add_option("--graph1", pipe_g1)->required();
  pipeline->add_option("--graph2", pipe_g2)->required();
  pipeline->add_option("--truth", pipe_truth);
  pipeline->add_option("--k", config.index.k);
  pipeline->add_option("--D", config.index.breadth);
  pipeline->add_option("--m", config.merge.odv_threshold);
  pipeline->add_option("--t", config.merge.s3_threshold);
  pipeline->add_option("--s", config.merge.iterations);
  pipeline->add_option("--orbits", pipe_orbits, "15 or 73");
  pipeline->add_option("--weights", pipe_weights);
  pipeline->add_option("--work-dir", pipe_work, "Index cache and output directory");
  pipeline->add_flag("--no-cache", no_cache, "Rebuild indexes even when cached");
  pipeline->add_flag("--timing", config.report_timing, "Add stage timings to the report");
  pipeline->callback([&] {
    run_stage("pipeline", [&] {
      config.graph1 = pipe_g1;
      config.graph2 = pipe_g2;
      if (!pipe_truth.empty()) config.truth = pipe_truth;
      if (!pipe_weights.empty()) config.odv_weights = pipe_weights;
      config.odv_max_size = max_size_for_orbits(pipe_orbits);
      config.work_dir = pipe_work;
      config.threads = globals.threads;
      config.reuse_index = !no_cache;
      config.merge.rng_seed = globals.rng_seed;
    });
    const auto result = run_pipeline(config);
    emit(globals, result.report);
  });

  // windows
  std::string win_stream, win_dir = ".";
  std::vector<double> win_shifts{0, 1, 3, 5};
  WindowCaps caps;
  auto* windows = app.add_subcommand("windows", "Cut a temporal edge stream into shifted windows");
  windows->add_option("--stream", win_stream, "Lines of \"u v time\"")->required();
  windows->add_option("--shifts", win_shifts, "Edge-loss percents")->delimiter(',');
  windows->add_option("--out-dir", win_dir);
  windows->add_option("--max-nodes", caps.max_nodes);
  windows->add_option("--max-edges", caps.max_edges);
  windows->add_option("--max-ratio", caps.max_edge_node_ratio);
  windows->callback([&] {
    run_stage("windows", [&] {
      const auto stream = load_temporal(win_stream);
      std::vector<std::string> warnings;
      const auto ws = build_windows(stream, win_shifts, caps, &warnings);
      for (const auto& w : warnings) std::clog << "warning: " << w << '\n';
      fs::create_directories(win_dir);
      EvalReport r;
      for (const auto& w : ws) {
        std::ostringstream tag;
        tag << "shift" << w.shift_percent;
        save_edge_list(w.graph, fs::path(win_dir) / (tag.str() + ".el"));
        r.set(tag.str() + "_start", std::uint64_t{w.start_event});
        r.set(tag.str() + "_end", std::uint64_t{w.end_event});
        r.set(tag.str() + "_nodes", std::uint64_t{w.graph.node_count()});
        r.set(tag.str() + "_edges", std::uint64_t{w.graph.edge_count()});
        r.set(tag.str() + "_lost", std::uint64_t{w.lost_edges});
        r.set(tag.str() + "_lost_percent",
              w.budget ? 100.0 * static_cast<double>(w.lost_edges) / static_cast<double>(w.budget)
                       : 0.0);
      }
      emit(globals, r);
    });
  });

  // perturb
  std::string pert_graph, pert_out, pert_removed;
  double pert_fraction = 0.01;
  auto* perturb = app.add_subcommand("perturb", "Remove a random fraction of edges");
  perturb->add_option("--graph", pert_graph)->required();
  perturb->add_option("--fraction", pert_fraction);
  perturb->add_option("--out", pert_out)->required();
  perturb->add_option("--removed", pert_removed, "Write the removed edges here");
  perturb->callback([&] {
    run_stage("perturb", [&] {
      const Graph g = load_graph(pert_graph);
      auto [h, removed] = perturb_edges(g, pert_fraction, globals.rng_seed);
      save_edge_list(h, pert_out);
      if (!pert_removed.empty()) {
        std::ofstream out(pert_removed);
        if (!out) throw Error("cannot write '" + pert_removed + "'");
        for (auto [u, v] : removed) out << g.label(u) << ' ' << g.label(v) << '\n';
      }
      EvalReport r;
      r.set("edges_before", std::uint64_t{g.edge_count()});
      r.set("edges_removed", std::uint64_t{removed.size()});
      emit(globals, r);
    });
  });

  // stats
  std::string stats_graph, stats_out;
  auto* stats = app.add_subcommand("stats", "Degree distribution as CSV");
  stats->add_option("--graph", stats_graph)->required();
  stats->add_option("--out", stats_out, "CSV file (default: stdout)");
  stats->callback([&] {
    run_stage("stats", [&] {
      const Graph g = load_graph(stats_graph);
      const auto hist = degree_stats(g);
      if (stats_out.empty()) {
        write_degree_csv(hist, std::cout);
      } else {
        std::ofstream out(stats_out);
        if (!out) throw Error("cannot write '" + stats_out + "'");
        write_degree_csv(hist, out);
      }
      if (!globals.report.empty()) {
        EvalReport r;
        r.set("nodes", std::uint64_t{g.node_count()});
        r.set("edges", std::uint64_t{g.edge_count()});
        r.set("max_degree", std::uint64_t{g.max_degree()});
        r.save(globals.report);
      }
    });
  });

  // generate
  std::size_t gen_n = 1000, gen_m = 5;
  std::string gen_out;
  auto* generate = app.add_subcommand("generate", "Write a preferential-attachment graph");
  generate->add_option("--nodes", gen_n);
  generate->add_option("--edges-per-node", gen_m);
  generate->add_option("--out", gen_out)->required();
  generate->callback([&] {
    run_stage("generate", [&] {
      save_edge_list(preferential_attachment(gen_n, gen_m, globals.rng_seed), gen_out);
    });
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "galign: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
