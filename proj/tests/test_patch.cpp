#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "galign/graphlet.hpp"
#include "galign/index.hpp"
#include "galign/patch.hpp"
#include "oracles.hpp"

using namespace galign;

namespace {

/// Copy of g with node ids shuffled and labels kept on the same vertices.
Graph relabeled(const Graph& g, std::mt19937_64& rng, std::vector<NodeId>* map_out = nullptr) {
  std::vector<NodeId> map(g.node_count());
  std::iota(map.begin(), map.end(), 0);
  std::shuffle(map.begin(), map.end(), rng);
  std::vector<std::string> labels(g.node_count());
  for (NodeId u = 0; u < g.node_count(); ++u) labels[map[u]] = g.label(u);
  std::vector<Edge> edges;
  for (auto [u, v] : g.edges()) edges.emplace_back(map[u], map[v]);
  if (map_out) *map_out = map;
  return Graph::from_edges(labels, edges);
}

bool is_isomorphism(const SeedAlignment& s, const Graph& g1, const Graph& g2) {
  for (std::size_t i = 0; i < s.pairs.size(); ++i) {
    for (std::size_t j = i + 1; j < s.pairs.size(); ++j) {
      if (g1.has_edge(s.pairs[i].first, s.pairs[j].first) !=
          g2.has_edge(s.pairs[i].second, s.pairs[j].second)) {
        return false;
      }
    }
  }
  return true;
}

bool internally_one_to_one(const SeedAlignment& s) {
  std::set<NodeId> a, b;
  for (auto [u, v] : s.pairs) {
    if (!a.insert(u).second || !b.insert(v).second) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("patch key text") {
  const CanonicalGraphletId a{6, 0x1234}, b{6, 0xff};
  const std::vector<PositionPair> ov{{0, 3}, {2, 5}};
  const std::vector<PositionPair> xe{{1, 4}};
  CHECK(patch_key(a, b, ov, xe) == "P|k6:1234|k6:ff|ov:0-3,2-5|xe:1-4");
  CHECK(patch_key(a, b, ov, {}) == "P|k6:1234|k6:ff|ov:0-3,2-5|xe:");
}

TEST_CASE("patching adjacent entries") {
  const auto g = preferential_attachment(300, 4, 3);
  const auto entries = create_index(g, IndexParams{8, 2});
  REQUIRE(entries.size() > 10);

  SUBCASE("disjoint entries do not patch") {
    IndexEntry far = entries[0];
    for (auto& u : far.nodes) u += 1000;  // ids beyond the graph, never shared
    CHECK(!patch(g, entries[0], far));
  }
  SUBCASE("identical entries overlap at every position") {
    const auto p = patch(g, entries[0], entries[0]);
    REQUIRE(p);
    CHECK(p->overlap.size() == 8);
    for (auto [i, j] : p->overlap) CHECK(i == j);
    CHECK(p->cross_edges.empty());
    CHECK(p->nodes.size() == 8);
  }
  SUBCASE("every patch has 8 to 15 nodes and consistent parts") {
    std::size_t patches = 0;
    for (std::size_t l = 0; l + 1 < entries.size(); ++l) {
      const auto p = patch(g, entries[l], entries[l + 1]);
      if (!p) continue;
      ++patches;
      CHECK(p->nodes.size() == 16 - p->overlap.size());
      CHECK(p->nodes.size() >= 8);
      CHECK(p->nodes.size() <= 15);
      CHECK(std::is_sorted(p->overlap.begin(), p->overlap.end()));
      CHECK(std::is_sorted(p->cross_edges.begin(), p->cross_edges.end()));
      for (auto [i, j] : p->overlap) CHECK(entries[l].nodes[i] == entries[l + 1].nodes[j]);
      for (auto [i, j] : p->cross_edges) {
        CHECK(g.has_edge(entries[l].nodes[i], entries[l + 1].nodes[j]));
      }
      std::set<NodeId> distinct(p->nodes.begin(), p->nodes.end());
      CHECK(distinct.size() == p->nodes.size());
      CHECK(p->key == patch_key(p->first.id, p->second.id, p->overlap, p->cross_edges));
    }
    CHECK(patches > 0);
  }
}

TEST_CASE("entries sharing one node patch to 15 nodes") {
  // two copies of an unambiguous 8-node graphlet glued at one node
  CanonicalGraphletId id{};
  for (auto c : enumerate_connected_graphlets(7)) {
    if (!is_ambiguous(c)) {
      id = c;
      break;
    }
  }
  // 7-node graphlet plus an 8th pendant node keeps the example small
  std::vector<Edge> e;
  for (int j = 1; j < 7; ++j) {
    for (int i = 0; i < j; ++i) {
      if (adjacent(7, id.bits, i, j)) {
        e.emplace_back(i, j);
        e.emplace_back(i + 7, j + 7);
      }
    }
  }
  e.emplace_back(6, 14);
  e.emplace_back(13, 14);
  const auto g = oracle::make_graph(15, e);
  std::vector<NodeId> a{0, 1, 2, 3, 4, 5, 6, 14};
  std::vector<NodeId> b{7, 8, 9, 10, 11, 12, 13, 14};
  const auto ea = encode_graphlet(g, a);
  const auto eb = encode_graphlet(g, b);
  REQUIRE(ea.connected);
  REQUIRE(eb.connected);
  const auto p = patch(g, IndexEntry{canonize(ea).id, a}, IndexEntry{canonize(eb).id, b});
  REQUIRE(p);
  CHECK(p->overlap.size() == 1);
  CHECK(p->nodes.size() == 15);
}

TEST_CASE("buckets deduplicate identical node sets") {
  PatchBucket bucket;
  PatchedGraphlet p;
  p.nodes = {3, 1, 2};
  CHECK(bucket.insert(p));
  p.nodes = {1, 2, 3};
  CHECK(!bucket.insert(p));
  p.nodes = {1, 2, 4};
  CHECK(bucket.insert(p));
  CHECK(bucket.members.size() == 2);
}

TEST_CASE("only doubly-unique keys align") {
  PatchedGraphlet a;
  a.key = "K";
  a.first.nodes = {0, 1};
  a.second.nodes = {1, 2};
  a.overlap = {{1, 0}};
  a.nodes = {0, 1, 2};
  PatchedGraphlet a2 = a;
  a2.nodes = {5, 6, 7};
  a2.first.nodes = {5, 6};
  a2.second.nodes = {6, 7};

  PatchedIndex one, two, other;
  one["K"].insert(a);
  two["K"].insert(a);
  two["K"].insert(a2);
  other["L"].insert(a);

  CHECK(find_aligned_pairs(one, one).size() == 1);
  CHECK(find_aligned_pairs(two, one).empty());
  CHECK(find_aligned_pairs(one, two).empty());
  CHECK(find_aligned_pairs(one, other).empty());

  const auto seeds = find_aligned_pairs(one, one);
  CHECK(seeds[0].pairs == std::vector<NodePair>{{0, 0}, {1, 1}, {2, 2}});
  CHECK(seeds[0].source_key == "K");

  PatchedGraphlet c = a;
  c.key = "M";
  CHECK_THROWS_AS(align_nodes(a, c), Error);
}

TEST_CASE("self-alignment maps every node to itself") {
  const auto g = preferential_attachment(400, 4, 12);
  const auto idx = create_index(g, IndexParams{8, 2});
  const auto pi = patch_index(g, idx);
  const auto seeds = find_aligned_pairs(pi, pi);
  REQUIRE(!seeds.empty());
  for (const auto& s : seeds) {
    for (auto [u, v] : s.pairs) CHECK(u == v);
    CHECK(pi.at(s.source_key).members.size() == 1);
  }
}

TEST_CASE("seeds are isomorphisms between the patched graphlets") {
  std::mt19937_64 rng(40);
  const auto g = preferential_attachment(600, 4, 6);
  auto [h, removed] = perturb_edges(g, 0.02, 7);
  std::vector<NodeId> map;
  const auto h2 = relabeled(h, rng, &map);

  const auto p1 = patch_index(g, create_index(g, IndexParams{8, 2}));
  const auto p2 = patch_index(h2, create_index(h2, IndexParams{8, 2}));
  const auto seeds = find_aligned_pairs(p1, p2);
  REQUIRE(!seeds.empty());
  std::size_t correct = 0, total = 0;
  for (const auto& s : seeds) {
    CHECK(s.pairs.size() >= 8);
    CHECK(s.pairs.size() <= 15);
    CHECK(internally_one_to_one(s));
    CHECK(is_isomorphism(s, g, h2));
    CHECK(p1.at(s.source_key).members.size() == 1);
    CHECK(p2.at(s.source_key).members.size() == 1);
    for (auto [u, v] : s.pairs) {
      correct += map[u] == v;
      ++total;
    }
  }
  // not a hard requirement here, but a broken position mapping shows up as ~0
  CHECK(static_cast<double>(correct) / static_cast<double>(total) > 0.3);
}

TEST_CASE("patch_index pairs each line with the next") {
  const auto g = preferential_attachment(200, 4, 1);
  const auto entries = create_index(g, IndexParams{7, 2});
  std::size_t expected = 0;
  std::set<std::pair<std::string, std::vector<NodeId>>> seen;
  for (std::size_t l = 0; l + 1 < entries.size(); ++l) {
    if (auto p = patch(g, entries[l], entries[l + 1])) {
      auto sorted = p->nodes;
      std::sort(sorted.begin(), sorted.end());
      expected += seen.emplace(p->key, sorted).second;
    }
  }
  std::size_t members = 0;
  for (const auto& [key, bucket] : patch_index(g, entries)) members += bucket.members.size();
  CHECK(members == expected);
}

TEST_CASE("specificity bound") {
  CHECK(specificity_bound(1, 1) == Rational{1, 1});
  CHECK(specificity_bound(2, 3) == Rational{1, 3});
  CHECK(specificity_bound(10, 10) == Rational{1, 10});
  CHECK(specificity_bound(3, 2).value() == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(specificity_bound(0, 4), Error);
}

TEST_CASE("seed file round trip") {
  const auto g = preferential_attachment(300, 4, 2);
  const auto pi = patch_index(g, create_index(g, IndexParams{8, 2}));
  const auto seeds = find_aligned_pairs(pi, pi);
  std::ostringstream out;
  write_seeds(g, g, seeds, out);
  std::istringstream in(out.str());
  const auto back = read_seeds(g, g, in);
  REQUIRE(back.size() == seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    CHECK(back[i].pairs == seeds[i].pairs);
    CHECK(back[i].source_key == seeds[i].source_key);
  }
  std::istringstream bad("key\tn0-n1\n");
  CHECK_THROWS_AS(read_seeds(g, g, bad), Error);
}
