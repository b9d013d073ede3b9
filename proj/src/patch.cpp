#include "galign/patch.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

namespace galign {

namespace {

void append_pairs(std::string& out, std::span<const PositionPair> pairs) {
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(pairs[i].first);
    out += '-';
    out += std::to_string(pairs[i].second);
  }
}

}  // namespace

std::string patch_key(const CanonicalGraphletId& first, const CanonicalGraphletId& second,
                      std::span<const PositionPair> overlap,
                      std::span<const PositionPair> cross_edges) {
  std::string key = "P|" + first.to_string() + "|" + second.to_string() + "|ov:";
  append_pairs(key, overlap);
  key += "|xe:";
  append_pairs(key, cross_edges);
  return key;
}

std::optional<PatchedGraphlet> patch(const Graph& g, const IndexEntry& first,
                                     const IndexEntry& second) {
  PatchedGraphlet p;
  std::vector<char> shared_first(first.nodes.size(), 0);
  std::vector<char> shared_second(second.nodes.size(), 0);
  for (int i = 0; i < static_cast<int>(first.nodes.size()); ++i) {
    for (int j = 0; j < static_cast<int>(second.nodes.size()); ++j) {
      if (first.nodes[i] == second.nodes[j]) {
        p.overlap.emplace_back(i, j);
        shared_first[i] = shared_second[j] = 1;
      }
    }
  }
  if (p.overlap.empty()) return std::nullopt;

  for (int i = 0; i < static_cast<int>(first.nodes.size()); ++i) {
    if (shared_first[i]) continue;
    for (int j = 0; j < static_cast<int>(second.nodes.size()); ++j) {
      if (!shared_second[j] && g.has_edge(first.nodes[i], second.nodes[j])) {
        p.cross_edges.emplace_back(i, j);
      }
    }
  }
  // generated in (i, j) order, so both lists are already sorted

  p.nodes = first.nodes;
  for (std::size_t j = 0; j < second.nodes.size(); ++j) {
    if (!shared_second[j]) p.nodes.push_back(second.nodes[j]);
  }
  p.first = first;
  p.second = second;
  p.key = patch_key(first.id, second.id, p.overlap, p.cross_edges);
  return p;
}

bool PatchBucket::insert(PatchedGraphlet p) {
  auto sorted = p.nodes;
  std::sort(sorted.begin(), sorted.end());
  if (!node_sets.insert(std::move(sorted)).second) return false;
  members.push_back(std::move(p));
  return true;
}

PatchedIndex patch_index(const Graph& g, std::span<const IndexEntry> entries) {
  PatchedIndex index;
  for (std::size_t l = 0; l + 1 < entries.size(); ++l) {
    auto p = patch(g, entries[l], entries[l + 1]);
    if (!p) continue;
    auto& bucket = index[p->key];
    bucket.insert(std::move(*p));
  }
  return index;
}

SeedAlignment align_nodes(const PatchedGraphlet& a, const PatchedGraphlet& b) {
  if (a.key != b.key) throw Error("align_nodes: patch keys differ");
  SeedAlignment seed;
  seed.source_key = a.key;
  for (std::size_t i = 0; i < a.first.nodes.size(); ++i) {
    seed.pairs.emplace_back(a.first.nodes[i], b.first.nodes[i]);
  }
  std::vector<char> shared(a.second.nodes.size(), 0);
  for (auto [i, j] : a.overlap) shared[j] = 1;
  for (std::size_t j = 0; j < a.second.nodes.size(); ++j) {
    if (!shared[j]) seed.pairs.emplace_back(a.second.nodes[j], b.second.nodes[j]);
  }
  return seed;
}

std::vector<SeedAlignment> find_aligned_pairs(const PatchedIndex& first,
                                              const PatchedIndex& second) {
  std::vector<SeedAlignment> seeds;
  // keys present in only one index cannot be doubly unique
  auto it1 = first.begin();
  auto it2 = second.begin();
  while (it1 != first.end() && it2 != second.end()) {
    if (it1->first < it2->first) {
      ++it1;
    } else if (it2->first < it1->first) {
      ++it2;
    } else {
      if (it1->second.members.size() == 1 && it2->second.members.size() == 1) {
        seeds.push_back(align_nodes(it1->second.members.front(), it2->second.members.front()));
      }
      ++it1;
      ++it2;
    }
  }
  return seeds;
}

Rational specificity_bound(std::uint64_t n1, std::uint64_t n2) {
  if (n1 == 0 || n2 == 0) throw Error("specificity_bound: occurrence counts must be positive");
  Rational r{std::min(n1, n2), n1 * n2};
  const auto d = std::gcd(r.num, r.den);
  r.num /= d;
  r.den /= d;
  return r;
}

void write_seeds(const Graph& g1, const Graph& g2, std::span<const SeedAlignment> seeds,
                 std::ostream& out) {
  for (const auto& s : seeds) {
    out << s.source_key << '\t';
    for (std::size_t i = 0; i < s.pairs.size(); ++i) {
      if (i) out << ',';
      out << g1.label(s.pairs[i].first) << ':' << g2.label(s.pairs[i].second);
    }
    out << '\n';
  }
}

void save_seeds(const Graph& g1, const Graph& g2, std::span<const SeedAlignment> seeds,
                const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write seeds '" + path.string() + "'");
  write_seeds(g1, g2, seeds, out);
}

std::vector<SeedAlignment> read_seeds(const Graph& g1, const Graph& g2, std::istream& in) {
  std::vector<SeedAlignment> seeds;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error("seed line " + std::to_string(lineno) + ": missing tab separator");
    }
    SeedAlignment seed;
    seed.source_key = line.substr(0, tab);
    std::istringstream pairs(line.substr(tab + 1));
    for (std::string item; std::getline(pairs, item, ',');) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) {
        throw Error("seed line " + std::to_string(lineno) + ": bad pair '" + item + "'");
      }
      seed.pairs.emplace_back(g1.require(item.substr(0, colon)), g2.require(item.substr(colon + 1)));
    }
    if (seed.pairs.empty()) throw Error("seed line " + std::to_string(lineno) + ": no pairs");
    seeds.push_back(std::move(seed));
  }
  return seeds;
}

std::vector<SeedAlignment> load_seeds(const Graph& g1, const Graph& g2,
                                      const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open seeds '" + path.string() + "'");
  return read_seeds(g1, g2, in);
}

}  // namespace galign
