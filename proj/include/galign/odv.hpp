#ifndef GALIGN_ODV_HPP
#define GALIGN_ODV_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "galign/graph.hpp"
#include "galign/patch.hpp"

namespace galign {

using OrbitDegreeVector = std::vector<std::uint64_t>;

/// 15 orbits for graphlets up to 4 nodes, 73 up to 5.
int odv_orbit_count(int max_size);

/// Global orbit number of canonical position `pos` in graphlet `id`
/// (2 <= id.k <= max_size). Orbits are numbered by graphlet size, then edge
/// count, then maximum degree, then id; within a graphlet by degree, then
/// first position. For sizes 2..4 this is the classic 0..14 numbering.
int odv_orbit(CanonicalGraphletId id, int pos);

/// Counts, for every node, the connected induced subgraphs of 2..max_size
/// nodes it belongs to, split by the orbit it occupies.
std::vector<OrbitDegreeVector> compute_odv(const Graph& g, int max_size = 4);

/// 1 - sum_o w_o |log(u_o+1) - log(v_o+1)| / log(max(u_o,v_o)+2) / sum_o w_o.
double odv_similarity(std::span<const std::uint64_t> u, std::span<const std::uint64_t> v,
                      std::span<const double> weights);

std::vector<double> uniform_odv_weights(int orbit_count);
/// Whitespace-separated positive weights, one per orbit.
std::vector<double> load_odv_weights(const std::filesystem::path& path, int orbit_count);

/// ODVs of both graphs plus the weights used to compare them.
struct OdvTables {
  std::vector<OrbitDegreeVector> first;
  std::vector<OrbitDegreeVector> second;
  std::vector<double> weights;
};

double alignment_mean_odv(const SeedAlignment& seed, const OdvTables& odv);

/// "label c0 c1 ..." per node.
void write_odv(const Graph& g, std::span<const OrbitDegreeVector> odv, std::ostream& out);
void save_odv(const Graph& g, std::span<const OrbitDegreeVector> odv,
              const std::filesystem::path& path);
/// Nodes without a line get the all-zero vector.
std::vector<OrbitDegreeVector> read_odv(const Graph& g, std::istream& in);
std::vector<OrbitDegreeVector> load_odv(const Graph& g, const std::filesystem::path& path);

}  // namespace galign

#endif  // GALIGN_ODV_HPP
