#pragma once

#include <array>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "planar_reach/augment.hpp"
#include "planar_reach/plane_graph.hpp"

namespace planar_reach {

struct DecompConfig {
  int leaf_threshold = 12;  // a piece with at most this many edges is a leaf
  int hole_cap = 4;         // max holes per piece
};

// One part of a separator: the curve segment from cycle vertex `from` to
// `to`, either along an edge of the piece or jumping across a hole.
struct SeparatorPart {
  VId from = -1;
  VId to = -1;
  EId edge = -1;  // edge-part: the edge followed (else -1)
  int hole = -1;  // hole-part: hole index within the split piece (else -1)
};

struct SeparatorRecord {
  std::vector<VId> cycle;            // v_1..v_k, distinct
  std::vector<SeparatorPart> parts;  // part i runs cycle[i] -> cycle[(i+1)%k]
  long long inside_weight = 0, outside_weight = 0, cycle_weight = 0, total_weight = 0;
};

struct Piece {
  int id = -1;
  int parent = -1;
  std::array<int, 2> child{{-1, -1}};
  int level = 0;
  int leaf_lo = 0, leaf_hi = 0;  // leaf range [lo, hi) into DecompTree::leaves
  int edge_count = 0;       // edges of this piece (in the decomposed graph)
  int base_edge_count = 0;  // edges of the underlying separator-level piece
  std::vector<EId> edges;     // explicit only for leaves
  std::vector<VId> boundary;  // sorted
  int hole_count = 0;
  // boundary grouped by hole, each group in cyclic order along its hole walk
  std::vector<std::vector<VId>> boundary_by_hole;
  SeparatorRecord separator;  // non-leaves only

  bool is_leaf() const { return child[0] < 0; }
};

struct LevelStats {
  int pieces = 0;
  int max_boundary = 0;
  long long sum_boundary_sq = 0;
  long long sum_edges = 0;
};

class DecompTree {
 public:
  std::shared_ptr<const PlaneMultigraph> graph;
  std::vector<Piece> pieces;      // pieces[0] is the root
  std::vector<int> leaves;        // leaf piece ids, in dfs order
  std::vector<int> leaf_of_edge;  // edge slot -> a leaf containing it (-1 for dead slots)
  int levels = 0;
  std::vector<LevelStats> level_stats;
  double decay_c = 1.0;  // measured: max c with |bnd| <= 8*sqrt(n)/c^level everywhere

  // Edge set of a piece (union over its leaf range; deduplicated).
  std::vector<EId> piece_edges(int id) const;
  // Vertex set of a piece (endpoint union), sorted.
  std::vector<VId> piece_vertices(int id) const;
  long long sum_boundary_sq() const;
};

// Recursive decomposition of a triangulated, loop-free, degree-bounded
// connected plane graph. Siblings may share separator edge-parts.
DecompTree build_decomposition(std::shared_ptr<const PlaneMultigraph> g,
                               const DecompConfig& cfg = {});

// Full pipeline: augments the input (connect + expand/triangulate), builds
// the recursive decomposition of the augmented graph, and re-expands every
// vertex into a circle so that the resulting tree is simple: hole walks are
// simple and pairwise vertex-disjoint and sibling edge sets are disjoint.
// `mapping` composes all correspondences back to the input graph.
struct SimpleDecomposition {
  AugmentedGraph mapping;
  DecompTree tree;
};
SimpleDecomposition build_simple_decomposition(const PlaneMultigraph& g,
                                               const DecompConfig& cfg = {});

struct SimpleViolation {
  int piece = -1;
  std::string clause;
};
// Empty report iff the tree is a simple recursive decomposition.
std::vector<SimpleViolation> validate_simple(const DecompTree& t);

// Cycle separator of a standalone triangulated connected piece (no holes):
// 2/3-balanced fundamental cycle on a BFS tree. Throws TooSmall when the
// piece has at most `leaf_threshold` edges.
struct CycleSeparatorResult {
  SeparatorRecord record;
  // per edge slot: 0 = inside, 1 = outside, 2 = on the cycle
  std::vector<std::uint8_t> edge_side;
};
CycleSeparatorResult simple_cycle_separator(const PlaneMultigraph& g,
                                            std::span<const long long> vertex_weight = {},
                                            int leaf_threshold = 12);

}  // namespace planar_reach
