#pragma once

#include <string>
#include <vector>

#include "planar_reach/plane_graph.hpp"

namespace planar_reach {

enum class EdgeClass : std::uint8_t { E0, E1, Filler };

// One preprocessing step (or a composition of steps): an output plane graph
// together with the vertex/edge correspondences back to the step's input.
// E0 edges realize the input's vertices as strongly connected cycles, E1
// carries the input's edges (p is a bijection onto E1), filler edges are
// embedding padding and are never switched on.
struct AugmentedGraph {
  PlaneMultigraph graph;            // output G'
  std::vector<EdgeClass> edge_class;  // per edge slot of graph
  std::vector<VId> orig;            // V(G') -> V(input)
  std::vector<std::vector<VId>> vertex_cycle;  // S: V(input) -> vertices of its cycle
  std::vector<EId> edge_image;      // p: E(input) -> E1 edge of graph
  int degree_bound = 0;             // max degree actually achieved
  std::vector<std::string> steps;   // applied step names, in order
  int input_n = 0;
  int input_m = 0;
  std::vector<PlaneMultigraph::Edge> input_edges;  // endpoints of the input's edges

  std::vector<EId> e0() const;
  std::vector<EId> e1() const;
};

// Identity step (used for composition tests).
AugmentedGraph identity_step(const PlaneMultigraph& g);

// Adds a spanning set of filler edges between component representatives on
// their unbounded faces, left to right over the component list.
AugmentedGraph connect(const PlaneMultigraph& g);

// Expands every vertex of ring length k into a clockwise directed 3k-cycle,
// maps each input edge to an E1 edge between the cycles' attachment points,
// and triangulates every face with filler chords so that no face occurrence
// of a vertex gains more than two of them. Output: triangulated, loop-free,
// degree <= 12 (asserted).
AugmentedGraph expand_and_triangulate(const PlaneMultigraph& g);

// step2 applied after step1; mappings composed.
AugmentedGraph compose(const AugmentedGraph& step1, const AugmentedGraph& step2);

// connect + expand_and_triangulate, composed.
AugmentedGraph augment_pipeline(const PlaneMultigraph& g);

// Checks the correspondence invariants (disjoint E0/E1, p a bijection onto
// E1, cycles strongly connected and exactly the SCCs of (V', E0), edge
// images between matching cycles). Throws on violation; for tests and
// post-construction sanity.
void validate_augmented(const AugmentedGraph& a);

}  // namespace planar_reach
