#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "planar_reach/common.hpp"

namespace planar_reach {

// Embedded directed planar multigraph given by a rotation system: every edge
// contributes a dart at each endpoint, and each vertex stores the clockwise
// cyclic order of its incident darts. Parallel edges and self-loops are legal;
// a loop's two darts both appear in its vertex ring. Derived-graph builds
// (removal, contraction, dual) keep edge slot ids stable; removed slots stay
// dead so ids never shift.
class PlaneMultigraph {
 public:
  struct Edge {
    VId tail = -1;
    VId head = -1;
  };

  PlaneMultigraph() = default;

  // Validates the rotation system: every alive dart in exactly one ring, at
  // the endpoint the edge list dictates, and each component satisfies the
  // Euler identity. Throws MalformedRing / NonPlanarRotation. Slots with
  // alive[e] == 0 are dead on arrival (their darts must not appear).
  static PlaneMultigraph build_from_rotation(int n, std::vector<Edge> edges,
                                             std::vector<std::vector<Dart>> rings,
                                             std::vector<std::uint8_t> alive = {});

  int vertex_count() const { return n_; }
  int edge_slots() const { return static_cast<int>(edges_.size()); }
  int edge_count() const { return alive_count_; }
  bool edge_alive(EId e) const { return e >= 0 && e < edge_slots() && alive_[e]; }
  const Edge& edge(EId e) const { return edges_[e]; }
  VId tail(EId e) const { return edges_[e].tail; }
  VId head(EId e) const { return edges_[e].head; }
  VId dart_vertex(Dart d) const { return is_head_side(d) ? edges_[edge_of(d)].head : edges_[edge_of(d)].tail; }
  VId dart_target(Dart d) const { return is_head_side(d) ? edges_[edge_of(d)].tail : edges_[edge_of(d)].head; }

  const std::vector<Dart>& ring(VId v) const { return rings_[v]; }
  int degree(VId v) const { return static_cast<int>(rings_[v].size()); }

  // Clockwise successor / predecessor around the dart's vertex.
  Dart rot_next(Dart d) const;
  Dart rot_prev(Dart d) const;
  // Face permutation: next dart along the face walk (face kept on the left).
  Dart face_next(Dart d) const { return rot_next(twin(d)); }

  std::vector<EId> alive_edges() const;
  std::vector<Dart> alive_darts() const;

  // Connected components over alive edges (isolated vertices are their own
  // components). Returns labels in [0, count).
  std::pair<std::vector<int>, int> components() const;
  bool connected() const;

  // Persistent-by-copy edit helpers used by the duality checks.
  PlaneMultigraph remove_edge_copy(EId e) const;
  PlaneMultigraph contract_edge_copy(EId e) const;  // loop contraction = deletion

  // Re-runs the construction validation (Euler identity per component).
  void validate() const;

 private:
  friend class FaceStructure;
  int n_ = 0;
  int alive_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::uint8_t> alive_;
  std::vector<std::vector<Dart>> rings_;
  std::vector<std::pair<VId, std::int32_t>> dart_pos_;  // dart -> (vertex, ring index)

  void reindex_darts();
};

using FaceId = std::int32_t;

// Face walks of a PlaneMultigraph: the orbits of the face permutation.
class FaceStructure {
 public:
  explicit FaceStructure(const PlaneMultigraph& g);

  int face_count() const { return static_cast<int>(walks_.size()); }
  FaceId face_of(Dart d) const { return face_of_[d]; }
  const std::vector<Dart>& walk(FaceId f) const { return walks_[f]; }
  // A face is simple iff its walk visits no vertex twice.
  bool simple(FaceId f) const { return simple_[f]; }
  // Convention: per component, the face containing the smallest alive dart.
  bool unbounded(FaceId f) const { return unbounded_[f]; }

  FaceId left_face(EId e) const { return face_of_[tail_dart(e)]; }
  FaceId right_face(EId e) const { return face_of_[head_dart(e)]; }

 private:
  std::vector<FaceId> face_of_;
  std::vector<std::vector<Dart>> walks_;
  std::vector<std::uint8_t> simple_;
  std::vector<std::uint8_t> unbounded_;
};

// Dual graph: one vertex per face, dual edge e* directed from the face left
// of e to the face right of e, sharing edge slot ids with the primal.
struct DualGraph {
  PlaneMultigraph graph;
  // e <-> e* is the identity on edge slots; kept explicit for readability.
  FaceId primal_left(EId e) const { return graph.tail(e); }
  FaceId primal_right(EId e) const { return graph.head(e); }
};

DualGraph dual(const PlaneMultigraph& g);

// Static SCC classifier. Label per alive edge slot: true = intra-SCC
// (a head->tail path exists), false = inter-SCC. Dead slots are false.
std::vector<std::uint8_t> classify_edges_scc(const PlaneMultigraph& g);

// Asserts dual(G - e) and contract(dual(G), e*) are isomorphic as abstract
// multigraphs under the retained edge bijection. Precondition: removal of e
// keeps g connected.
bool check_remove_contract_duality(const PlaneMultigraph& g, EId e);

}  // namespace planar_reach
