#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "planar_reach/decomposition.hpp"
#include "planar_reach/monge.hpp"

namespace planar_reach {

struct SwitchOnConfig {
  monge::PredKind pred = monge::PredKind::OrderedSet;
  int block_cap = 8;
  bool materialize_can = true;
  bool check_caps = true;
  bool maintain_ex = true;      // Ex and R layers (per-edge endpoint answers)
  bool minus_one_edge = false;  // also track reachability in on-subgraph minus each edge
  bool keep_root_in = false;    // maintain the root's In closure (pair queries need it)
  bool validate_input = true;   // reject non-simple decompositions
};

struct SwitchOnCounters {
  long long queue_insertions = 0;
  long long leaf_recomputes = 0;
  long long matrix_flips = 0;
};

// The switch-on reachability structure over a simple recursive
// decomposition: per leaf the local closures In*(L) and R(L), per piece the
// boundary matrices In(H) and Ex(H), wired along the dependency list and
// driven by a position-keyed queue.
class SwitchOnReach {
 public:
  explicit SwitchOnReach(SimpleDecomposition sd, SwitchOnConfig cfg = {});

  const SimpleDecomposition& decomposition() const { return sd_; }
  const SwitchOnConfig& config() const { return cfg_; }
  const SwitchOnCounters& counters() const { return counters_; }

  int original_edge_count() const { return sd_.mapping.input_m; }
  bool is_on(EId original_edge) const;

  // switches an input-graph edge on; returns the input-graph edges whose
  // endpoint reachability (head -> tail over on-edges) newly became true
  std::vector<EId> switch_on(EId original_edge);

  bool query_edge_reachable(EId original_edge) const;
  // tail -> head in the on-subgraph minus the edge itself (minus_one_edge)
  bool query_edge_reachable_minus_self(EId original_edge) const;

  // expansion-graph surfaces for the pair-query layer
  const monge::MergeClosure* in_closure(int piece) const {
    return in_closure_[piece] ? in_closure_[piece].get() : nullptr;
  }
  const monge::BitMatrix& leaf_in_star(int piece) const { return in_star_[leaf_index_[piece]]; }
  const std::vector<VId>& leaf_vertices(int piece) const {
    return leaf_verts_[leaf_index_[piece]];
  }
  bool expansion_edge_flag(EId expansion_edge) const { return flags_[expansion_edge]; }

 private:
  struct Node {
    enum class Type : std::uint8_t { InStar, In, Ex, R } type;
    int piece = -1;
    int position = -1;
    bool queued = false;
    // dependents: node index + which closure side the delta feeds (0 for
    // recompute-style dependents)
    std::vector<std::pair<int, int>> dependents;
    std::vector<EId> pending_edges;                       // InStar
    std::array<std::vector<std::pair<VId, VId>>, 2> pending;  // In / Ex sides
    bool dirty = false;                                   // R
  };

  SimpleDecomposition sd_;
  SwitchOnConfig cfg_;
  SwitchOnCounters counters_;

  std::vector<std::uint8_t> on_;  // per expansion edge
  std::vector<EId> inv_image_;    // expansion edge -> input edge (-1)
  std::vector<std::uint8_t> flags_;   // per expansion edge: head->tail on-path
  std::vector<std::uint8_t> flags2_;  // per expansion edge: tail->head in on minus self

  std::vector<int> leaf_index_;   // piece -> dense leaf index (-1)
  std::vector<std::vector<VId>> leaf_verts_;           // sorted
  std::vector<std::vector<std::pair<int, int>>> leaf_edge_ends_;  // local endpoints
  std::vector<std::vector<EId>> leaf_edges_;
  std::vector<monge::BitMatrix> in_star_;  // per leaf, over leaf_verts
  std::vector<monge::BitMatrix> ex_leaf_;  // per leaf, over the piece boundary
  std::vector<std::vector<VId>> leaf_bnd_;  // boundary in leaf_verts order

  std::vector<std::unique_ptr<monge::MergeClosure>> in_closure_;  // per piece
  std::vector<std::unique_ptr<monge::MergeClosure>> ex_closure_;
  std::vector<monge::BitMatrix> in_leaf_;  // In(L) for leaves, over boundary order

  std::vector<Node> nodes_;
  std::vector<int> node_of_instar_, node_of_in_, node_of_ex_, node_of_r_;  // per piece (-1)
  std::vector<int> heap_;
  std::vector<EId> flips_out_;  // input edges collected during a cascade

  void push_node(int idx);
  int pop_node();
  void drain();
  void switch_on_expansion_edge(EId e);
  void process(Node& node);
  void recompute_leaf(int piece);
  std::vector<std::pair<VId, VId>> boundary_pairs(int piece,
                                                  const std::vector<std::pair<VId, VId>>& delta,
                                                  const std::vector<std::uint8_t>& in_bnd);
  std::vector<std::vector<std::uint8_t>> bnd_member_;  // piece -> boundary membership stamp
};

}  // namespace planar_reach
