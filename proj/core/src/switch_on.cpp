#include "planar_reach/switch_on.hpp"

#include <algorithm>

namespace planar_reach {

using monge::BitMatrix;
using monge::CurveOrder;
using monge::MergeClosure;
using monge::MergeConfig;

namespace {

// transitive closure of a small adjacency matrix, in place
void close(BitMatrix& m) {
  int n = m.rows();
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (i != k && m.get(i, k))
        for (int j = 0; j < n; ++j)
          if (m.get(k, j) && !m.get(i, j)) m.set(i, j);
}

}  // namespace

SwitchOnReach::SwitchOnReach(SimpleDecomposition sd, SwitchOnConfig cfg)
    : sd_(std::move(sd)), cfg_(cfg) {
  const DecompTree& t = sd_.tree;
  const PlaneMultigraph& gg = *t.graph;

  if (cfg_.validate_input) {
    auto report = validate_simple(t);
    require(report.empty(), Err::NotSimple,
            report.empty() ? "" : report.front().clause);
  }

  on_.assign(gg.edge_slots(), 0);
  flags_.assign(gg.edge_slots(), 0);
  flags2_.assign(gg.edge_slots(), 0);
  inv_image_.assign(gg.edge_slots(), -1);
  for (EId e = 0; e < sd_.mapping.input_m; ++e) inv_image_[sd_.mapping.edge_image[e]] = e;

  int pieces = static_cast<int>(t.pieces.size());
  leaf_index_.assign(pieces, -1);
  in_closure_.resize(pieces);
  ex_closure_.resize(pieces);
  bnd_member_.resize(pieces);

  // boundary membership stamps (over expansion vertices)
  for (int pi = 0; pi < pieces; ++pi) {
    bnd_member_[pi].assign(0, 0);
  }

  // leaves: local vertex spaces and matrices
  int nleaves = static_cast<int>(t.leaves.size());
  leaf_verts_.resize(nleaves);
  leaf_edge_ends_.resize(nleaves);
  leaf_edges_.resize(nleaves);
  in_star_.resize(nleaves);
  ex_leaf_.resize(nleaves);
  leaf_bnd_.resize(nleaves);
  in_leaf_.resize(nleaves);
  for (int li = 0; li < nleaves; ++li) {
    int pi = t.leaves[li];
    leaf_index_[pi] = li;
    const Piece& p = t.pieces[pi];
    auto& verts = leaf_verts_[li];
    for (EId e : p.edges) {
      verts.push_back(gg.tail(e));
      verts.push_back(gg.head(e));
    }
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    auto local = [&](VId v) {
      return static_cast<int>(std::lower_bound(verts.begin(), verts.end(), v) - verts.begin());
    };
    leaf_edges_[li] = p.edges;
    for (EId e : p.edges) leaf_edge_ends_[li].push_back({local(gg.tail(e)), local(gg.head(e))});
    in_star_[li] = BitMatrix(static_cast<int>(verts.size()), static_cast<int>(verts.size()));
    leaf_bnd_[li] = p.boundary;
    ex_leaf_[li] =
        BitMatrix(static_cast<int>(p.boundary.size()), static_cast<int>(p.boundary.size()));
    in_leaf_[li] =
        BitMatrix(static_cast<int>(p.boundary.size()), static_cast<int>(p.boundary.size()));
  }

  // piece boundary curve orders (boundary grouped by hole, cyclic order)
  auto piece_order = [&](int pi) {
    CurveOrder o;
    std::vector<VId> ids;
    for (const auto& grp : t.pieces[pi].boundary_by_hole) {
      o.curve_sizes.push_back(static_cast<int>(grp.size()));
      ids.insert(ids.end(), grp.begin(), grp.end());
    }
    return std::pair<CurveOrder, std::vector<VId>>{o, ids};
  };
  auto shared_ids = [](std::vector<VId> a, std::vector<VId> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<VId> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
  };

  MergeConfig mcfg;
  mcfg.pred = cfg_.pred;
  mcfg.block_cap = cfg_.block_cap;
  mcfg.materialize_can = cfg_.materialize_can;
  mcfg.check_caps = cfg_.check_caps;

  // dependency nodes, in dependency-list order: In* (leaves), In (pieces,
  // deeper first), Ex (pieces, shallower first), R (leaves)
  node_of_instar_.assign(pieces, -1);
  node_of_in_.assign(pieces, -1);
  node_of_ex_.assign(pieces, -1);
  node_of_r_.assign(pieces, -1);

  auto add_node = [&](Node::Type type, int piece) {
    int idx = static_cast<int>(nodes_.size());
    Node n;
    n.type = type;
    n.piece = piece;
    n.position = idx;
    nodes_.push_back(std::move(n));
    return idx;
  };

  for (int li = 0; li < nleaves; ++li)
    node_of_instar_[t.leaves[li]] = add_node(Node::Type::InStar, t.leaves[li]);

  std::vector<int> by_depth(pieces);
  for (int pi = 0; pi < pieces; ++pi) by_depth[pi] = pi;
  std::stable_sort(by_depth.begin(), by_depth.end(), [&](int a, int b) {
    return t.pieces[a].level > t.pieces[b].level;  // increasing inclusion
  });
  for (int pi : by_depth) {
    if (pi == 0 && !cfg_.keep_root_in) continue;
    if (t.pieces[pi].is_leaf()) {
      node_of_in_[pi] = add_node(Node::Type::In, pi);
    } else {
      node_of_in_[pi] = add_node(Node::Type::In, pi);
      auto [o1, ids1] = piece_order(t.pieces[pi].child[0]);
      auto [o2, ids2] = piece_order(t.pieces[pi].child[1]);
      in_closure_[pi] = std::make_unique<MergeClosure>(o1, ids1, o2, ids2,
                                                       shared_ids(ids1, ids2), mcfg);
    }
  }
  if (cfg_.maintain_ex) {
    std::vector<int> by_depth_asc(by_depth.rbegin(), by_depth.rend());
    for (int pi : by_depth_asc) {
      if (pi == 0) continue;  // Ex(root) is the empty matrix
      node_of_ex_[pi] = add_node(Node::Type::Ex, pi);
      const Piece& p = t.pieces[pi];
      const Piece& parent = t.pieces[p.parent];
      int sib = parent.child[0] == pi ? parent.child[1] : parent.child[0];
      std::pair<CurveOrder, std::vector<VId>> s1;  // Ex(parent) over bnd(parent)
      if (p.parent != 0) s1 = piece_order(p.parent);
      auto s2 = piece_order(sib);
      ex_closure_[pi] = std::make_unique<MergeClosure>(
          s1.first, s1.second, s2.first, s2.second, shared_ids(s1.second, s2.second), mcfg);
    }
    for (int li = 0; li < nleaves; ++li)
      node_of_r_[t.leaves[li]] = add_node(Node::Type::R, t.leaves[li]);
  }

  // dependency fan-out (at most two dependents per matrix)
  for (int pi = 0; pi < pieces; ++pi) {
    const Piece& p = t.pieces[pi];
    if (p.is_leaf()) {
      if (node_of_in_[pi] >= 0)
        nodes_[node_of_instar_[pi]].dependents.push_back({node_of_in_[pi], 0});
      if (node_of_r_[pi] >= 0)
        nodes_[node_of_instar_[pi]].dependents.push_back({node_of_r_[pi], 0});
    }
    if (pi != 0 && node_of_in_[pi] >= 0) {
      const Piece& parent = t.pieces[p.parent];
      int child_slot = parent.child[0] == pi ? 1 : 2;
      int sib = parent.child[0] == pi ? parent.child[1] : parent.child[0];
      if (node_of_in_[p.parent] >= 0 && in_closure_[p.parent])
        nodes_[node_of_in_[pi]].dependents.push_back({node_of_in_[p.parent], child_slot});
      if (node_of_ex_[sib] >= 0)
        nodes_[node_of_in_[pi]].dependents.push_back({node_of_ex_[sib], 2});
    }
    if (node_of_ex_[pi] >= 0) {
      if (!p.is_leaf()) {
        for (int c : p.child)
          if (node_of_ex_[c] >= 0) nodes_[node_of_ex_[pi]].dependents.push_back({node_of_ex_[c], 1});
      } else if (node_of_r_[pi] >= 0) {
        nodes_[node_of_ex_[pi]].dependents.push_back({node_of_r_[pi], 0});
      }
    }
  }

  // boundary membership bitmaps, over a dense map per piece
  for (int pi = 0; pi < pieces; ++pi) {
    const auto& bnd = t.pieces[pi].boundary;
    bnd_member_[pi].assign(bnd.size(), 1);  // placeholder; membership via binary search
  }

  // initialization batch: all E0 edges of the composed mapping switched on
  for (EId e = 0; e < static_cast<EId>(sd_.mapping.edge_class.size()); ++e)
    if (sd_.mapping.graph.edge_alive(e) && sd_.mapping.edge_class[e] == EdgeClass::E0) {
      on_[e] = 1;
      int li = leaf_index_[t.leaf_of_edge[e]];
      (void)li;
      int node = node_of_instar_[t.leaf_of_edge[e]];
      nodes_[node].pending_edges.push_back(e);
      push_node(node);
    }
  drain();
  flips_out_.clear();
}

bool SwitchOnReach::is_on(EId original_edge) const {
  require(original_edge >= 0 && original_edge < sd_.mapping.input_m, Err::UnknownEdge,
          "edge id out of range");
  return on_[sd_.mapping.edge_image[original_edge]];
}

bool SwitchOnReach::query_edge_reachable(EId original_edge) const {
  require(original_edge >= 0 && original_edge < sd_.mapping.input_m, Err::UnknownEdge,
          "edge id out of range");
  return flags_[sd_.mapping.edge_image[original_edge]];
}

bool SwitchOnReach::query_edge_reachable_minus_self(EId original_edge) const {
  require(cfg_.minus_one_edge, Err::PreconditionViolated,
          "structure built without minus-self tracking");
  require(original_edge >= 0 && original_edge < sd_.mapping.input_m, Err::UnknownEdge,
          "edge id out of range");
  return flags2_[sd_.mapping.edge_image[original_edge]];
}

std::vector<EId> SwitchOnReach::switch_on(EId original_edge) {
  require(original_edge >= 0 && original_edge < sd_.mapping.input_m, Err::UnknownEdge,
          "edge id out of range");
  EId e = sd_.mapping.edge_image[original_edge];
  require(!on_[e], Err::AlreadyOn, "edge already on");
  flips_out_.clear();
  switch_on_expansion_edge(e);
  std::sort(flips_out_.begin(), flips_out_.end());
  flips_out_.erase(std::unique(flips_out_.begin(), flips_out_.end()), flips_out_.end());
  return flips_out_;
}

void SwitchOnReach::switch_on_expansion_edge(EId e) {
  on_[e] = 1;
  int leaf_piece = sd_.tree.leaf_of_edge[e];
  int node = node_of_instar_[leaf_piece];
  nodes_[node].pending_edges.push_back(e);
  push_node(node);
  drain();
}

void SwitchOnReach::push_node(int idx) {
  if (nodes_[idx].queued) return;
  nodes_[idx].queued = true;
  counters_.queue_insertions++;
  heap_.push_back(idx);
  std::push_heap(heap_.begin(), heap_.end(), std::greater<int>());
}

int SwitchOnReach::pop_node() {
  std::pop_heap(heap_.begin(), heap_.end(), std::greater<int>());
  int idx = heap_.back();
  heap_.pop_back();
  nodes_[idx].queued = false;
  return idx;
}

void SwitchOnReach::drain() {
  while (!heap_.empty()) {
    int idx = pop_node();
    process(nodes_[idx]);
  }
}

void SwitchOnReach::process(Node& node) {
  const DecompTree& t = sd_.tree;
  int pi = node.piece;
  auto fan_out = [&](const std::vector<std::pair<VId, VId>>& delta) {
    if (delta.empty()) return;
    for (auto [dep, side] : node.dependents) {
      Node& d = nodes_[dep];
      if (d.type == Node::Type::R) {
        d.dirty = true;
      } else {
        auto& buf = d.pending[side - 1];
        buf.insert(buf.end(), delta.begin(), delta.end());
      }
      push_node(dep);
    }
  };

  switch (node.type) {
    case Node::Type::InStar: {
      if (node.pending_edges.empty()) return;
      node.pending_edges.clear();
      recompute_leaf(pi);
      // dependents consume the In(L) projection / R recompute directly
      for (auto [dep, side] : node.dependents) {
        (void)side;
        push_node(dep);
        if (nodes_[dep].type == Node::Type::R) nodes_[dep].dirty = true;
      }
      return;
    }
    case Node::Type::In: {
      const Piece& p = t.pieces[pi];
      std::vector<std::pair<VId, VId>> delta;
      if (p.is_leaf()) {
        // In(L) is the boundary submatrix of In*(L)
        int li = leaf_index_[pi];
        const auto& bnd = leaf_bnd_[li];
        const auto& verts = leaf_verts_[li];
        auto local = [&](VId v) {
          return static_cast<int>(std::lower_bound(verts.begin(), verts.end(), v) -
                                  verts.begin());
        };
        for (std::size_t a = 0; a < bnd.size(); ++a)
          for (std::size_t b = 0; b < bnd.size(); ++b) {
            if (a == b) continue;
            if (!in_leaf_[li].get(static_cast<int>(a), static_cast<int>(b)) &&
                in_star_[li].get(local(bnd[a]), local(bnd[b]))) {
              in_leaf_[li].set(static_cast<int>(a), static_cast<int>(b));
              delta.push_back({bnd[a], bnd[b]});
              counters_.matrix_flips++;
            }
          }
      } else {
        MergeClosure& mc = *in_closure_[pi];
        std::vector<std::pair<VId, VId>> flips;
        for (int side = 0; side < 2; ++side) {
          if (node.pending[side].empty()) continue;
          auto batch = std::move(node.pending[side]);
          node.pending[side].clear();
          auto out = mc.update(side + 1, batch);
          flips.insert(flips.end(), out.begin(), out.end());
        }
        counters_.matrix_flips += static_cast<long long>(flips.size());
        // restrict to bnd(H) x bnd(H)
        const auto& bnd = p.boundary;
        for (auto [a, b] : flips)
          if (std::binary_search(bnd.begin(), bnd.end(), a) &&
              std::binary_search(bnd.begin(), bnd.end(), b))
            delta.push_back({a, b});
      }
      fan_out(delta);
      return;
    }
    case Node::Type::Ex: {
      const Piece& p = t.pieces[pi];
      MergeClosure& mc = *ex_closure_[pi];
      std::vector<std::pair<VId, VId>> flips;
      for (int side = 0; side < 2; ++side) {
        if (node.pending[side].empty()) continue;
        auto batch = std::move(node.pending[side]);
        node.pending[side].clear();
        auto out = mc.update(side + 1, batch);
        flips.insert(flips.end(), out.begin(), out.end());
      }
      counters_.matrix_flips += static_cast<long long>(flips.size());
      std::vector<std::pair<VId, VId>> delta;
      const auto& bnd = p.boundary;
      for (auto [a, b] : flips)
        if (std::binary_search(bnd.begin(), bnd.end(), a) &&
            std::binary_search(bnd.begin(), bnd.end(), b))
          delta.push_back({a, b});
      if (p.is_leaf() && !delta.empty()) {
        // fold into the stored Ex(L)
        int li = leaf_index_[pi];
        auto pos = [&](VId v) {
          return static_cast<int>(std::lower_bound(bnd.begin(), bnd.end(), v) - bnd.begin());
        };
        for (auto [a, b] : delta) ex_leaf_[li].set(pos(a), pos(b));
      }
      fan_out(delta);
      return;
    }
    case Node::Type::R: {
      if (!node.dirty) return;
      node.dirty = false;
      int li = leaf_index_[pi];
      counters_.leaf_recomputes++;
      const auto& verts = leaf_verts_[li];
      const auto& bnd = leaf_bnd_[li];
      int n = static_cast<int>(verts.size());
      auto local = [&](VId v) {
        return static_cast<int>(std::lower_bound(verts.begin(), verts.end(), v) - verts.begin());
      };
      // R(L) = closure of G(In*(L)) + G(Ex(L))
      BitMatrix r(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (in_star_[li].get(i, j)) r.set(i, j);
      for (std::size_t a = 0; a < bnd.size(); ++a)
        for (std::size_t b = 0; b < bnd.size(); ++b)
          if (ex_leaf_[li].get(static_cast<int>(a), static_cast<int>(b)))
            r.set(local(bnd[a]), local(bnd[b]));
      close(r);
      for (std::size_t k = 0; k < leaf_edges_[li].size(); ++k) {
        EId e = leaf_edges_[li][k];
        auto [lt, lh] = leaf_edge_ends_[li][k];
        if (!flags_[e] && (lt == lh || r.get(lh, lt))) {
          flags_[e] = 1;
          if (inv_image_[e] >= 0) flips_out_.push_back(inv_image_[e]);
        }
      }
      if (cfg_.minus_one_edge) {
        // per edge: closure of (on-subgraph of L minus the edge) + Ex(L)
        for (std::size_t k = 0; k < leaf_edges_[li].size(); ++k) {
          EId e = leaf_edges_[li][k];
          if (flags2_[e]) continue;
          BitMatrix m(n, n);
          for (std::size_t k2 = 0; k2 < leaf_edges_[li].size(); ++k2) {
            if (k2 == k || !on_[leaf_edges_[li][k2]]) continue;
            auto [a, b] = leaf_edge_ends_[li][k2];
            if (a != b) m.set(a, b);
          }
          close(m);
          BitMatrix full(n, n);
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              if (m.get(i, j)) full.set(i, j);
          for (std::size_t a = 0; a < bnd.size(); ++a)
            for (std::size_t b = 0; b < bnd.size(); ++b)
              if (ex_leaf_[li].get(static_cast<int>(a), static_cast<int>(b)))
                full.set(local(bnd[a]), local(bnd[b]));
          close(full);
          auto [lt, lh] = leaf_edge_ends_[li][k];
          if (lt != lh && full.get(lt, lh)) flags2_[e] = 1;
          if (lt == lh) flags2_[e] = 1;  // loops: trivial empty path
        }
      }
      return;
    }
  }
}

void SwitchOnReach::recompute_leaf(int piece) {
  int li = leaf_index_[piece];
  const auto& verts = leaf_verts_[li];
  int n = static_cast<int>(verts.size());
  BitMatrix m(n, n);
  for (std::size_t k = 0; k < leaf_edges_[li].size(); ++k) {
    if (!on_[leaf_edges_[li][k]]) continue;
    auto [a, b] = leaf_edge_ends_[li][k];
    if (a != b) m.set(a, b);
  }
  close(m);
  // monotone merge into the stored In*
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (m.get(i, j) && !in_star_[li].get(i, j)) {
        in_star_[li].set(i, j);
        counters_.matrix_flips++;
      }
}

std::vector<std::pair<VId, VId>> SwitchOnReach::boundary_pairs(
    int piece, const std::vector<std::pair<VId, VId>>& delta,
    const std::vector<std::uint8_t>& in_bnd) {
  (void)piece;
  (void)in_bnd;
  return delta;
}

}  // namespace planar_reach
