#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "planar_reach/decomposition.hpp"
#include "planar_reach/oracle.hpp"

using namespace planar_reach;

namespace {

using Edges = std::vector<PlaneMultigraph::Edge>;
using Rings = std::vector<std::vector<Dart>>;

PlaneMultigraph triangle() {
  return PlaneMultigraph::build_from_rotation(3, Edges{{0, 1}, {1, 2}, {2, 0}},
                                              Rings{{5, 0}, {1, 2}, {3, 4}});
}

// k x k grid of vertices, all edges east/south, standard embedding
PlaneMultigraph grid(int k) {
  Edges edges;
  Rings rings(k * k);
  auto id = [&](int r, int c) { return r * k + c; };
  std::vector<std::vector<std::pair<Dart, int>>> pending(k * k);
  // bearing: 0=N,1=E,2=S,3=W for clockwise sorting
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) {
      if (c + 1 < k) {
        EId e = static_cast<EId>(edges.size());
        edges.push_back({id(r, c), id(r, c + 1)});
        pending[id(r, c)].push_back({tail_dart(e), 1});
        pending[id(r, c + 1)].push_back({head_dart(e), 3});
      }
      if (r + 1 < k) {
        EId e = static_cast<EId>(edges.size());
        edges.push_back({id(r, c), id(r + 1, c)});
        pending[id(r, c)].push_back({tail_dart(e), 2});
        pending[id(r + 1, c)].push_back({head_dart(e), 0});
      }
    }
  for (int v = 0; v < k * k; ++v) {
    std::sort(pending[v].begin(), pending[v].end(),
              [](auto& a, auto& b) { return a.second < b.second; });
    for (auto& [d, bearing] : pending[v]) rings[v].push_back(d);
  }
  return PlaneMultigraph::build_from_rotation(k * k, std::move(edges), std::move(rings));
}

PlaneMultigraph random_plane_connected(int n, Rng& rng) {
  Edges edges{{0, 1}};
  Rings rings(n);
  rings[0] = {0};
  rings[1] = {1};
  int used = 2;
  int extra = n + static_cast<int>(rng.below(2 * n));
  auto build = [&](int verts) {
    Rings sub(rings.begin(), rings.begin() + verts);
    return PlaneMultigraph::build_from_rotation(verts, edges, std::move(sub));
  };
  for (int step = 0; step < extra; ++step) {
    PlaneMultigraph g = build(used);
    FaceStructure faces(g);
    auto darts = g.alive_darts();
    Dart d = darts[rng.below(darts.size())];
    EId fresh = static_cast<EId>(edges.size());
    if (used < n && rng.flip()) {
      VId v = g.dart_vertex(d);
      VId w = used++;
      bool fw = rng.flip();
      edges.push_back(fw ? PlaneMultigraph::Edge{v, w} : PlaneMultigraph::Edge{w, v});
      rings[v].insert(std::find(rings[v].begin(), rings[v].end(), d),
                      fw ? tail_dart(fresh) : head_dart(fresh));
      rings[w] = {fw ? head_dart(fresh) : tail_dart(fresh)};
    } else {
      const auto& walk = faces.walk(faces.face_of(d));
      Dart d2 = walk[rng.below(walk.size())];
      VId v = g.dart_vertex(d);
      VId w = g.dart_vertex(d2);
      bool fw = rng.flip();
      edges.push_back(fw ? PlaneMultigraph::Edge{v, w} : PlaneMultigraph::Edge{w, v});
      Dart at_v = fw ? tail_dart(fresh) : head_dart(fresh);
      Dart at_w = fw ? head_dart(fresh) : tail_dart(fresh);
      if (d == d2) {
        auto it = std::find(rings[v].begin(), rings[v].end(), d);
        rings[v].insert(it, {at_v, at_w});
      } else {
        rings[v].insert(std::find(rings[v].begin(), rings[v].end(), d), at_v);
        rings[w].insert(std::find(rings[w].begin(), rings[w].end(), d2), at_w);
      }
    }
  }
  return build(used);
}

oracle::EdgeList edge_list(const PlaneMultigraph& g) {
  oracle::EdgeList out;
  for (EId e : g.alive_edges()) out.push_back({g.tail(e), g.head(e)});
  return out;
}

}  // namespace

TEST_CASE("cycle separator on an augmented grid piece: balance and size") {
  auto aug = augment_pipeline(grid(4));
  const PlaneMultigraph& g = aug.graph;
  auto res = simple_cycle_separator(g);
  long long total = res.record.total_weight;
  CHECK(res.record.inside_weight <= (2 * total + 2) / 3);
  CHECK(res.record.outside_weight <= (2 * total + 2) / 3);
  // fundamental cycles on a near-centered BFS tree stay O(sqrt n)-ish
  CHECK(static_cast<double>(res.record.cycle.size()) <=
        8.0 * std::sqrt(static_cast<double>(g.vertex_count())));
  // cycle vertices distinct
  std::set<VId> cyc(res.record.cycle.begin(), res.record.cycle.end());
  CHECK(cyc.size() == res.record.cycle.size());
}

TEST_CASE("cycle separator rejects tiny pieces") {
  CHECK_THROWS_AS(simple_cycle_separator(triangle()), Error);
}

TEST_CASE("base decomposition on a triangulated grid") {
  auto aug = augment_pipeline(grid(6));
  auto g = std::make_shared<PlaneMultigraph>(aug.graph);
  auto t = build_decomposition(g);

  // root is the whole graph with empty boundary
  CHECK(t.pieces[0].boundary.empty());
  CHECK(t.pieces[0].edge_count == g->edge_count());

  // every edge in >= 1 leaf; leaves small unless no separator could split
  for (EId e : g->alive_edges()) CHECK(t.leaf_of_edge[e] >= 0);
  for (int leaf : t.leaves) CHECK(t.pieces[leaf].edges.size() <= 48);

  // levels O(log n) with the generous constant
  double logn = std::log2(std::max(2, g->vertex_count()));
  CHECK(t.levels <= static_cast<int>(8 * logn) + 1);

  // sum of squared boundaries within the generous constant
  CHECK(t.sum_boundary_sq() <= 64.0 * g->vertex_count() * logn);

  // boundary recurrence, recomputed independently
  for (const Piece& p : t.pieces) {
    if (p.id == 0) continue;
    const Piece& parent = t.pieces[p.parent];
    int sib = parent.child[0] == p.id ? parent.child[1] : parent.child[0];
    auto vh = t.piece_vertices(p.id);
    auto vs = t.piece_vertices(sib);
    std::set<VId> expected;
    std::set<VId> vss(vs.begin(), vs.end());
    std::set<VId> pb(parent.boundary.begin(), parent.boundary.end());
    for (VId v : vh)
      if (vss.count(v) || pb.count(v)) expected.insert(v);
    std::set<VId> got(p.boundary.begin(), p.boundary.end());
    CHECK(got == expected);
  }

  // non-leaf children cover the parent; shared edges are exactly the
  // separator's edge-parts
  for (const Piece& p : t.pieces) {
    if (p.is_leaf()) continue;
    auto e0 = t.piece_edges(p.child[0]);
    auto e1 = t.piece_edges(p.child[1]);
    std::set<EId> u(e0.begin(), e0.end());
    u.insert(e1.begin(), e1.end());
    auto pe = t.piece_edges(p.id);
    CHECK(u == std::set<EId>(pe.begin(), pe.end()));
    std::set<EId> shared;
    std::set<EId> s0(e0.begin(), e0.end());
    for (EId e : e1)
      if (s0.count(e)) shared.insert(e);
    std::set<EId> parts;
    for (const auto& part : p.separator.parts)
      if (part.edge >= 0) parts.insert(part.edge);
    CHECK(shared == parts);
  }
}

TEST_CASE("simple decomposition: validator empty, structure sound") {
  Rng rng(71);
  for (int it = 0; it < 6; ++it) {
    auto g = random_plane_connected(4 + static_cast<int>(rng.below(10)), rng);
    auto sd = build_simple_decomposition(g);
    auto report = validate_simple(sd.tree);
    for (const auto& v : report) {
      CAPTURE(v.piece);
      CAPTURE(v.clause);
      CHECK(false);
    }
    CHECK(report.empty());

    // every leaf small enough (in separator-level edges); every expansion
    // edge in exactly one leaf
    const auto& t = sd.tree;
    std::vector<int> count(t.graph->edge_slots(), 0);
    for (int leaf : t.leaves) {
      CHECK(t.pieces[leaf].base_edge_count <= 12);
      for (EId e : t.pieces[leaf].edges) count[e]++;
    }
    for (EId e : t.graph->alive_edges()) CHECK(count[e] == 1);
  }
}

TEST_CASE("simple decomposition of the triangle pipeline") {
  auto sd = build_simple_decomposition(triangle());
  CHECK(validate_simple(sd.tree).empty());
  // a triangle is already triangulated: the whole expansion is one leaf
  CHECK(sd.tree.pieces.size() == 1);
  CHECK(sd.tree.pieces[0].is_leaf());
  // E0-only subgraph has one SCC per original vertex
  oracle::EdgeList e0;
  for (EId e : sd.mapping.e0())
    e0.push_back({sd.mapping.graph.tail(e), sd.mapping.graph.head(e)});
  if (sd.mapping.graph.vertex_count() <= oracle::kMaxOracleN) {
    auto [comp, cnt] = oracle::scc(sd.mapping.graph.vertex_count(), e0);
    (void)comp;
    CHECK(cnt == 3);
  }
}

TEST_CASE("Lemma 6.4: V(H) cap V(G-H) inside the boundary") {
  Rng rng(99);
  auto g = random_plane_connected(10, rng);
  auto sd = build_simple_decomposition(g);
  const auto& t = sd.tree;
  const auto& gg = *t.graph;
  for (const Piece& p : t.pieces) {
    auto eh = t.piece_edges(p.id);
    std::set<EId> in_h(eh.begin(), eh.end());
    std::set<VId> vh;
    for (EId e : eh) {
      vh.insert(gg.tail(e));
      vh.insert(gg.head(e));
    }
    std::set<VId> v_rest;
    for (EId e : gg.alive_edges())
      if (!in_h.count(e)) {
        v_rest.insert(gg.tail(e));
        v_rest.insert(gg.head(e));
      }
    std::set<VId> bnd(p.boundary.begin(), p.boundary.end());
    for (VId v : vh)
      if (v_rest.count(v)) CHECK(bnd.count(v));
  }
}

TEST_CASE("hole cycles separate the piece from its complement (Lemmas 6.5-6.7)") {
  Rng rng(123);
  auto g = random_plane_connected(12, rng);
  auto sd = build_simple_decomposition(g);
  const auto& t = sd.tree;
  const auto& gg = *t.graph;
  // for every piece: contract the piece's hole vertices away from G-H and
  // check each weak component of G-H touches exactly one hole group
  for (const Piece& p : t.pieces) {
    if (p.id == 0 || p.boundary.empty()) continue;
    auto eh = t.piece_edges(p.id);
    std::set<EId> in_h(eh.begin(), eh.end());
    // weak components of G-H
    std::vector<int> comp(gg.vertex_count(), -1);
    int nc = 0;
    for (EId seed : gg.alive_edges()) {
      if (in_h.count(seed)) continue;
      if (comp[gg.tail(seed)] != -1) continue;
      // BFS over G-H edges from this vertex
      std::vector<VId> stack{gg.tail(seed)};
      comp[gg.tail(seed)] = nc;
      while (!stack.empty()) {
        VId v = stack.back();
        stack.pop_back();
        for (Dart d : gg.ring(v)) {
          EId e = edge_of(d);
          if (in_h.count(e)) continue;
          VId u = gg.dart_target(d);
          if (comp[u] == -1) {
            comp[u] = nc;
            stack.push_back(u);
          }
        }
      }
      nc++;
    }
    // boundary vertices of one component must lie on a single hole group
    for (int c = 0; c < nc; ++c) {
      std::set<int> groups;
      for (std::size_t h = 0; h < p.boundary_by_hole.size(); ++h)
        for (VId v : p.boundary_by_hole[h])
          if (comp[v] == c) groups.insert(static_cast<int>(h));
      CHECK(groups.size() <= 1);
    }
  }
}

TEST_CASE("validate_simple flags seeded defects") {
  auto sd = build_simple_decomposition(grid(3));
  // overlapping sibling edge sets: copy one leaf edge into another leaf
  {
    DecompTree broken = sd.tree;
    REQUIRE(broken.leaves.size() >= 2);
    Piece& a = broken.pieces[broken.leaves[0]];
    Piece& b = broken.pieces[broken.leaves[1]];
    b.edges.push_back(a.edges.front());
    std::sort(b.edges.begin(), b.edges.end());
    auto report = validate_simple(broken);
    bool found = false;
    for (const auto& v : report)
      found |= v.clause == "edge in two leaves" || v.clause == "sibling edge sets overlap";
    CHECK(found);
  }
}

TEST_CASE("full mapping equivalence on switched-on subsets") {
  Rng rng(2024);
  for (int it = 0; it < 4; ++it) {
    int n = 4 + static_cast<int>(rng.below(8));
    auto g = random_plane_connected(n, rng);
    auto sd = build_simple_decomposition(g);
    const auto& a = sd.mapping;
    if (a.graph.vertex_count() > oracle::kMaxOracleN) continue;
    oracle::EdgeList base_edges = edge_list(g);

    for (int trial = 0; trial < 5; ++trial) {
      oracle::EdgeList f_edges;
      oracle::EdgeList lifted;
      for (EId e : a.graph.alive_edges())
        if (a.edge_class[e] == EdgeClass::E0)
          lifted.push_back({a.graph.tail(e), a.graph.head(e)});
      for (EId e : g.alive_edges())
        if (rng.flip()) {
          f_edges.push_back({g.tail(e), g.head(e)});
          EId img = a.edge_image[e];
          lifted.push_back({a.graph.tail(img), a.graph.head(img)});
        }
      for (VId u = 0; u < g.vertex_count(); ++u) {
        auto base_reach = oracle::reachable_set(g.vertex_count(), f_edges, u);
        VId u_rep = a.vertex_cycle[u][rng.below(a.vertex_cycle[u].size())];
        auto lift_reach = oracle::reachable_set(a.graph.vertex_count(), lifted, u_rep);
        for (VId v = 0; v < g.vertex_count(); ++v) {
          VId v_rep = a.vertex_cycle[v][rng.below(a.vertex_cycle[v].size())];
          CHECK(static_cast<bool>(base_reach[v]) == static_cast<bool>(lift_reach[v_rep]));
        }
      }
    }
  }
}

TEST_CASE("decomposition statistics populated") {
  auto aug = augment_pipeline(grid(5));
  auto t = build_decomposition(std::make_shared<PlaneMultigraph>(aug.graph));
  CHECK(t.levels >= 2);
  CHECK(t.level_stats.size() == static_cast<std::size_t>(t.levels));
  CHECK(t.level_stats[0].pieces == 1);
  CHECK(t.decay_c >= 1.0);
}
