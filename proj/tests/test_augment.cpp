#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "planar_reach/augment.hpp"
#include "planar_reach/oracle.hpp"
#include "planar_reach/plane_graph.hpp"

using namespace planar_reach;

namespace {

using Edges = std::vector<PlaneMultigraph::Edge>;
using Rings = std::vector<std::vector<Dart>>;

PlaneMultigraph triangle() {
  return PlaneMultigraph::build_from_rotation(3, Edges{{0, 1}, {1, 2}, {2, 0}},
                                              Rings{{5, 0}, {1, 2}, {3, 4}});
}

PlaneMultigraph single_edge() {
  return PlaneMultigraph::build_from_rotation(2, Edges{{0, 1}}, Rings{{0}, {1}});
}

PlaneMultigraph self_loop() {
  return PlaneMultigraph::build_from_rotation(1, Edges{{0, 0}}, Rings{{0, 1}});
}

oracle::EdgeList on_subgraph(const AugmentedGraph& a, const std::vector<EId>& on_images) {
  oracle::EdgeList el;
  for (EId e : a.e0()) el.push_back({a.graph.tail(e), a.graph.head(e)});
  for (EId img : on_images) el.push_back({a.graph.tail(img), a.graph.head(img)});
  return el;
}

// random connected plane graph, same growth scheme as the plane_graph tests
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

}  // namespace

TEST_CASE("connect leaves a connected graph unchanged") {
  auto a = connect(triangle());
  CHECK(a.graph.edge_count() == 3);
  CHECK(a.e1().size() == 3);
}

TEST_CASE("connect adds c-1 filler edges") {
  // two disjoint edges
  auto g = PlaneMultigraph::build_from_rotation(4, Edges{{0, 1}, {2, 3}},
                                                Rings{{0}, {1}, {2}, {3}});
  auto a = connect(g);
  CHECK(a.graph.edge_count() == 3);
  CHECK(a.graph.connected());
  CHECK(a.edge_class[2] == EdgeClass::Filler);

  // five isolated vertices
  auto iso = PlaneMultigraph::build_from_rotation(5, {}, Rings(5));
  auto b = connect(iso);
  CHECK(b.graph.edge_count() == 4);
  CHECK(b.graph.connected());
}

TEST_CASE("single edge expands to two 3-cycles and one E1 edge") {
  auto a = expand_and_triangulate(single_edge());
  CHECK(a.vertex_cycle[0].size() == 3);
  CHECK(a.vertex_cycle[1].size() == 3);
  CHECK(a.e0().size() == 6);
  CHECK(a.e1().size() == 1);
  for (EId e : a.graph.alive_edges()) CHECK(a.graph.tail(e) != a.graph.head(e));
  FaceStructure f(a.graph);
  for (FaceId i = 0; i < f.face_count(); ++i) CHECK(f.walk(i).size() == 3);
  validate_augmented(a);
}

TEST_CASE("self-loop is eliminated by expansion") {
  auto a = expand_and_triangulate(self_loop());
  CHECK(a.vertex_cycle[0].size() == 6);  // ring length 2 -> 3k = 6
  EId img = a.edge_image[0];
  CHECK(a.graph.tail(img) != a.graph.head(img));
  validate_augmented(a);
}

TEST_CASE("triangle expansion: 18 cycle vertices, all faces triangulated") {
  auto a = expand_and_triangulate(triangle());
  CHECK(a.graph.vertex_count() == 18);  // 3 vertices of ring length 2
  FaceStructure f(a.graph);
  for (FaceId i = 0; i < f.face_count(); ++i) CHECK(f.walk(i).size() == 3);
  CHECK(a.degree_bound <= 12);
  validate_augmented(a);
}

TEST_CASE("compose with identity leaves mappings unchanged") {
  auto c = connect(triangle());
  auto i = identity_step(c.graph);
  auto comp = compose(c, i);
  CHECK(comp.edge_image == c.edge_image);
  CHECK(comp.vertex_cycle == c.vertex_cycle);
}

TEST_CASE("compose is associative on a three-step chain") {
  auto g = triangle();
  auto s1 = connect(g);
  auto s2 = identity_step(s1.graph);
  auto s3 = expand_and_triangulate(s2.graph);
  auto left = compose(compose(s1, s2), s3);
  auto right = compose(s1, compose(s2, s3));
  CHECK(left.edge_image == right.edge_image);
  CHECK(left.orig == right.orig);
  CHECK(left.vertex_cycle == right.vertex_cycle);
  for (std::size_t e = 0; e < left.edge_class.size(); ++e)
    CHECK(left.edge_class[e] == right.edge_class[e]);
}

TEST_CASE("compose rejects mismatched stages") {
  auto s1 = connect(triangle());
  auto s2 = expand_and_triangulate(single_edge());
  CHECK_THROWS_AS(compose(s1, s2), Error);
}

TEST_CASE("pipeline on a 2-component input: SCCs of (V', E0) biject with V") {
  auto g = PlaneMultigraph::build_from_rotation(4, Edges{{0, 1}, {2, 3}},
                                                Rings{{0}, {1}, {2}, {3}});
  auto a = augment_pipeline(g);
  oracle::EdgeList e0;
  for (EId e : a.e0()) e0.push_back({a.graph.tail(e), a.graph.head(e)});
  auto [comp, count] = oracle::scc(a.graph.vertex_count(), e0);
  (void)comp;
  CHECK(count == g.vertex_count());
}

TEST_CASE("pipeline output size stays linear in the input") {
  Rng rng(31);
  for (int it = 0; it < 10; ++it) {
    auto g = random_plane_connected(4 + static_cast<int>(rng.below(20)), rng);
    auto a = augment_pipeline(g);
    int nm = g.vertex_count() + g.edge_count();
    CHECK(a.graph.vertex_count() <= 12 * nm + 12);
    CHECK(a.graph.edge_count() <= 36 * nm + 36);
    CHECK(a.degree_bound <= 12);
  }
}

TEST_CASE("reachability equivalence on switched-on subsets (Corollary 6.2)") {
  Rng rng(4242);
  for (int it = 0; it < 12; ++it) {
    int n = 4 + static_cast<int>(rng.below(12));
    auto g = random_plane_connected(n, rng);
    auto a = augment_pipeline(g);
    oracle::EdgeList full;
    for (EId e : g.alive_edges()) full.push_back({g.tail(e), g.head(e)});

    for (int trial = 0; trial < 8; ++trial) {
      // random F subseteq E
      std::vector<EId> f_ids;
      oracle::EdgeList f_edges;
      for (EId e : g.alive_edges())
        if (rng.flip()) {
          f_ids.push_back(e);
          f_edges.push_back({g.tail(e), g.head(e)});
        }
      std::vector<EId> images;
      for (EId e : f_ids) images.push_back(a.edge_image[e]);
      auto sub = on_subgraph(a, images);
      // u -> v path in (V, F) iff u' -> v' path in (V', E0 + p(F))
      for (VId u = 0; u < g.vertex_count(); ++u) {
        auto base_reach = oracle::reachable_set(g.vertex_count(), f_edges, u);
        VId u_rep = a.vertex_cycle[u][rng.below(a.vertex_cycle[u].size())];
        auto lifted = oracle::reachable_set(a.graph.vertex_count(), sub, u_rep);
        for (VId v = 0; v < g.vertex_count(); ++v) {
          VId v_rep = a.vertex_cycle[v][rng.below(a.vertex_cycle[v].size())];
          CHECK(static_cast<bool>(base_reach[v]) == static_cast<bool>(lifted[v_rep]));
        }
      }
    }
  }
}
