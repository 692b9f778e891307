#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>

#include "planar_reach/io.hpp"
#include "planar_reach/oracle.hpp"
#include "planar_reach/plane_graph.hpp"

using namespace planar_reach;

namespace {

using Edges = std::vector<PlaneMultigraph::Edge>;
using Rings = std::vector<std::vector<Dart>>;

PlaneMultigraph single_edge() {
  return PlaneMultigraph::build_from_rotation(2, Edges{{0, 1}}, Rings{{0}, {1}});
}

// a->b->c->a embedded as a cycle
PlaneMultigraph triangle() {
  Edges e{{0, 1}, {1, 2}, {2, 0}};
  Rings r{{5, 0}, {1, 2}, {3, 4}};
  return PlaneMultigraph::build_from_rotation(3, std::move(e), std::move(r));
}

oracle::EdgeList edge_list(const PlaneMultigraph& g) {
  oracle::EdgeList out;
  for (EId e : g.alive_edges()) out.push_back({g.tail(e), g.head(e)});
  return out;
}

// Random connected plane multigraph grown by repeatedly attaching edges at
// face corners, so every intermediate graph keeps a valid rotation system.
PlaneMultigraph random_plane_connected(int n, Rng& rng) {
  Edges edges{{0, 1}};
  Rings rings(n);
  rings[0] = {0};
  rings[1] = {1};
  int used = 2;
  int target_extra = n + static_cast<int>(rng.below(2 * n));
  auto build = [&](int verts) {
    Rings sub(rings.begin(), rings.begin() + verts);
    return PlaneMultigraph::build_from_rotation(verts, edges, std::move(sub));
  };
  for (int step = 0; step < target_extra; ++step) {
    PlaneMultigraph g = build(used);
    FaceStructure faces(g);
    // pick a face corner (dart) uniformly
    auto darts = g.alive_darts();
    Dart d = darts[rng.below(darts.size())];
    FaceId f = faces.face_of(d);
    EId fresh = static_cast<EId>(edges.size());
    // inserting a new dart at the ring position of dart x places it in the
    // face corner just before x, which lies on face_of(x)
    if (used < n && rng.flip()) {
      // pendant to a brand-new vertex
      VId v = g.dart_vertex(d);
      VId w = used++;
      bool forward = rng.flip();
      edges.push_back(forward ? PlaneMultigraph::Edge{v, w} : PlaneMultigraph::Edge{w, v});
      Dart at_v = forward ? tail_dart(fresh) : head_dart(fresh);
      Dart at_w = forward ? head_dart(fresh) : tail_dart(fresh);
      auto& ring = rings[v];
      ring.insert(std::find(ring.begin(), ring.end(), d), at_v);
      rings[w] = {at_w};
    } else {
      // chord across the same face: pick another corner on the walk of f
      const auto& walk = faces.walk(f);
      Dart d2 = walk[rng.below(walk.size())];
      VId v = g.dart_vertex(d);
      VId w = g.dart_vertex(d2);
      bool forward = rng.flip();
      edges.push_back(forward ? PlaneMultigraph::Edge{v, w} : PlaneMultigraph::Edge{w, v});
      Dart at_v = forward ? tail_dart(fresh) : head_dart(fresh);
      Dart at_w = forward ? head_dart(fresh) : tail_dart(fresh);
      if (d == d2) {
        // self-loop at the corner; both darts inserted together
        auto& ring = rings[v];
        auto it = std::find(ring.begin(), ring.end(), d);
        ring.insert(it, {at_v, at_w});
      } else {
        auto& rv = rings[v];
        rv.insert(std::find(rv.begin(), rv.end(), d), at_v);
        auto& rw = rings[w];
        rw.insert(std::find(rw.begin(), rw.end(), d2), at_w);
      }
    }
  }
  return build(used);
}

}  // namespace

TEST_CASE("single edge: smallest graph satisfies Euler") {
  auto g = single_edge();
  CHECK(g.vertex_count() == 2);
  CHECK(g.edge_count() == 1);
  FaceStructure f(g);
  CHECK(f.face_count() == 1);
  CHECK(g.connected());
}

TEST_CASE("triangle has two faces, both simple, walk length 3") {
  auto g = triangle();
  FaceStructure f(g);
  CHECK(f.face_count() == 2);
  for (FaceId i = 0; i < f.face_count(); ++i) {
    CHECK(f.walk(i).size() == 3);
    CHECK(f.simple(i));
  }
}

TEST_CASE("K5 rotation is rejected") {
  // any rotation of K5 fails the Euler identity
  Edges e;
  Rings r(5);
  for (int u = 0; u < 5; ++u)
    for (int v = u + 1; v < 5; ++v) {
      EId id = static_cast<EId>(e.size());
      e.push_back({u, v});
      r[u].push_back(tail_dart(id));
      r[v].push_back(head_dart(id));
    }
  CHECK_THROWS_AS(PlaneMultigraph::build_from_rotation(5, e, r), Error);
  try {
    PlaneMultigraph::build_from_rotation(5, e, r);
  } catch (const Error& err) {
    CHECK(err.code() == Err::NonPlanarRotation);
  }
}

TEST_CASE("malformed rings are rejected") {
  // dart missing
  CHECK_THROWS_AS(PlaneMultigraph::build_from_rotation(2, Edges{{0, 1}}, Rings{{0}, {}}), Error);
  // dart duplicated
  CHECK_THROWS_AS(PlaneMultigraph::build_from_rotation(2, Edges{{0, 1}}, Rings{{0, 1}, {1}}),
                  Error);
  // dart at the wrong vertex
  CHECK_THROWS_AS(PlaneMultigraph::build_from_rotation(2, Edges{{0, 1}}, Rings{{1}, {0}}), Error);
}

TEST_CASE("self-loop forces a non-simple face") {
  Edges e{{0, 0}};
  Rings r{{0, 1}};
  auto g = PlaneMultigraph::build_from_rotation(1, e, r);
  FaceStructure f(g);
  bool any_nonsimple = false;
  for (FaceId i = 0; i < f.face_count(); ++i) any_nonsimple |= !f.simple(i);
  CHECK(any_nonsimple);
}

TEST_CASE("two parallel edges give two faces of walk length 2") {
  Edges e{{0, 1}, {0, 1}};
  Rings r{{0, 2}, {3, 1}};
  auto g = PlaneMultigraph::build_from_rotation(2, e, r);
  FaceStructure f(g);
  CHECK(f.face_count() == 2);
  CHECK(f.walk(0).size() == 2);
  CHECK(f.walk(1).size() == 2);
}

TEST_CASE("dual of the triangle: 2 vertices, 3 parallel dual edges, same orientation") {
  auto g = triangle();
  auto d = dual(g);
  CHECK(d.graph.vertex_count() == 2);
  CHECK(d.graph.edge_count() == 3);
  // all three primal edges share the same left face, so all dual edges run
  // from that face to the other one
  VId t = d.graph.tail(0);
  VId h = d.graph.head(0);
  CHECK(t != h);
  for (EId e = 0; e < 3; ++e) {
    CHECK(d.graph.tail(e) == t);
    CHECK(d.graph.head(e) == h);
  }
  d.graph.validate();
}

TEST_CASE("dual of a single edge: one face, one self-loop") {
  auto g = single_edge();
  auto d = dual(g);
  CHECK(d.graph.vertex_count() == 1);
  CHECK(d.graph.edge_count() == 1);
  CHECK(d.graph.tail(0) == d.graph.head(0));
}

TEST_CASE("dual edge count equals primal edge count on random instances") {
  Rng rng(12022);
  for (int it = 0; it < 30; ++it) {
    auto g = random_plane_connected(8 + static_cast<int>(rng.below(20)), rng);
    auto d = dual(g);
    CHECK(d.graph.edge_count() == g.edge_count());
    d.graph.validate();
  }
}

TEST_CASE("classify_edges_scc on the spec's small cases") {
  auto g = triangle();
  auto intra = classify_edges_scc(g);
  CHECK(intra[0]);
  CHECK(intra[1]);
  CHECK(intra[2]);
  // dual of the triangle is a 2-vertex DAG with parallel edges: all inter-SCC
  auto d = dual(g);
  auto dintra = classify_edges_scc(d.graph);
  CHECK(!dintra[0]);
  CHECK(!dintra[1]);
  CHECK(!dintra[2]);

  // directed path a->b->c: both edges inter-SCC
  auto path = PlaneMultigraph::build_from_rotation(3, Edges{{0, 1}, {1, 2}},
                                                   Rings{{0}, {1, 2}, {3}});
  auto pintra = classify_edges_scc(path);
  CHECK(!pintra[0]);
  CHECK(!pintra[1]);

  // anti-parallel pair: both intra-SCC
  auto two = PlaneMultigraph::build_from_rotation(2, Edges{{0, 1}, {1, 0}}, Rings{{0, 3}, {2, 1}});
  auto tintra = classify_edges_scc(two);
  CHECK(tintra[0]);
  CHECK(tintra[1]);
}

TEST_CASE("inter/intra classification matches the dual (Lemma 2.2) on random instances") {
  Rng rng(77);
  for (int it = 0; it < 40; ++it) {
    auto g = random_plane_connected(6 + static_cast<int>(rng.below(25)), rng);
    auto d = dual(g);
    auto intra = classify_edges_scc(g);
    auto dintra = classify_edges_scc(d.graph);
    // cross-check against the oracle on both sides
    auto ginter = oracle::inter_scc(g.vertex_count(), edge_list(g));
    auto el = edge_list(g);
    (void)el;
    int i = 0;
    for (EId e : g.alive_edges()) {
      CHECK(intra[e] == !ginter[i]);
      CHECK(!intra[e] == dintra[e]);  // e inter-SCC in G  <=>  e* intra-SCC in G*
      ++i;
    }
  }
}

TEST_CASE("remove/contract duality on the triangle") {
  auto g = triangle();
  for (EId e = 0; e < 3; ++e) CHECK(check_remove_contract_duality(g, e));
}

TEST_CASE("remove/contract duality rejects disconnecting removals") {
  auto g = single_edge();
  CHECK_THROWS_AS(check_remove_contract_duality(g, 0), Error);
}

TEST_CASE("remove/contract duality on random instances, all safe edges") {
  Rng rng(990);
  for (int it = 0; it < 25; ++it) {
    auto g = random_plane_connected(5 + static_cast<int>(rng.below(15)), rng);
    for (EId e : g.alive_edges()) {
      if (!g.remove_edge_copy(e).connected()) continue;
      CHECK(check_remove_contract_duality(g, e));
    }
  }
}

TEST_CASE("instance io round-trips and rejects malformed input") {
  Rng rng(5);
  auto g = random_plane_connected(12, rng);
  std::ostringstream os;
  write_instance(os, g);
  std::istringstream is(os.str());
  auto h = read_instance(is);
  CHECK(h.vertex_count() == g.vertex_count());
  CHECK(h.edge_count() == g.edge_count());
  for (EId e = 0; e < g.edge_slots(); ++e) {
    CHECK(h.tail(e) == g.tail(e));
    CHECK(h.head(e) == g.head(e));
  }
  for (VId v = 0; v < g.vertex_count(); ++v) CHECK(h.ring(v) == g.ring(v));

  std::istringstream bad("2 1\n0 1\ne0+ e0+\ne0-\n");
  CHECK_THROWS_AS(read_instance(bad), Error);
  std::istringstream comments("# instance\n2 1 # header\n0 1\ne0+\ne0-\n");
  CHECK(read_instance(comments).edge_count() == 1);
}

TEST_CASE("isolated vertices parse as empty ring lines") {
  std::istringstream is("3 1\n0 1\ne0+\ne0-\n\n");
  auto g = read_instance(is);
  CHECK(g.vertex_count() == 3);
  CHECK(g.degree(2) == 0);
  CHECK(g.components().second == 2);
}
