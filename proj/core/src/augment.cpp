#include "planar_reach/augment.hpp"

#include <algorithm>
#include <deque>

#include "planar_reach/oracle.hpp"

namespace planar_reach {

std::vector<EId> AugmentedGraph::e0() const {
  std::vector<EId> out;
  for (EId e = 0; e < static_cast<EId>(edge_class.size()); ++e)
    if (graph.edge_alive(e) && edge_class[e] == EdgeClass::E0) out.push_back(e);
  return out;
}

std::vector<EId> AugmentedGraph::e1() const {
  std::vector<EId> out;
  for (EId e = 0; e < static_cast<EId>(edge_class.size()); ++e)
    if (graph.edge_alive(e) && edge_class[e] == EdgeClass::E1) out.push_back(e);
  return out;
}

AugmentedGraph identity_step(const PlaneMultigraph& g) {
  AugmentedGraph a;
  a.graph = g;
  a.input_n = g.vertex_count();
  a.input_m = g.edge_slots();
  a.input_edges.resize(g.edge_slots());
  for (EId e = 0; e < g.edge_slots(); ++e) a.input_edges[e] = g.edge(e);
  a.edge_class.assign(g.edge_slots(), EdgeClass::E1);
  a.orig.resize(g.vertex_count());
  a.vertex_cycle.resize(g.vertex_count());
  for (VId v = 0; v < g.vertex_count(); ++v) {
    a.orig[v] = v;
    a.vertex_cycle[v] = {v};
  }
  a.edge_image.resize(g.edge_slots());
  for (EId e = 0; e < g.edge_slots(); ++e) a.edge_image[e] = e;
  int d = 0;
  for (VId v = 0; v < g.vertex_count(); ++v) d = std::max(d, g.degree(v));
  a.degree_bound = d;
  a.steps = {"identity"};
  return a;
}

AugmentedGraph connect(const PlaneMultigraph& g) {
  require(g.edge_count() == g.edge_slots(), Err::PreconditionViolated,
          "connect expects a graph without dead slots");
  auto [label, count] = g.components();

  // Representative corner per component: the smallest alive dart (its face is
  // the component's unbounded face by the FaceStructure convention), or the
  // bare vertex for isolated components.
  std::vector<Dart> corner(count, -1);
  std::vector<VId> rep(count, -1);
  for (VId v = 0; v < g.vertex_count(); ++v)
    if (rep[label[v]] == -1 && g.degree(v) == 0) rep[label[v]] = v;
  for (Dart d : g.alive_darts()) {
    int c = label[g.dart_vertex(d)];
    if (corner[c] == -1) {
      corner[c] = d;
      rep[c] = g.dart_vertex(d);
    }
  }

  std::vector<PlaneMultigraph::Edge> edges(g.edge_slots());
  std::vector<std::vector<Dart>> rings(g.vertex_count());
  for (EId e = 0; e < g.edge_slots(); ++e) edges[e] = g.edge(e);
  for (VId v = 0; v < g.vertex_count(); ++v) rings[v] = g.ring(v);

  AugmentedGraph a = identity_step(g);
  a.steps = {"connect"};
  for (int c = 0; c + 1 < count; ++c) {
    EId fresh = static_cast<EId>(edges.size());
    VId u = rep[c], w = rep[c + 1];
    edges.push_back({u, w});
    a.edge_class.push_back(EdgeClass::Filler);
    auto insert_at = [&](VId v, Dart at_corner, Dart fresh_dart) {
      auto& r = rings[v];
      if (at_corner == -1) {
        r.push_back(fresh_dart);
      } else {
        r.insert(std::find(r.begin(), r.end(), at_corner), fresh_dart);
      }
    };
    insert_at(u, corner[c], tail_dart(fresh));
    insert_at(w, corner[c + 1], head_dart(fresh));
    // the new edge provides the corner for the next hop out of the merged
    // component
    corner[c + 1] = head_dart(fresh);
  }
  a.graph =
      PlaneMultigraph::build_from_rotation(g.vertex_count(), std::move(edges), std::move(rings));
  require(a.graph.connected(), Err::PreconditionViolated, "connect failed to connect");
  int d = 0;
  for (VId v = 0; v < a.graph.vertex_count(); ++v) d = std::max(d, a.graph.degree(v));
  a.degree_bound = d;
  return a;
}

namespace {

// Mutable construction state used while triangulating faces.
struct Builder {
  std::vector<PlaneMultigraph::Edge> edges;
  std::vector<std::vector<Dart>> rings;
  std::vector<EdgeClass> edge_class;

  VId dart_vertex(Dart d) const {
    return is_head_side(d) ? edges[edge_of(d)].head : edges[edge_of(d)].tail;
  }

  void insert_before(VId v, Dart pos, Dart fresh) {
    auto& r = rings[v];
    r.insert(std::find(r.begin(), r.end(), pos), fresh);
  }

  // Chord splitting the current face polygon between entries p and q.
  EId add_chord(const std::vector<Dart>& poly, std::size_t p, std::size_t q) {
    VId u = dart_vertex(poly[p]);
    VId w = dart_vertex(poly[q]);
    EId id = static_cast<EId>(edges.size());
    edges.push_back({u, w});
    edge_class.push_back(EdgeClass::Filler);
    insert_before(u, poly[p], tail_dart(id));
    insert_before(w, poly[q], head_dart(id));
    return id;
  }
};

// Triangulates one face walk with the zig-zag chord pattern w1w3, w3wk,
// wkw4, w4w_{k-1}, ... so that no walk occurrence of a vertex gains more
// than two chords. In polygon terms that is one interior ear cut followed
// by alternating front-vertex / interior cuts. A chord between coinciding
// walk vertices would be a self-loop; such an ear is skipped in favor of
// the other cut type, and on a double block the polygon is rotated.
void triangulate_face(Builder& b, std::vector<Dart> poly) {
  // chord between poly positions p < q splits the face into
  //   A = poly[0..p-1] + [chord tail dart] + poly[q..]
  //   B = [chord head dart] + poly[p..q-1]
  auto cut_interior = [&]() {  // ear at poly[1]: chord poly[0] -> poly[2]
    if (b.dart_vertex(poly[0]) == b.dart_vertex(poly[2])) return false;
    EId id = b.add_chord(poly, 0, 2);
    poly.erase(poly.begin(), poly.begin() + 2);
    poly.insert(poly.begin(), tail_dart(id));
    return true;
  };
  auto cut_front = [&]() {  // ear at poly[0]: chord poly[1] -> poly[r-1]
    std::size_t r = poly.size();
    if (b.dart_vertex(poly[1]) == b.dart_vertex(poly[r - 1])) return false;
    EId id = b.add_chord(poly, 1, r - 1);
    poly.pop_back();
    poly.erase(poly.begin());
    poly.insert(poly.begin(), head_dart(id));
    return true;
  };

  bool interior = true;
  int stuck = 0;
  while (poly.size() > 3) {
    bool cut = interior ? (cut_interior() || cut_front()) : (cut_front() || cut_interior());
    if (cut) {
      interior = !interior;
      stuck = 0;
      continue;
    }
    require(++stuck <= static_cast<int>(poly.size()), Err::PreconditionViolated,
            "face cannot be triangulated without loops");
    poly.push_back(poly.front());
    poly.erase(poly.begin());
  }
}

}  // namespace

AugmentedGraph expand_and_triangulate(const PlaneMultigraph& g) {
  require(g.edge_count() > 0, Err::EmptyGraph, "expand of an edgeless graph");
  require(g.connected(), Err::PreconditionViolated, "expand expects a connected graph");
  require(g.edge_count() == g.edge_slots(), Err::PreconditionViolated,
          "expand expects a graph without dead slots");

  int n = g.vertex_count();
  AugmentedGraph a;
  a.input_n = n;
  a.input_m = g.edge_slots();
  a.input_edges.resize(g.edge_slots());
  for (EId e = 0; e < g.edge_slots(); ++e) a.input_edges[e] = g.edge(e);
  a.steps = {"expand_and_triangulate"};

  // cycle layout: vertex v with ring length k owns [base[v], base[v] + 3k)
  std::vector<int> base(n + 1, 0);
  for (VId v = 0; v < n; ++v) base[v + 1] = base[v] + 3 * g.degree(v);
  int n_out = base[n];

  Builder b;
  b.rings.resize(n_out);
  a.orig.resize(n_out);
  a.vertex_cycle.resize(n);

  // E0: clockwise directed cycles
  std::vector<EId> cycle_edge_from(n_out, -1);  // E0 edge leaving each cycle vertex
  for (VId v = 0; v < n; ++v) {
    int k3 = 3 * g.degree(v);
    for (int j = 0; j < k3; ++j) {
      VId cj = base[v] + j;
      a.orig[cj] = v;
      a.vertex_cycle[v].push_back(cj);
      EId id = static_cast<EId>(b.edges.size());
      b.edges.push_back({cj, base[v] + (j + 1) % k3});
      b.edge_class.push_back(EdgeClass::E0);
      cycle_edge_from[cj] = id;
    }
  }

  // E1: one edge per input edge, attached at the ring positions' cycle slots
  a.edge_image.resize(g.edge_slots());
  std::vector<Dart> radial(n_out, -1);
  for (EId e = 0; e < g.edge_slots(); ++e) {
    VId u = g.tail(e), w = g.head(e);
    const auto& ru = g.ring(u);
    const auto& rw = g.ring(w);
    int iu = static_cast<int>(std::find(ru.begin(), ru.end(), tail_dart(e)) - ru.begin());
    int iw = static_cast<int>(std::find(rw.begin(), rw.end(), head_dart(e)) - rw.begin());
    VId cu = base[u] + 3 * iu;
    VId cw = base[w] + 3 * iw;
    EId id = static_cast<EId>(b.edges.size());
    b.edges.push_back({cu, cw});
    b.edge_class.push_back(EdgeClass::E1);
    a.edge_image[e] = id;
    radial[cu] = tail_dart(id);
    radial[cw] = head_dart(id);
  }

  // rings: [radial?, toward next, toward prev], clockwise
  for (VId v = 0; v < n; ++v) {
    int k3 = 3 * g.degree(v);
    for (int j = 0; j < k3; ++j) {
      VId cj = base[v] + j;
      auto& r = b.rings[cj];
      if (radial[cj] != -1) r.push_back(radial[cj]);
      r.push_back(tail_dart(cycle_edge_from[cj]));                           // toward next
      r.push_back(head_dart(cycle_edge_from[base[v] + (j + k3 - 1) % k3]));  // toward prev
    }
  }

  PlaneMultigraph h = PlaneMultigraph::build_from_rotation(n_out, b.edges, b.rings);
  FaceStructure faces(h);
  for (FaceId f = 0; f < faces.face_count(); ++f) {
    require(faces.walk(f).size() >= 3, Err::PreconditionViolated, "expanded face below size 3");
    if (faces.walk(f).size() > 3) triangulate_face(b, faces.walk(f));
  }

  a.graph = PlaneMultigraph::build_from_rotation(n_out, std::move(b.edges), std::move(b.rings));
  a.edge_class = std::move(b.edge_class);

  // output contract: triangulated, loop-free, bounded degree
  FaceStructure out_faces(a.graph);
  for (FaceId f = 0; f < out_faces.face_count(); ++f)
    require(out_faces.walk(f).size() == 3, Err::PreconditionViolated, "non-triangular face");
  for (EId e : a.graph.alive_edges())
    require(a.graph.tail(e) != a.graph.head(e), Err::PreconditionViolated, "loop in output");
  int d = 0;
  for (VId v = 0; v < a.graph.vertex_count(); ++v) d = std::max(d, a.graph.degree(v));
  require(d <= 12, Err::PreconditionViolated, "degree bound exceeded");
  a.degree_bound = d;
  return a;
}

AugmentedGraph compose(const AugmentedGraph& s1, const AugmentedGraph& s2) {
  require(s2.input_n == s1.graph.vertex_count() && s2.input_m == s1.graph.edge_slots(),
          Err::MismatchedStages, "step2 input does not match step1 output");

  AugmentedGraph a;
  a.graph = s2.graph;
  a.input_n = s1.input_n;
  a.input_m = s1.input_m;
  a.input_edges = s1.input_edges;
  a.steps = s1.steps;
  a.steps.insert(a.steps.end(), s2.steps.begin(), s2.steps.end());
  a.degree_bound = s2.degree_bound;

  a.orig.resize(s2.orig.size());
  for (VId v = 0; v < static_cast<VId>(s2.orig.size()); ++v) a.orig[v] = s1.orig[s2.orig[v]];

  a.vertex_cycle.assign(s1.input_n, {});
  for (VId v = 0; v < s1.input_n; ++v)
    for (VId mid : s1.vertex_cycle[v])
      for (VId w : s2.vertex_cycle[mid]) a.vertex_cycle[v].push_back(w);

  a.edge_image.resize(s1.input_m);
  for (EId e = 0; e < s1.input_m; ++e) a.edge_image[e] = s2.edge_image[s1.edge_image[e]];

  // E1 = p''(p'(E)); E0 = E0'' + p''(E0'); everything else is filler
  a.edge_class.assign(s2.edge_class.size(), EdgeClass::Filler);
  for (EId e = 0; e < static_cast<EId>(s2.edge_class.size()); ++e)
    if (s2.edge_class[e] == EdgeClass::E0) a.edge_class[e] = EdgeClass::E0;
  for (EId e = 0; e < static_cast<EId>(s1.edge_class.size()); ++e)
    if (s1.edge_class[e] == EdgeClass::E0) a.edge_class[s2.edge_image[e]] = EdgeClass::E0;
  for (EId e = 0; e < s1.input_m; ++e) a.edge_class[a.edge_image[e]] = EdgeClass::E1;
  return a;
}

AugmentedGraph augment_pipeline(const PlaneMultigraph& g) {
  AugmentedGraph c = connect(g);
  AugmentedGraph x = expand_and_triangulate(c.graph);
  AugmentedGraph out = compose(c, x);
  validate_augmented(out);
  return out;
}

void validate_augmented(const AugmentedGraph& a) {
  const PlaneMultigraph& g = a.graph;
  // p injective onto E1
  std::vector<std::uint8_t> seen(g.edge_slots(), 0);
  for (EId e = 0; e < a.input_m; ++e) {
    EId img = a.edge_image[e];
    require(g.edge_alive(img), Err::PreconditionViolated, "edge image dead");
    require(a.edge_class[img] == EdgeClass::E1, Err::PreconditionViolated, "edge image not E1");
    require(!seen[img], Err::PreconditionViolated, "edge image repeated");
    seen[img] = 1;
  }
  for (EId e = 0; e < g.edge_slots(); ++e)
    if (g.edge_alive(e) && a.edge_class[e] == EdgeClass::E1)
      require(seen[e], Err::PreconditionViolated, "E1 edge with no preimage");

  // vertex cycles partition V(G') and carry orig
  std::vector<int> cyc(g.vertex_count(), -1);
  for (VId v = 0; v < a.input_n; ++v)
    for (VId w : a.vertex_cycle[v]) {
      require(cyc[w] == -1, Err::PreconditionViolated, "vertex in two cycles");
      require(a.orig[w] == v, Err::PreconditionViolated, "orig/cycle mismatch");
      cyc[w] = v;
    }
  for (VId w = 0; w < g.vertex_count(); ++w)
    require(cyc[w] != -1, Err::PreconditionViolated, "vertex in no cycle");

  // E0 edges stay inside cycles and keep every cycle vertex on a directed
  // cycle (no inter-SCC edges in (V', E0), SCCs = vertex cycles)
  std::vector<int> outdeg(g.vertex_count(), 0), indeg(g.vertex_count(), 0);
  for (EId e : a.e0()) {
    require(cyc[g.tail(e)] == cyc[g.head(e)], Err::PreconditionViolated,
            "E0 edge between cycles");
    outdeg[g.tail(e)]++;
    indeg[g.head(e)]++;
  }
  for (VId w = 0; w < g.vertex_count(); ++w)
    require(outdeg[w] >= 1 && indeg[w] >= 1, Err::PreconditionViolated,
            "cycle vertex missing E0 arc");

  // each cycle strongly connected under its E0 edges
  {
    std::vector<std::vector<VId>> fwd(g.vertex_count()), bwd(g.vertex_count());
    for (EId e : a.e0()) {
      fwd[g.tail(e)].push_back(g.head(e));
      bwd[g.head(e)].push_back(g.tail(e));
    }
    std::vector<int> mark(g.vertex_count(), -1);
    int stamp = 0;
    auto sweep = [&](VId s, const std::vector<std::vector<VId>>& adj) {
      ++stamp;
      std::vector<VId> stack{s};
      mark[s] = stamp;
      std::size_t reached = 1;
      while (!stack.empty()) {
        VId x = stack.back();
        stack.pop_back();
        for (VId y : adj[x])
          if (mark[y] != stamp) {
            mark[y] = stamp;
            reached++;
            stack.push_back(y);
          }
      }
      return reached;
    };
    for (VId v = 0; v < a.input_n; ++v) {
      if (a.vertex_cycle[v].empty()) continue;
      VId s = a.vertex_cycle[v][0];
      require(sweep(s, fwd) == a.vertex_cycle[v].size() &&
                  sweep(s, bwd) == a.vertex_cycle[v].size(),
              Err::PreconditionViolated, "vertex cycle not strongly connected under E0");
    }
  }

  // p(e) runs between the matching cycles, in direction
  for (EId e = 0; e < a.input_m; ++e) {
    EId img = a.edge_image[e];
    require(a.orig[g.tail(img)] == a.input_edges[e].tail &&
                a.orig[g.head(img)] == a.input_edges[e].head,
            Err::PreconditionViolated, "edge image endpoints mismatch");
  }
}

}  // namespace planar_reach
