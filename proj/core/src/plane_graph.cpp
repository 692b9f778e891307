#include "planar_reach/plane_graph.hpp"

#include <algorithm>
#include <numeric>

namespace planar_reach {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

void PlaneMultigraph::reindex_darts() {
  dart_pos_.assign(2 * edges_.size(), {-1, -1});
  for (VId v = 0; v < n_; ++v) {
    for (std::size_t i = 0; i < rings_[v].size(); ++i) {
      Dart d = rings_[v][i];
      require(d >= 0 && d < static_cast<Dart>(2 * edges_.size()), Err::MalformedRing,
              "dart id out of range");
      require(dart_pos_[d].first == -1, Err::MalformedRing, "dart appears twice");
      dart_pos_[d] = {v, static_cast<std::int32_t>(i)};
    }
  }
}

PlaneMultigraph PlaneMultigraph::build_from_rotation(int n, std::vector<Edge> edges,
                                                     std::vector<std::vector<Dart>> rings,
                                                     std::vector<std::uint8_t> alive) {
  require(n >= 0, Err::BadParams, "negative vertex count");
  require(static_cast<int>(rings.size()) == n, Err::MalformedRing, "ring count != n");
  PlaneMultigraph g;
  g.n_ = n;
  g.edges_ = std::move(edges);
  g.rings_ = std::move(rings);
  if (alive.empty())
    g.alive_.assign(g.edges_.size(), 1);
  else {
    require(alive.size() == g.edges_.size(), Err::BadParams, "alive mask size mismatch");
    g.alive_ = std::move(alive);
  }
  g.alive_count_ = 0;
  for (std::uint8_t a : g.alive_) g.alive_count_ += a;
  for (EId e = 0; e < g.edge_slots(); ++e) {
    if (!g.alive_[e]) continue;
    require(g.edges_[e].tail >= 0 && g.edges_[e].tail < n && g.edges_[e].head >= 0 &&
                g.edges_[e].head < n,
            Err::MalformedRing, "edge endpoint out of range");
  }
  g.reindex_darts();
  for (EId e = 0; e < g.edge_slots(); ++e) {
    if (!g.alive_[e]) {
      require(g.dart_pos_[tail_dart(e)].first == -1 && g.dart_pos_[head_dart(e)].first == -1,
              Err::MalformedRing, "dead edge has a dart in a ring");
      continue;
    }
    require(g.dart_pos_[tail_dart(e)].first == g.edges_[e].tail, Err::MalformedRing,
            "tail dart not in tail ring");
    require(g.dart_pos_[head_dart(e)].first == g.edges_[e].head, Err::MalformedRing,
            "head dart not in head ring");
  }
  g.validate();
  return g;
}

Dart PlaneMultigraph::rot_next(Dart d) const {
  auto [v, i] = dart_pos_[d];
  const auto& r = rings_[v];
  return r[(i + 1) % r.size()];
}

Dart PlaneMultigraph::rot_prev(Dart d) const {
  auto [v, i] = dart_pos_[d];
  const auto& r = rings_[v];
  return r[(i + r.size() - 1) % r.size()];
}

std::vector<EId> PlaneMultigraph::alive_edges() const {
  std::vector<EId> out;
  out.reserve(alive_count_);
  for (EId e = 0; e < edge_slots(); ++e)
    if (alive_[e]) out.push_back(e);
  return out;
}

std::vector<Dart> PlaneMultigraph::alive_darts() const {
  std::vector<Dart> out;
  out.reserve(2 * alive_count_);
  for (EId e = 0; e < edge_slots(); ++e)
    if (alive_[e]) {
      out.push_back(tail_dart(e));
      out.push_back(head_dart(e));
    }
  return out;
}

std::pair<std::vector<int>, int> PlaneMultigraph::components() const {
  UnionFind uf(n_);
  for (EId e = 0; e < edge_slots(); ++e)
    if (alive_[e]) uf.unite(edges_[e].tail, edges_[e].head);
  std::vector<int> label(n_, -1);
  int count = 0;
  for (VId v = 0; v < n_; ++v) {
    int r = uf.find(v);
    if (label[r] == -1) label[r] = count++;
    label[v] = label[r];
  }
  return {std::move(label), count};
}

bool PlaneMultigraph::connected() const { return n_ <= 1 || components().second == 1; }

void PlaneMultigraph::validate() const {
  // Per component with edges: n_i - m_i + f_i = 2, counting face orbits of
  // that component. Aggregated with shared unbounded faces this is the
  // textbook n - m + f = 1 + c.
  auto [label, count] = components();
  std::vector<int> nv(count, 0), me(count, 0), fo(count, 0);
  for (VId v = 0; v < n_; ++v) nv[label[v]]++;
  for (EId e = 0; e < edge_slots(); ++e)
    if (alive_[e]) me[label[edges_[e].tail]]++;

  std::vector<std::uint8_t> seen(2 * edges_.size(), 0);
  for (Dart d0 : alive_darts()) {
    if (seen[d0]) continue;
    fo[label[dart_vertex(d0)]]++;
    Dart d = d0;
    do {
      require(!seen[d], Err::MalformedRing, "face walk revisits a dart");
      seen[d] = 1;
      d = face_next(d);
    } while (d != d0);
  }
  for (int c = 0; c < count; ++c) {
    if (me[c] == 0) continue;  // isolated vertices are trivially planar
    require(nv[c] - me[c] + fo[c] == 2, Err::NonPlanarRotation,
            "Euler identity fails for a component");
  }
}

PlaneMultigraph PlaneMultigraph::remove_edge_copy(EId e) const {
  require(edge_alive(e), Err::UnknownEdge, "remove of dead edge");
  PlaneMultigraph g = *this;
  for (Dart d : {tail_dart(e), head_dart(e)}) {
    auto& r = g.rings_[g.dart_vertex(d)];
    r.erase(std::find(r.begin(), r.end(), d));
  }
  g.alive_[e] = 0;
  g.alive_count_--;
  g.reindex_darts();
  return g;
}

PlaneMultigraph PlaneMultigraph::contract_edge_copy(EId e) const {
  require(edge_alive(e), Err::UnknownEdge, "contract of dead edge");
  VId u = edges_[e].tail, v = edges_[e].head;
  if (u == v) return remove_edge_copy(e);  // contracting a loop deletes it

  // Merged ring: u's ring with the dart of e replaced by v's ring read
  // clockwise starting after e's dart at v.
  Dart du = tail_dart(e), dv = head_dart(e);
  auto [uu, iu] = dart_pos_[du];
  auto [vv, iv] = dart_pos_[dv];
  std::vector<Dart> merged;
  merged.reserve(rings_[u].size() + rings_[v].size() - 2);
  for (std::size_t i = 0; i < rings_[u].size(); ++i) {
    Dart d = rings_[u][(iu + i) % rings_[u].size()];
    if (d == du) continue;
    merged.push_back(d);
  }
  std::vector<Dart> vpart;
  for (std::size_t i = 1; i < rings_[v].size(); ++i)
    vpart.push_back(rings_[v][(iv + i) % rings_[v].size()]);
  // e's dart at u sat at ring position iu; splice v's ring there.
  merged.insert(merged.begin(), vpart.begin(), vpart.end());
  // rotate so the splice lands where du was: build explicitly instead.
  merged.clear();
  for (std::size_t i = 0; i < rings_[u].size(); ++i) {
    Dart d = rings_[u][i];
    if (d == du) {
      merged.insert(merged.end(), vpart.begin(), vpart.end());
    } else {
      merged.push_back(d);
    }
  }

  PlaneMultigraph g;
  g.n_ = n_ - 1;
  g.edges_ = edges_;
  g.alive_ = alive_;
  g.alive_count_ = alive_count_ - 1;
  g.alive_[e] = 0;
  // compact vertex ids: v disappears, ids above v shift down by one
  auto remap = [&](VId x) { return x == v ? u - (u > v ? 1 : 0) : x - (x > v ? 1 : 0); };
  for (auto& ed : g.edges_) {
    ed.tail = remap(ed.tail);
    ed.head = remap(ed.head);
  }
  g.rings_.clear();
  g.rings_.reserve(g.n_);
  for (VId x = 0; x < n_; ++x) {
    if (x == v) continue;
    if (x == u)
      g.rings_.push_back(merged);
    else
      g.rings_.push_back(rings_[x]);
  }
  g.reindex_darts();
  return g;
}

FaceStructure::FaceStructure(const PlaneMultigraph& g) {
  face_of_.assign(2 * g.edge_slots(), -1);
  for (Dart d0 : g.alive_darts()) {
    if (face_of_[d0] != -1) continue;
    FaceId f = static_cast<FaceId>(walks_.size());
    walks_.emplace_back();
    Dart d = d0;
    do {
      face_of_[d] = f;
      walks_[f].push_back(d);
      d = g.face_next(d);
    } while (d != d0);
  }
  // A walk of length 1 is a self-loop boundary: the bounding cycle meets its
  // vertex at both loop ends, so it counts as visiting the vertex twice.
  simple_.assign(walks_.size(), 1);
  std::vector<int> mark(g.vertex_count(), -1);
  for (FaceId f = 0; f < face_count(); ++f) {
    if (walks_[f].size() < 2) {
      simple_[f] = 0;
      continue;
    }
    for (Dart d : walks_[f]) {
      VId v = g.dart_vertex(d);
      if (mark[v] == f) {
        simple_[f] = 0;
        break;
      }
      mark[v] = f;
    }
  }
  // Unbounded flag: per component the face holding its smallest alive dart.
  unbounded_.assign(walks_.size(), 0);
  auto [label, count] = g.components();
  std::vector<Dart> first(count, -1);
  for (Dart d : g.alive_darts()) {
    int c = label[g.dart_vertex(d)];
    if (first[c] == -1) first[c] = d;
  }
  for (int c = 0; c < count; ++c)
    if (first[c] != -1) unbounded_[face_of_[first[c]]] = 1;
}

DualGraph dual(const PlaneMultigraph& g) {
  require(g.connected(), Err::DisconnectedInput, "dual of a disconnected graph");
  FaceStructure faces(g);
  std::vector<PlaneMultigraph::Edge> dedges(g.edge_slots());
  for (EId e = 0; e < g.edge_slots(); ++e) {
    if (!g.edge_alive(e)) continue;
    dedges[e] = {faces.left_face(e), faces.right_face(e)};
  }
  // Ring of the dual vertex f = the face walk of f; primal dart d stands for
  // the dual dart with the same id (tail dart of e* lies on left(e)).
  std::vector<std::vector<Dart>> drings(faces.face_count());
  for (FaceId f = 0; f < faces.face_count(); ++f) drings[f] = faces.walk(f);
  std::vector<std::uint8_t> alive(g.edge_slots());
  for (EId e = 0; e < g.edge_slots(); ++e) alive[e] = g.edge_alive(e);

  DualGraph d;
  d.graph = PlaneMultigraph::build_from_rotation(faces.face_count(), std::move(dedges),
                                                 std::move(drings), std::move(alive));
  return d;
}

std::vector<std::uint8_t> classify_edges_scc(const PlaneMultigraph& g) {
  // Iterative Tarjan over alive edges.
  int n = g.vertex_count();
  std::vector<std::vector<std::pair<VId, EId>>> adj(n);
  for (EId e : g.alive_edges()) adj[g.tail(e)].push_back({g.head(e), e});

  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<std::uint8_t> on_stack(n, 0);
  std::vector<VId> stack;
  int next_index = 0, comp_count = 0;
  struct Frame {
    VId v;
    std::size_t child;
  };
  for (VId root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      Frame& fr = frames.back();
      if (fr.child < adj[fr.v].size()) {
        VId w = adj[fr.v][fr.child++].first;
        if (index[w] == -1) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[fr.v] = std::min(low[fr.v], index[w]);
        }
      } else {
        if (low[fr.v] == index[fr.v]) {
          while (true) {
            VId w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            comp[w] = comp_count;
            if (w == fr.v) break;
          }
          comp_count++;
        }
        VId done = fr.v;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[done]);
      }
    }
  }

  std::vector<std::uint8_t> intra(g.edge_slots(), 0);
  for (EId e : g.alive_edges()) intra[e] = comp[g.tail(e)] == comp[g.head(e)];
  return intra;
}

bool check_remove_contract_duality(const PlaneMultigraph& g, EId e) {
  require(g.edge_alive(e), Err::UnknownEdge, "duality check on dead edge");
  {
    PlaneMultigraph removed = g.remove_edge_copy(e);
    require(removed.connected(), Err::PreconditionViolated,
            "removal disconnects the graph");
  }
  PlaneMultigraph a = dual(g.remove_edge_copy(e)).graph;
  PlaneMultigraph b = dual(g).graph.contract_edge_copy(e);

  if (a.edge_count() != b.edge_count() || a.vertex_count() != b.vertex_count()) return false;
  // Build the vertex bijection forced by the edge-id bijection.
  std::vector<VId> a2b(a.vertex_count(), -1), b2a(b.vertex_count(), -1);
  auto bind = [&](VId x, VId y) {
    if (a2b[x] == -1 && b2a[y] == -1) {
      a2b[x] = y;
      b2a[y] = x;
      return true;
    }
    return a2b[x] == y && b2a[y] == x;
  };
  for (EId j = 0; j < a.edge_slots(); ++j) {
    if (!a.edge_alive(j)) {
      if (b.edge_alive(j)) return false;
      continue;
    }
    if (!b.edge_alive(j)) return false;
    if (!bind(a.tail(j), b.tail(j))) return false;
    if (!bind(a.head(j), b.head(j))) return false;
  }
  return true;
}

}  // namespace planar_reach
