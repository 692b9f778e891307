#include "planar_reach/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace planar_reach {

namespace {

// ---------------------------------------------------------------------------
// stamped scratch maps over global ids (avoid O(n) clears per piece)

struct Stamp {
  std::vector<int> val;
  std::vector<int> stamp;
  int cur = 0;
  void ensure(std::size_t n) {
    if (val.size() < n) {
      val.resize(n, -1);
      stamp.resize(n, 0);
    }
  }
  void next() { ++cur; }
  void set(int key, int v) {
    ensure(static_cast<std::size_t>(key) + 1);
    val[key] = v;
    stamp[key] = cur;
  }
  int get(int key) const {
    return (key >= 0 && key < static_cast<int>(val.size()) && stamp[key] == cur) ? val[key] : -1;
  }
};

// ---------------------------------------------------------------------------
// local piece graph

struct Local {
  PlaneMultigraph g;
  std::vector<VId> gvert;  // local -> global vertex
  std::vector<EId> gedge;  // local -> global edge
};

// Leaves vmap/emap holding this piece's global->local maps.
Local build_local(const PlaneMultigraph& gg, const std::vector<EId>& edges, Stamp& vmap,
                  Stamp& emap) {
  Local L;
  vmap.next();
  emap.next();
  for (std::size_t i = 0; i < edges.size(); ++i) emap.set(edges[i], static_cast<int>(i));
  for (EId e : edges)
    for (VId v : {gg.tail(e), gg.head(e)})
      if (vmap.get(v) < 0) {
        vmap.set(v, 0);
        L.gvert.push_back(v);
      }
  std::sort(L.gvert.begin(), L.gvert.end());
  for (std::size_t i = 0; i < L.gvert.size(); ++i) vmap.set(L.gvert[i], static_cast<int>(i));
  L.gedge = edges;

  std::vector<PlaneMultigraph::Edge> ledges(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i)
    ledges[i] = {vmap.get(gg.tail(edges[i])), vmap.get(gg.head(edges[i]))};
  std::vector<std::vector<Dart>> rings(L.gvert.size());
  for (std::size_t lv = 0; lv < L.gvert.size(); ++lv)
    for (Dart d : gg.ring(L.gvert[lv])) {
      int le = emap.get(edge_of(d));
      if (le >= 0) rings[lv].push_back(2 * le + (d & 1));
    }
  L.g = PlaneMultigraph::build_from_rotation(static_cast<int>(L.gvert.size()), std::move(ledges),
                                             std::move(rings));
  return L;
}

// A local face is a face of the global graph iff its walk follows the global
// face permutation at every step.
std::vector<int> find_holes(const PlaneMultigraph& gg, const Local& L, const FaceStructure& lf) {
  std::vector<int> holes;
  for (FaceId f = 0; f < lf.face_count(); ++f) {
    const auto& walk = lf.walk(f);
    bool global_face = true;
    for (std::size_t i = 0; i < walk.size() && global_face; ++i) {
      Dart d = walk[i];
      Dart dn = walk[(i + 1) % walk.size()];
      Dart gd = 2 * L.gedge[edge_of(d)] + (d & 1);
      Dart gdn = 2 * L.gedge[edge_of(dn)] + (dn & 1);
      if (gg.face_next(gd) != gdn) global_face = false;
    }
    if (!global_face) holes.push_back(f);
  }
  return holes;
}

// ---------------------------------------------------------------------------
// hole triangulation; temp chords remember the hole-walk corner positions
// they join

struct TempChord {
  int hole = -1;
  int pos_a = -1;  // walk position of the tail corner
  int pos_b = -1;  // walk position of the head corner
};

struct WBuilder {
  std::vector<PlaneMultigraph::Edge> edges;
  std::vector<std::vector<Dart>> rings;
  int real_edges = 0;
  std::vector<TempChord> temps;

  VId dart_vertex(Dart d) const {
    return is_head_side(d) ? edges[edge_of(d)].head : edges[edge_of(d)].tail;
  }

  EId add_chord(int hole, const std::vector<std::pair<Dart, int>>& poly, std::size_t p,
                std::size_t q) {
    VId u = dart_vertex(poly[p].first);
    VId w = dart_vertex(poly[q].first);
    EId id = static_cast<EId>(edges.size());
    edges.push_back({u, w});
    temps.push_back({hole, poly[p].second, poly[q].second});
    auto& ru = rings[u];
    ru.insert(std::find(ru.begin(), ru.end(), poly[p].first), tail_dart(id));
    auto& rw = rings[w];
    rw.insert(std::find(rw.begin(), rw.end(), poly[q].first), head_dart(id));
    return id;
  }

  // zig-zag ear triangulation with loop-avoiding fallbacks
  void triangulate(int hole, const std::vector<Dart>& walk) {
    std::vector<std::pair<Dart, int>> poly(walk.size());
    for (std::size_t i = 0; i < walk.size(); ++i) poly[i] = {walk[i], static_cast<int>(i)};
    bool interior = true;
    int stuck = 0;
    while (poly.size() > 3) {
      auto cut_interior = [&]() {
        if (dart_vertex(poly[0].first) == dart_vertex(poly[2].first)) return false;
        EId id = add_chord(hole, poly, 0, 2);
        std::pair<Dart, int> entry{tail_dart(id), poly[0].second};
        poly.erase(poly.begin(), poly.begin() + 2);
        poly.insert(poly.begin(), entry);
        return true;
      };
      auto cut_front = [&]() {
        std::size_t r = poly.size();
        if (dart_vertex(poly[1].first) == dart_vertex(poly[r - 1].first)) return false;
        EId id = add_chord(hole, poly, 1, r - 1);
        std::pair<Dart, int> entry{head_dart(id), poly[r - 1].second};
        poly.pop_back();
        poly.erase(poly.begin());
        poly.insert(poly.begin(), entry);
        return true;
      };
      bool cut = interior ? (cut_interior() || cut_front()) : (cut_front() || cut_interior());
      if (cut) {
        interior = !interior;
        stuck = 0;
        continue;
      }
      require(++stuck <= static_cast<int>(poly.size()), Err::PreconditionViolated,
              "hole cannot be triangulated without loops");
      poly.push_back(poly.front());
      poly.erase(poly.begin());
    }
  }
};

// ---------------------------------------------------------------------------
// offline Tarjan LCA

void offline_lca(int n, const std::vector<int>& parent,
                 const std::vector<std::vector<int>>& kids,
                 const std::vector<std::pair<int, int>>& queries, int root,
                 std::vector<int>& out) {
  std::vector<std::vector<int>> bucket(n);
  for (std::size_t q = 0; q < queries.size(); ++q) {
    bucket[queries[q].first].push_back(static_cast<int>(q));
    bucket[queries[q].second].push_back(static_cast<int>(q));
  }
  std::vector<int> uf(n), anc(n, -1);
  std::vector<std::uint8_t> done(n, 0);
  std::iota(uf.begin(), uf.end(), 0);
  auto find = [&](int x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  out.assign(queries.size(), -1);
  std::vector<std::pair<int, int>> stack{{root, 0}};
  while (!stack.empty()) {
    auto& [v, ci] = stack.back();
    if (ci == 0) anc[v] = v;
    if (ci < static_cast<int>(kids[v].size())) {
      int c = kids[v][ci++];
      stack.push_back({c, 0});
      continue;
    }
    done[v] = 1;
    for (int q : bucket[v]) {
      int other = queries[q].first == v ? queries[q].second : queries[q].first;
      if (done[other] && out[q] == -1) out[q] = anc[find(other)];
    }
    int pv = parent[v];
    stack.pop_back();
    if (pv >= 0) {
      uf[find(v)] = find(pv);
      anc[find(pv)] = pv;
    }
  }
}

// ---------------------------------------------------------------------------
// separator search

struct WeightSpec {
  std::vector<long long> vertex;  // per local vertex (may be empty)
  std::vector<long long> face;    // per W face (may be empty)
};

struct SepChoice {
  bool found = false;
  std::vector<VId> cycle_local;
  std::vector<EId> cycle_wedges;      // W edge joining cycle[i] and cycle[i+1]
  std::vector<std::uint8_t> face_in;  // per W face
  long long in_w = 0, out_w = 0, cyc_w = 0, total_w = 0;
};

SepChoice find_separator(const PlaneMultigraph& w, const FaceStructure& wf, int real_edges,
                         const std::vector<TempChord>& temps, int hole_count,
                         const WeightSpec& ws, bool strict_edge_progress,
                         int root_attempt = 0, bool must_cross_hole = false) {
  SepChoice out;
  int n = w.vertex_count();
  if (n < 2) return out;

  // shortest-path tree that prefers real edges over hole-fill chords, so
  // fundamental cycles cross holes only when they must (weights 2/3 via a
  // small bucket queue); depth is reported in hops for the length bounds
  auto bfs = [&](VId root, std::vector<int>& parent, std::vector<int>& pedge,
                 std::vector<int>& depth, std::vector<int>& order) {
    parent.assign(n, -1);
    pedge.assign(n, -1);
    depth.assign(n, -1);
    order.clear();
    order.reserve(n);
    std::vector<int> dist(n, -1);
    std::vector<std::vector<VId>> bucket(4);
    dist[root] = 0;
    bucket[0].push_back(root);
    std::vector<std::uint8_t> popped(n, 0);
    for (int d0 = 0; !bucket[0].empty() || !bucket[1].empty() || !bucket[2].empty() ||
                     !bucket[3].empty();) {
      while (bucket[d0 & 3].empty()) ++d0;
      VId v = bucket[d0 & 3].back();
      bucket[d0 & 3].pop_back();
      if (popped[v] || dist[v] != d0) continue;
      popped[v] = 1;
      order.push_back(v);
      for (Dart d : w.ring(v)) {
        VId u = w.dart_target(d);
        int wgt = edge_of(d) >= real_edges ? 3 : 2;
        if (dist[u] == -1 || dist[v] + wgt < dist[u]) {
          if (popped[u]) continue;
          dist[u] = dist[v] + wgt;
          parent[u] = v;
          pedge[u] = edge_of(d);
          bucket[dist[u] & 3].push_back(u);
        }
      }
    }
    for (VId v : order) depth[v] = parent[v] < 0 ? 0 : depth[parent[v]] + 1;
  };
  std::vector<int> parent, pedge, depth, order;
  bfs(0, parent, pedge, depth, order);
  require(static_cast<int>(order.size()) == n, Err::PreconditionViolated, "piece disconnected");
  VId far1 = order.back();
  bfs(far1, parent, pedge, depth, order);
  VId far2 = order.back();
  VId mid = far2;
  for (int i = 0; i < depth[far2] / 2; ++i) mid = parent[mid];
  std::array<VId, 4> roots{mid, far2, far1, 0};
  bfs(roots[root_attempt % 4], parent, pedge, depth, order);
  VId chosen_root = roots[root_attempt % 4];

  std::vector<std::uint8_t> tree_edge(w.edge_slots(), 0);
  for (VId v = 0; v < n; ++v)
    if (pedge[v] >= 0) tree_edge[pedge[v]] = 1;
  std::vector<EId> candidates;
  for (EId e = 0; e < w.edge_slots(); ++e)
    if (w.edge_alive(e) && !tree_edge[e]) candidates.push_back(e);
  if (candidates.empty()) return out;

  // interdigitating dual tree across the non-tree edges
  int fcount = wf.face_count();
  std::vector<std::vector<std::pair<int, EId>>> dadj(fcount);
  for (EId e : candidates) {
    dadj[wf.face_of(tail_dart(e))].push_back({wf.face_of(head_dart(e)), e});
    dadj[wf.face_of(head_dart(e))].push_back({wf.face_of(tail_dart(e)), e});
  }
  std::vector<int> dparent(fcount, -2), dvia(fcount, -1), dorder;
  dorder.reserve(fcount);
  dparent[0] = -1;
  dorder.push_back(0);
  for (std::size_t qi = 0; qi < dorder.size(); ++qi) {
    int f = dorder[qi];
    for (auto [f2, e] : dadj[f])
      if (dparent[f2] == -2) {
        dparent[f2] = f;
        dvia[f2] = e;
        dorder.push_back(f2);
      }
  }
  require(static_cast<int>(dorder.size()) == fcount, Err::PreconditionViolated,
          "dual tree does not span the faces");
  std::vector<int> dtin(fcount), dtout(fcount);
  {
    std::vector<std::vector<int>> dkids(fcount);
    for (int f : dorder)
      if (dparent[f] >= 0) dkids[dparent[f]].push_back(f);
    int t = 0;
    std::vector<std::pair<int, int>> stack{{0, 0}};
    while (!stack.empty()) {
      auto& [f, ci] = stack.back();
      if (ci == 0) dtin[f] = t++;
      if (ci < static_cast<int>(dkids[f].size())) {
        int c = dkids[f][ci++];
        stack.push_back({c, 0});
      } else {
        dtout[f] = t;
        stack.pop_back();
      }
    }
  }
  std::vector<EId> child_face(w.edge_slots(), -1);
  for (int f : dorder)
    if (dvia[f] >= 0) child_face[dvia[f]] = f;
  for (EId e : candidates)
    require(child_face[e] != -1, Err::PreconditionViolated, "candidate without a dual edge");

  // subtree sums of estimate weights; vertex weights are parked on one
  // incident face each and corrected exactly per chosen candidate
  std::vector<long long> fsum(fcount, 0);
  long long totalw = 0;
  if (!ws.face.empty())
    for (int f = 0; f < fcount; ++f) {
      fsum[f] += ws.face[f];
      totalw += ws.face[f];
    }
  if (!ws.vertex.empty())
    for (VId v = 0; v < n; ++v) {
      totalw += ws.vertex[v];
      fsum[wf.face_of(w.ring(v)[0])] += ws.vertex[v];
    }
  for (auto it = dorder.rbegin(); it != dorder.rend(); ++it)
    if (dparent[*it] >= 0) fsum[dparent[*it]] += fsum[*it];

  std::vector<std::pair<int, int>> queries(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i)
    queries[i] = {w.tail(candidates[i]), w.head(candidates[i])};
  std::vector<std::vector<int>> kids(n);
  for (VId v : order)
    if (parent[v] >= 0) kids[parent[v]].push_back(v);
  std::vector<int> lca;
  offline_lca(n, parent, kids, queries, chosen_root, lca);

  // exact per-candidate count of real edges strictly inside: a real edge
  // lies inside iff the dual-tree lca of its two faces does
  std::vector<long long> esum(fcount, 0);
  {
    std::vector<std::pair<int, int>> equeries;
    equeries.reserve(real_edges);
    for (EId e = 0; e < real_edges; ++e)
      equeries.push_back({wf.face_of(tail_dart(e)), wf.face_of(head_dart(e))});
    std::vector<std::vector<int>> dkids2(fcount);
    for (int f : dorder)
      if (dparent[f] >= 0) dkids2[dparent[f]].push_back(f);
    std::vector<int> elca;
    offline_lca(fcount, dparent, dkids2, equeries, 0, elca);
    for (EId e = 0; e < real_edges; ++e) esum[elca[e]] += 1;
    for (auto it = dorder.rbegin(); it != dorder.rend(); ++it)
      if (dparent[*it] >= 0) esum[dparent[*it]] += esum[*it];
  }

  std::vector<std::vector<int>> hole_pref(hole_count, std::vector<int>(n, 0));
  for (VId v : order) {
    if (parent[v] < 0) continue;
    for (int h = 0; h < hole_count; ++h) hole_pref[h][v] = hole_pref[h][parent[v]];
    if (pedge[v] >= real_edges) hole_pref[temps[pedge[v] - real_edges].hole][v]++;
  }

  struct Scored {
    long long score;
    long long eimb;
    int len;
    std::size_t idx;
  };
  std::vector<Scored> scored;
  scored.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    EId e = candidates[i];
    auto [x, y] = queries[i];
    int l = lca[i];
    int len = depth[x] + depth[y] - 2 * depth[l] + 1;
    if (len < 2) continue;
    bool valid = true;
    int temps_on_cycle = 0;
    for (int h = 0; h < hole_count && valid; ++h) {
      int cnt = hole_pref[h][x] + hole_pref[h][y] - 2 * hole_pref[h][l];
      if (e >= real_edges && temps[e - real_edges].hole == h) cnt++;
      if (cnt > 1) valid = false;
      temps_on_cycle += cnt;
    }
    if (!valid) continue;
    if (must_cross_hole && temps_on_cycle == 0) continue;
    long long in_edges = esum[child_face[e]];
    long long real_parts = len - temps_on_cycle;
    long long out_edges = real_edges - in_edges - real_parts;
    // both children must strictly shrink
    (void)strict_edge_progress;
    if (in_edges < 1 || out_edges < 1) continue;
    long long inside = fsum[child_face[e]];
    // quantize the balance estimate so cycle length decides among
    // comparably balanced candidates (shorter cycles keep boundaries small)
    long long score = std::max(inside, totalw - inside);
    long long bucket = totalw > 0 ? (score * 12) / totalw : 0;
    scored.push_back({bucket, std::max(in_edges, out_edges), len, i});
  }
  if (scored.empty()) return out;
  std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score < b.score;
    // balanced buckets: prefer short cycles; degenerate buckets: prefer the
    // most edge-balanced cut so ribbon-shaped pieces halve instead of
    // shedding slivers
    if (a.score >= 8) {
      if (a.eimb != b.eimb) return a.eimb < b.eimb;
      if (a.len != b.len) return a.len < b.len;
    } else {
      if (a.len != b.len) return a.len < b.len;
      if (a.eimb != b.eimb) return a.eimb < b.eimb;
    }
    return a.idx < b.idx;
  });
  if (log_level() >= 2 && real_edges > 500)
    log_debug("[sep] cands=" + std::to_string(candidates.size()) +
              " valid=" + std::to_string(scored.size()) +
              " bestBucket=" + std::to_string(scored[0].score) +
              " bestLen=" + std::to_string(scored[0].len) +
              " bestEimb=" + std::to_string(scored[0].eimb) + "/" +
              std::to_string(real_edges));

  auto evaluate = [&](EId e, SepChoice& sc) {
    int cf = child_face[e];
    sc.face_in.assign(fcount, 0);
    for (int f = 0; f < fcount; ++f)
      sc.face_in[f] = dtin[f] >= dtin[cf] && dtin[f] < dtout[cf];
    sc.in_w = sc.out_w = sc.cyc_w = 0;
    if (!ws.vertex.empty())
      for (VId v = 0; v < n; ++v) {
        bool any_in = false, any_out = false;
        for (Dart d : w.ring(v)) (sc.face_in[wf.face_of(d)] ? any_in : any_out) = true;
        if (any_in && any_out)
          sc.cyc_w += ws.vertex[v];
        else if (any_in)
          sc.in_w += ws.vertex[v];
        else
          sc.out_w += ws.vertex[v];
      }
    if (!ws.face.empty())
      for (int f = 0; f < fcount; ++f) (sc.face_in[f] ? sc.in_w : sc.out_w) += ws.face[f];
    sc.total_w = totalw;
  };

  const long long limit = (2 * totalw + 2) / 3;
  SepChoice best;
  EId best_edge = -1;
  long long best_score = -1;
  int tries = 0;
  for (const Scored& s : scored) {
    if (++tries > 64 && best.found) break;
    SepChoice sc;
    sc.found = true;
    evaluate(candidates[s.idx], sc);
    long long exact = std::max(sc.in_w, sc.out_w);
    if (!best.found || exact < best_score) {
      best = std::move(sc);
      best_score = exact;
      best_edge = candidates[s.idx];
    }
    if (best_score <= limit) break;
  }
  if (best_score > limit)
    log_info("separator balance above 2/3: " + std::to_string(best_score) + "/" +
             std::to_string(totalw));

  // fundamental cycle of the chosen edge: x .. lca .. y, closed by y -> x
  VId x = w.tail(best_edge), y = w.head(best_edge);
  std::vector<VId> up_x{x}, up_y{y};
  {
    VId a = x, b = y;
    while (depth[a] > depth[b]) up_x.push_back(a = parent[a]);
    while (depth[b] > depth[a]) up_y.push_back(b = parent[b]);
    while (a != b) {
      up_x.push_back(a = parent[a]);
      up_y.push_back(b = parent[b]);
    }
  }
  // both chains end at the lca
  best.cycle_local = up_x;
  for (auto it = up_y.rbegin() + 1; it != up_y.rend(); ++it) best.cycle_local.push_back(*it);
  best.cycle_wedges.clear();
  for (std::size_t i = 0; i + 1 < best.cycle_local.size(); ++i) {
    VId a = best.cycle_local[i], b = best.cycle_local[i + 1];
    best.cycle_wedges.push_back(parent[a] == b ? pedge[a] : pedge[b]);
  }
  best.cycle_wedges.push_back(best_edge);
  return best;
}

// ---------------------------------------------------------------------------
// expansion machinery

struct ExpCircle {
  VId owner = -1;
  std::vector<VId> verts;  // clockwise cyclic
  std::vector<EId> edges;  // edges[i] runs verts[i] -> verts[i+1 mod size]
  std::vector<EId> tag;    // fragment edge per vertex, or -1 for extras
};

struct ExpState {
  std::vector<ExpCircle> circles;                       // sorted by owner
  std::vector<std::pair<EId, std::vector<EId>>> rungs;  // per edge, left-to-right
  std::vector<VId> boundary;                            // sorted

  ExpCircle& circle(VId owner) {
    auto it = std::lower_bound(circles.begin(), circles.end(), owner,
                               [](const ExpCircle& c, VId o) { return c.owner < o; });
    require(it != circles.end() && it->owner == owner, Err::PreconditionViolated,
            "missing circle");
    return *it;
  }
  std::vector<EId>& rung_list(EId e) {
    auto it = std::lower_bound(rungs.begin(), rungs.end(), e,
                               [](const auto& r, EId x) { return r.first < x; });
    require(it != rungs.end() && it->first == e, Err::PreconditionViolated, "missing rungs");
    return it->second;
  }
  long long edge_count() const {
    long long s = 0;
    for (const auto& c : circles) s += static_cast<long long>(c.edges.size());
    for (const auto& r : rungs) s += static_cast<long long>(r.second.size());
    return s;
  }
};

struct ExpBuilder {
  std::vector<PlaneMultigraph::Edge> edges;
  std::vector<std::uint8_t> alive;
  std::vector<EdgeClass> cls;
  std::vector<std::vector<Dart>> rings;
  std::vector<VId> orig;

  VId add_vertex(VId owner) {
    orig.push_back(owner);
    rings.emplace_back();
    return static_cast<VId>(orig.size() - 1);
  }
  EId add_edge(VId t, VId h, EdgeClass c) {
    edges.push_back({t, h});
    alive.push_back(1);
    cls.push_back(c);
    return static_cast<EId>(edges.size() - 1);
  }
  void retire_edge(EId e) { alive[e] = 0; }  // darts must already be replaced
  void replace_dart(VId v, Dart old_d, Dart new_d) {
    auto& r = rings[v];
    *std::find(r.begin(), r.end(), old_d) = new_d;
  }
  void insert_after(VId v, Dart pos, std::initializer_list<Dart> fresh) {
    auto& r = rings[v];
    auto it = std::find(r.begin(), r.end(), pos);
    require(it != r.end(), Err::PreconditionViolated, "ring position missing");
    r.insert(it + 1, fresh);
  }
};

// cyclic run of circle positions carrying the given tag
struct FragRun {
  int first = -1;
  int last = -1;
  int len = 0;
};

FragRun frag_run(const ExpCircle& c, EId tag) {
  int n = static_cast<int>(c.verts.size());
  std::vector<int> pos;
  for (int i = 0; i < n; ++i)
    if (c.tag[i] == tag) pos.push_back(i);
  require(!pos.empty(), Err::PreconditionViolated, "fragment not on circle");
  FragRun r;
  r.len = static_cast<int>(pos.size());
  if (r.len == n) {
    r.first = 0;
    r.last = n - 1;
    return r;
  }
  std::vector<std::uint8_t> in(n, 0);
  for (int p : pos) in[p] = 1;
  for (int p : pos)
    if (!in[(p + n - 1) % n]) {
      r.first = p;
      break;
    }
  r.last = (r.first + r.len - 1) % n;
  for (int i = 0; i < r.len; ++i)
    require(in[(r.first + i) % n], Err::PreconditionViolated, "fragment not contiguous");
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// DecompTree helpers

std::vector<EId> DecompTree::piece_edges(int id) const {
  const Piece& p = pieces[id];
  if (p.is_leaf()) return p.edges;
  std::vector<EId> out;
  for (int li = p.leaf_lo; li < p.leaf_hi; ++li) {
    const auto& le = pieces[leaves[li]].edges;
    out.insert(out.end(), le.begin(), le.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<VId> DecompTree::piece_vertices(int id) const {
  std::vector<VId> out;
  for (EId e : piece_edges(id)) {
    out.push_back(graph->tail(e));
    out.push_back(graph->head(e));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

long long DecompTree::sum_boundary_sq() const {
  long long s = 0;
  for (const auto& p : pieces)
    s += static_cast<long long>(p.boundary.size()) * static_cast<long long>(p.boundary.size());
  return s;
}

// ---------------------------------------------------------------------------
// recursive builder

namespace {

struct BuildState {
  const PlaneMultigraph* gg = nullptr;
  DecompConfig cfg;
  bool expand = false;
  ExpBuilder exp;
  std::vector<Piece> pieces;
  std::vector<int> leaves;
  Stamp vmap, emap, bstamp, g2stamp;
};

struct Ctx {
  std::vector<EId> edges;  // sorted
  std::vector<VId> boundary;
  int level = 0;
  int parent = -1;
  ExpState exp;
};

int make_leaf(BuildState& st, Ctx& ctx) {
  int id = static_cast<int>(st.pieces.size());
  st.pieces.emplace_back();
  Piece& p = st.pieces.back();
  p.id = id;
  p.parent = ctx.parent;
  p.level = ctx.level;
  p.boundary = st.expand ? ctx.exp.boundary : ctx.boundary;
  p.leaf_lo = static_cast<int>(st.leaves.size());
  p.leaf_hi = p.leaf_lo + 1;
  st.leaves.push_back(id);
  p.base_edge_count = static_cast<int>(ctx.edges.size());
  if (st.expand) {
    for (const auto& c : ctx.exp.circles)
      p.edges.insert(p.edges.end(), c.edges.begin(), c.edges.end());
    for (const auto& r : ctx.exp.rungs)
      p.edges.insert(p.edges.end(), r.second.begin(), r.second.end());
    std::sort(p.edges.begin(), p.edges.end());
  } else {
    p.edges = ctx.edges;
  }
  p.edge_count = static_cast<int>(p.edges.size());
  return id;
}

int count_holes_of(BuildState& st, const std::vector<EId>& edges) {
  Local L = build_local(*st.gg, edges, st.vmap, st.emap);
  FaceStructure lf(L.g);
  return static_cast<int>(find_holes(*st.gg, L, lf).size());
}

// splits the piece's edges along the separator; cycle edge-parts go to both
void split_edges(const Local& L, const FaceStructure& wf, const SepChoice& sep,
                 const std::vector<std::uint8_t>& wedge_on_cycle, std::array<Ctx, 2>& kid) {
  auto face_side = [&](int f) { return sep.face_in[f] ? 0 : 1; };
  for (EId le = 0; le < static_cast<EId>(L.gedge.size()); ++le) {
    if (wedge_on_cycle[le]) {
      kid[0].edges.push_back(L.gedge[le]);
      kid[1].edges.push_back(L.gedge[le]);
      continue;
    }
    int s1 = face_side(wf.face_of(tail_dart(le)));
    int s2 = face_side(wf.face_of(head_dart(le)));
    require(s1 == s2, Err::PreconditionViolated, "non-cycle edge straddles the separator");
    kid[s1].edges.push_back(L.gedge[le]);
  }
  for (int s = 0; s < 2; ++s) std::sort(kid[s].edges.begin(), kid[s].edges.end());
}

// graph-level child boundaries: bnd(child) = V(child) cap (V(sib) + bnd(H))
void split_boundaries(BuildState& st, const Ctx& ctx, std::array<Ctx, 2>& kid) {
  const PlaneMultigraph& gg = *st.gg;
  st.bstamp.next();
  for (VId b : ctx.boundary) st.bstamp.set(b, 1);
  for (int s = 0; s < 2; ++s) {
    st.vmap.next();
    for (EId e : kid[1 - s].edges) {
      st.vmap.set(gg.tail(e), 1);
      st.vmap.set(gg.head(e), 1);
    }
    std::vector<VId> out;
    for (EId e : kid[s].edges)
      for (VId v : {gg.tail(e), gg.head(e)})
        if (st.vmap.get(v) >= 0 || st.bstamp.get(v) >= 0) out.push_back(v);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    kid[s].boundary = std::move(out);
  }
}

// ---------------------------------------------------------------------------
// expansion split: realize the separator inside the circle expansion

struct CrossPoint {
  VId vert = -1;
  Dart wdart = -1;  // W dart at the cycle vertex, for side lookups
};

void expansion_split(BuildState& st, Ctx& ctx, const Local& L, const PlaneMultigraph& w,
                     const WBuilder& wb, const FaceStructure& wf, const SepChoice& sep,
                     const std::vector<std::vector<Dart>>& hole_walks,
                     const std::vector<std::uint8_t>& wedge_on_cycle, std::array<Ctx, 2>& kid) {
  const PlaneMultigraph& gg = *st.gg;
  ExpBuilder& b = st.exp;
  const int k = static_cast<int>(sep.cycle_local.size());

  auto in_piece = [&](EId ge) { return ge >= 0 && st.emap.get(ge) >= 0; };

  // subdivision of an edge-part fragment (always of size 2 before the split)
  auto subdivide = [&](ExpCircle& c, EId ge) -> VId {
    FragRun run = frag_run(c, ge);
    require(run.len == 2, Err::PreconditionViolated, "edge-part fragment not of size 2");
    int pa = run.first;
    VId fa = c.verts[pa];
    VId fb = c.verts[run.last];
    EId old_arc = c.edges[pa];
    require(b.edges[old_arc].tail == fa && b.edges[old_arc].head == fb,
            Err::PreconditionViolated, "circle arc not cw-aligned");
    VId x = b.add_vertex(c.owner);
    EId a1 = b.add_edge(fa, x, EdgeClass::E0);
    EId a2 = b.add_edge(x, fb, EdgeClass::E0);
    b.replace_dart(fa, tail_dart(old_arc), tail_dart(a1));
    b.replace_dart(fb, head_dart(old_arc), head_dart(a2));
    b.retire_edge(old_arc);
    b.rings[x] = {tail_dart(a2), head_dart(a1)};  // [next, prev]; rungs prepended later
    c.verts.insert(c.verts.begin() + pa + 1, x);
    c.tag.insert(c.tag.begin() + pa + 1, ge);
    c.edges[pa] = a1;
    c.edges.insert(c.edges.begin() + pa + 1, a2);
    return x;
  };

  // crossing vertex for a hole-part at corner occurrence `pos` of hole h
  auto pick_crossing = [&](int h, int pos) -> VId {
    const auto& walk = hole_walks[h];
    int sz = static_cast<int>(walk.size());
    Dart d_out = walk[pos];
    Dart d_in = walk[(pos + sz - 1) % sz];
    EId le_out = edge_of(d_out), le_in = edge_of(d_in);
    VId lv = L.g.dart_vertex(d_out);
    ExpCircle& c = ctx.exp.circle(L.gvert[lv]);
    if (le_in == le_out) {
      // pendant corner: any extra vertex of this piece's circle
      for (std::size_t i = 0; i < c.verts.size(); ++i)
        if (!in_piece(c.tag[i])) return c.verts[i];
      fail(Err::PreconditionViolated, "pendant cycle vertex has no extra vertex");
    }
    require(!(wedge_on_cycle[le_out] && wedge_on_cycle[le_in]), Err::PreconditionViolated,
            "both corner edges on the separator");
    if (wedge_on_cycle[le_out]) {
      FragRun run = frag_run(c, L.gedge[le_in]);
      return c.verts[run.last];  // corner-adjacent end of the arriving fragment
    }
    FragRun run = frag_run(c, L.gedge[le_out]);
    return c.verts[run.first];  // corner-adjacent end of the departing fragment
  };

  std::vector<CrossPoint> in_cross(k), out_cross(k);
  for (int i = 0; i < k; ++i) {
    int j = (i + 1) % k;
    EId we = sep.cycle_wedges[i];
    VId from_lv = sep.cycle_local[i], to_lv = sep.cycle_local[j];
    bool from_is_tail = wb.edges[we].tail == from_lv;
    require(from_is_tail || wb.edges[we].head == from_lv, Err::PreconditionViolated,
            "cycle edge does not touch its from-vertex");
    out_cross[i].wdart = from_is_tail ? tail_dart(we) : head_dart(we);
    in_cross[j].wdart = from_is_tail ? head_dart(we) : tail_dart(we);
    if (we < wb.real_edges) {
      EId ge = L.gedge[we];
      VId x = subdivide(ctx.exp.circle(gg.tail(ge)), ge);
      VId y = subdivide(ctx.exp.circle(gg.head(ge)), ge);
      EId ra = b.add_edge(x, y, EdgeClass::Filler);  // left of the pair
      EId rb = b.add_edge(x, y, EdgeClass::Filler);
      // tail ring [A, B, next, prev]; head ring [B, A, next, prev]
      b.rings[x].push_back(tail_dart(ra));
      b.rings[x].push_back(tail_dart(rb));
      std::rotate(b.rings[x].begin(), b.rings[x].begin() + 2, b.rings[x].end());
      b.rings[y].push_back(head_dart(rb));
      b.rings[y].push_back(head_dart(ra));
      std::rotate(b.rings[y].begin(), b.rings[y].begin() + 2, b.rings[y].end());
      auto& list = ctx.exp.rung_list(ge);
      require(list.size() == 2, Err::PreconditionViolated, "rung list not of size 2");
      list = {list[0], ra, rb, list[1]};
      bool from_is_edge_tail = gg.tail(ge) == L.gvert[from_lv];
      out_cross[i].vert = from_is_edge_tail ? x : y;
      in_cross[j].vert = from_is_edge_tail ? y : x;
    } else {
      const TempChord& t = wb.temps[we - wb.real_edges];
      int pos_from = wb.edges[we].tail == from_lv ? t.pos_a : t.pos_b;
      int pos_to = wb.edges[we].tail == to_lv ? t.pos_a : t.pos_b;
      out_cross[i].vert = pick_crossing(t.hole, pos_from);
      in_cross[j].vert = pick_crossing(t.hole, pos_to);
    }
  }

  auto face_side = [&](int f) { return sep.face_in[f] ? 0 : 1; };
  st.g2stamp.next();
  for (VId pb : ctx.exp.boundary) st.g2stamp.set(pb, 1);
  std::array<std::vector<VId>, 2> kid_bnd;
  auto give_circle = [&](int side, ExpCircle&& c) {
    for (VId v : c.verts)
      if (st.g2stamp.get(v) >= 0) kid_bnd[side].push_back(v);
    kid[side].exp.circles.push_back(std::move(c));
  };

  std::vector<std::uint8_t> on_cycle_local(L.g.vertex_count(), 0);
  for (VId lv : sep.cycle_local) on_cycle_local[lv] = 1;

  // chord pairs and circle splits at the cycle vertices
  for (int i = 0; i < k; ++i) {
    ExpCircle& c = ctx.exp.circle(L.gvert[sep.cycle_local[i]]);
    VId va = in_cross[i].vert, vb = out_cross[i].vert;
    require(va != vb, Err::PreconditionViolated, "coinciding crossing vertices");
    int n = static_cast<int>(c.verts.size());
    int pa = static_cast<int>(std::find(c.verts.begin(), c.verts.end(), va) - c.verts.begin());
    int pb = static_cast<int>(std::find(c.verts.begin(), c.verts.end(), vb) - c.verts.begin());
    require(pa < n && pb < n, Err::PreconditionViolated, "crossing vertex not on circle");
    require((pa + 1) % n != pb && (pb + 1) % n != pa, Err::PreconditionViolated,
            "crossing vertices adjacent on the circle");

    EId e_ba = b.add_edge(vb, va, EdgeClass::E0);  // closes the cw arc a..b
    EId e_ab = b.add_edge(va, vb, EdgeClass::E0);  // closes the cw arc b..a
    b.insert_after(va, tail_dart(c.edges[pa]), {head_dart(e_ba), tail_dart(e_ab)});
    b.insert_after(vb, tail_dart(c.edges[pb]), {head_dart(e_ab), tail_dart(e_ba)});

    auto build_arc = [&](int from, int to, EId closing) {
      ExpCircle arc;
      arc.owner = c.owner;
      for (int p = from;; p = (p + 1) % n) {
        arc.verts.push_back(c.verts[p]);
        arc.tag.push_back(c.tag[p]);
        if (p == to) break;
        arc.edges.push_back(c.edges[p]);
      }
      arc.edges.push_back(closing);
      return arc;
    };
    int side1 = face_side(wf.face_of(w.rot_next(in_cross[i].wdart)));
    int side2 = face_side(wf.face_of(w.rot_next(out_cross[i].wdart)));
    require(side1 != side2, Err::PreconditionViolated, "circle arcs land on one side");
    give_circle(side1, build_arc(pa, pb, e_ba));
    give_circle(side2, build_arc(pb, pa, e_ab));
    for (int s = 0; s < 2; ++s) {
      kid_bnd[s].push_back(va);
      kid_bnd[s].push_back(vb);
    }
  }

  // circles off the cycle follow their edges
  for (ExpCircle& c : ctx.exp.circles) {
    int lv = st.vmap.get(c.owner);
    require(lv >= 0, Err::PreconditionViolated, "circle owner not in piece");
    if (on_cycle_local[lv]) continue;
    Dart d0 = L.g.ring(lv)[0];
    require(!wedge_on_cycle[edge_of(d0)], Err::PreconditionViolated,
            "off-cycle vertex touches a cycle edge");
    give_circle(face_side(wf.face_of(d0)), std::move(c));
  }

  // rung lists
  for (auto& [ge, list] : ctx.exp.rungs) {
    int le = st.emap.get(ge);
    require(le >= 0, Err::PreconditionViolated, "rung edge not in piece");
    if (wedge_on_cycle[le]) {
      require(list.size() == 4, Err::PreconditionViolated, "split rung list not of size 4");
      int left_side = face_side(wf.face_of(tail_dart(le)));
      kid[left_side].exp.rungs.push_back({ge, {list[0], list[1]}});
      kid[1 - left_side].exp.rungs.push_back({ge, {list[2], list[3]}});
    } else {
      int s1 = face_side(wf.face_of(tail_dart(le)));
      kid[s1].exp.rungs.push_back({ge, std::move(list)});
    }
  }

  for (int s = 0; s < 2; ++s) {
    std::sort(kid[s].exp.circles.begin(), kid[s].exp.circles.end(),
              [](const ExpCircle& x, const ExpCircle& y) { return x.owner < y.owner; });
    std::sort(kid[s].exp.rungs.begin(), kid[s].exp.rungs.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    std::sort(kid_bnd[s].begin(), kid_bnd[s].end());
    kid_bnd[s].erase(std::unique(kid_bnd[s].begin(), kid_bnd[s].end()), kid_bnd[s].end());
    kid[s].exp.boundary = std::move(kid_bnd[s]);
  }
}

int build_piece(BuildState& st, Ctx ctx) {
  const PlaneMultigraph& gg = *st.gg;
  long long size_now = static_cast<long long>(ctx.edges.size());
  if (size_now <= st.cfg.leaf_threshold) return make_leaf(st, ctx);

  Local L = build_local(gg, ctx.edges, st.vmap, st.emap);
  FaceStructure lf(L.g);
  std::vector<int> holes = find_holes(gg, L, lf);
  if (static_cast<int>(holes.size()) > st.cfg.hole_cap)
    log_info("piece " + std::to_string(st.pieces.size()) + " exceeds the hole cap (" +
             std::to_string(holes.size()) + ")");
  std::vector<std::vector<Dart>> hole_walks;
  for (int f : holes) hole_walks.push_back(lf.walk(f));

  WBuilder wb;
  wb.edges.resize(L.g.edge_slots());
  for (EId e = 0; e < L.g.edge_slots(); ++e) wb.edges[e] = L.g.edge(e);
  wb.rings.resize(L.g.vertex_count());
  for (VId v = 0; v < L.g.vertex_count(); ++v) wb.rings[v] = L.g.ring(v);
  wb.real_edges = L.g.edge_slots();
  for (std::size_t h = 0; h < hole_walks.size(); ++h)
    if (hole_walks[h].size() > 3) wb.triangulate(static_cast<int>(h), hole_walks[h]);
  PlaneMultigraph w =
      PlaneMultigraph::build_from_rotation(L.g.vertex_count(), wb.edges, wb.rings);
  FaceStructure wf(w);

  // the three weight modes, precomputed while vmap maps this piece
  WeightSpec ws_vertex, ws_boundary, ws_holes;
  ws_vertex.vertex.assign(w.vertex_count(), 1);
  long long base_total = 0;
  for (long long x : ws_vertex.vertex) base_total += x;
  // boundary and hole balancing keep the base weights as a tiebreaker so a
  // degenerate priority term (e.g. the whole boundary on the cycle) still
  // yields a size-balanced split
  if (!ctx.boundary.empty()) {
    ws_boundary.vertex = ws_vertex.vertex;
    for (VId bv : ctx.boundary) {
      int lv = st.vmap.get(bv);
      if (lv >= 0) ws_boundary.vertex[lv] += base_total + 1;
    }
  }
  if (holes.size() >= 2) {
    ws_holes.vertex = ws_vertex.vertex;
    ws_holes.face.assign(wf.face_count(), 0);
    std::vector<std::uint8_t> done(holes.size(), 0);
    for (std::size_t t = 0; t < wb.temps.size(); ++t) {
      int h = wb.temps[t].hole;
      if (done[h]) continue;
      done[h] = 1;
      ws_holes.face[wf.face_of(tail_dart(wb.real_edges + static_cast<EId>(t)))] += base_total + 1;
    }
    for (std::size_t h = 0; h < holes.size(); ++h)
      if (!done[h]) ws_holes.face[wf.face_of(hole_walks[h][0])] += base_total + 1;
  }
  auto spec_for = [&](int mode) -> const WeightSpec& {
    if (mode == 1 && !ws_boundary.vertex.empty()) return ws_boundary;
    if (mode == 2 && !ws_holes.face.empty()) return ws_holes;
    return ws_vertex;
  };

  // balance holes proactively once several have accumulated; once a piece
  // has two or more holes the separator must cross one so that splits merge
  // holes instead of stacking new ones
  int mode = static_cast<int>(holes.size()) >= 3 ? 2 : ctx.level % 3;
  bool cross = holes.size() >= 2 && !wb.temps.empty();
  SepChoice sep;
  for (int attempt = 0; attempt < 4 && !sep.found; ++attempt)
    sep = find_separator(w, wf, wb.real_edges, wb.temps, static_cast<int>(holes.size()),
                         spec_for(attempt == 0 ? mode : 0), true, attempt, cross);
  if (!sep.found && cross)
    for (int attempt = 0; attempt < 4 && !sep.found; ++attempt)
      sep = find_separator(w, wf, wb.real_edges, wb.temps, static_cast<int>(holes.size()),
                           spec_for(attempt == 0 ? mode : 0), true, attempt, false);
  if (!sep.found) {
    log_info("piece without a valid separator becomes a leaf (" +
             std::to_string(ctx.edges.size()) + " edges)");
    return make_leaf(st, ctx);
  }

  std::vector<std::uint8_t> wedge_on_cycle(wb.edges.size(), 0);
  for (EId e : sep.cycle_wedges) wedge_on_cycle[e] = 1;

  std::array<Ctx, 2> kid;
  kid[0].level = kid[1].level = ctx.level + 1;
  split_edges(L, wf, sep, wedge_on_cycle, kid);
  if (log_level() >= 2 && ctx.level >= 100 && ctx.edges.size() > 1000)
    log_debug("piece lvl=" + std::to_string(ctx.level) + " E=" + std::to_string(ctx.edges.size()) +
              " B=" + std::to_string(ctx.boundary.size()) + " holes=" +
              std::to_string(holes.size()) + " kidE=" + std::to_string(kid[0].edges.size()) +
              "/" + std::to_string(kid[1].edges.size()) + " k=" +
              std::to_string(sep.cycle_local.size()) + " w=" + std::to_string(sep.in_w) + "/" +
              std::to_string(sep.out_w) + "/" + std::to_string(sep.cyc_w));

  // hole-cap preflight: redo with hole balancing if a child would overflow
  if (holes.size() >= 2) {
    bool overflow = count_holes_of(st, kid[0].edges) > st.cfg.hole_cap ||
                    count_holes_of(st, kid[1].edges) > st.cfg.hole_cap;
    if (overflow && mode != 2 && !ws_holes.face.empty()) {
      log_info("hole cap overflow; re-splitting with hole weights");
      SepChoice sep2;
      for (int attempt = 0; attempt < 4 && !sep2.found; ++attempt)
        sep2 = find_separator(w, wf, wb.real_edges, wb.temps,
                              static_cast<int>(holes.size()), ws_holes, true, attempt, cross);
      if (sep2.found) {
        sep = std::move(sep2);
        wedge_on_cycle.assign(wb.edges.size(), 0);
        for (EId e : sep.cycle_wedges) wedge_on_cycle[e] = 1;
        kid[0].edges.clear();
        kid[1].edges.clear();
        split_edges(L, wf, sep, wedge_on_cycle, kid);
      }
    }
    // restore this piece's global->local maps
    st.vmap.next();
    for (std::size_t i = 0; i < L.gvert.size(); ++i)
      st.vmap.set(L.gvert[i], static_cast<int>(i));
    st.emap.next();
    for (std::size_t i = 0; i < L.gedge.size(); ++i)
      st.emap.set(L.gedge[i], static_cast<int>(i));
  }

  split_boundaries(st, ctx, kid);
  if (st.expand) {
    // split_boundaries clobbered vmap; restore the piece maps
    st.vmap.next();
    for (std::size_t i = 0; i < L.gvert.size(); ++i)
      st.vmap.set(L.gvert[i], static_cast<int>(i));
    st.emap.next();
    for (std::size_t i = 0; i < L.gedge.size(); ++i)
      st.emap.set(L.gedge[i], static_cast<int>(i));
    expansion_split(st, ctx, L, w, wb, wf, sep, hole_walks, wedge_on_cycle, kid);
  }

  int id = static_cast<int>(st.pieces.size());
  st.pieces.emplace_back();
  {
    Piece& p = st.pieces.back();
    p.id = id;
    p.parent = ctx.parent;
    p.level = ctx.level;
    p.boundary = st.expand ? ctx.exp.boundary : ctx.boundary;
    p.hole_count = static_cast<int>(holes.size());
    p.edge_count = static_cast<int>(size_now);
    p.base_edge_count = static_cast<int>(size_now);
    p.leaf_lo = static_cast<int>(st.leaves.size());
    SeparatorRecord rec;
    rec.inside_weight = sep.in_w;
    rec.outside_weight = sep.out_w;
    rec.cycle_weight = sep.cyc_w;
    rec.total_weight = sep.total_w;
    int k = static_cast<int>(sep.cycle_local.size());
    for (int i = 0; i < k; ++i) rec.cycle.push_back(L.gvert[sep.cycle_local[i]]);
    for (int i = 0; i < k; ++i) {
      EId we = sep.cycle_wedges[i];
      SeparatorPart part;
      part.from = rec.cycle[i];
      part.to = rec.cycle[(i + 1) % k];
      if (we < wb.real_edges)
        part.edge = L.gedge[we];
      else
        part.hole = wb.temps[we - wb.real_edges].hole;
      rec.parts.push_back(part);
    }
    p.separator = std::move(rec);
  }

  // free bulky piece state before recursing
  ctx.exp = ExpState{};
  std::vector<EId>().swap(ctx.edges);

  kid[0].parent = kid[1].parent = id;
  int c0 = build_piece(st, std::move(kid[0]));
  int c1 = build_piece(st, std::move(kid[1]));
  st.pieces[id].child = {c0, c1};
  st.pieces[id].leaf_hi = static_cast<int>(st.leaves.size());
  return id;
}

// ---------------------------------------------------------------------------
// post-processing shared by both builders

void finalize_tree(DecompTree& t, bool simple_mode) {
  const PlaneMultigraph& gg = *t.graph;
  t.leaf_of_edge.assign(gg.edge_slots(), -1);
  for (int leaf : t.leaves)
    for (EId e : t.pieces[leaf].edges) {
      if (simple_mode)
        require(t.leaf_of_edge[e] == -1, Err::PreconditionViolated,
                "edge in two leaves of a simple decomposition");
      if (t.leaf_of_edge[e] == -1) t.leaf_of_edge[e] = leaf;
    }
  for (EId e : gg.alive_edges())
    require(t.leaf_of_edge[e] != -1, Err::PreconditionViolated, "edge in no leaf");

  // collects a piece's edges without the sort piece_edges() performs; in a
  // simple decomposition the leaf lists are disjoint
  auto collect_edges = [&](const Piece& p) {
    if (p.is_leaf()) return p.edges;
    if (!simple_mode) return t.piece_edges(p.id);
    std::vector<EId> out;
    std::size_t total = 0;
    for (int li = p.leaf_lo; li < p.leaf_hi; ++li)
      total += t.pieces[t.leaves[li]].edges.size();
    out.reserve(total);
    for (int li = p.leaf_lo; li < p.leaf_hi; ++li) {
      const auto& le = t.pieces[t.leaves[li]].edges;
      out.insert(out.end(), le.begin(), le.end());
    }
    return out;
  };

  Stamp vmap, emap, bmark;
  for (Piece& p : t.pieces) {
    p.boundary_by_hole.clear();
    std::vector<EId> edges = collect_edges(p);
    p.edge_count = static_cast<int>(edges.size());
    if (p.boundary.empty()) continue;
    Local L = build_local(gg, edges, vmap, emap);
    FaceStructure lf(L.g);
    std::vector<int> holes = find_holes(gg, L, lf);
    p.hole_count = static_cast<int>(holes.size());
    bmark.next();
    for (VId bv : p.boundary) bmark.set(bv, 1);
    for (int f : holes) {
      std::vector<VId> group;
      for (Dart d : lf.walk(f)) {
        VId gv = L.gvert[L.g.dart_vertex(d)];
        if (bmark.get(gv) == 1) {
          group.push_back(gv);
          bmark.set(gv, 2);  // first occurrence only; claimed by this hole
        }
      }
      if (!group.empty()) p.boundary_by_hole.push_back(std::move(group));
    }
    for (VId bv : p.boundary)
      require(bmark.get(bv) == 2, Err::PreconditionViolated, "boundary vertex on no hole");
  }

  t.levels = 0;
  for (const Piece& p : t.pieces) t.levels = std::max(t.levels, p.level + 1);
  t.level_stats.assign(t.levels, {});
  for (const Piece& p : t.pieces) {
    LevelStats& s = t.level_stats[p.level];
    s.pieces++;
    s.max_boundary = std::max(s.max_boundary, static_cast<int>(p.boundary.size()));
    s.sum_boundary_sq +=
        static_cast<long long>(p.boundary.size()) * static_cast<long long>(p.boundary.size());
    s.sum_edges += p.edge_count;
  }
  double c = 4.0;
  double sqn = std::sqrt(std::max(1, gg.vertex_count()));
  for (const Piece& p : t.pieces) {
    if (p.level == 0 || p.boundary.empty()) continue;
    double bound = 8.0 * sqn / static_cast<double>(p.boundary.size());
    if (bound < 1.0) bound = 1.0;
    c = std::min(c, std::pow(bound, 1.0 / p.level));
  }
  t.decay_c = c;
}

}  // namespace

// ---------------------------------------------------------------------------
// public builders

DecompTree build_decomposition(std::shared_ptr<const PlaneMultigraph> g,
                               const DecompConfig& cfg) {
  require(static_cast<bool>(g), Err::BadParams, "null graph");
  require(g->connected(), Err::PreconditionViolated, "decomposition needs a connected graph");
  for (EId e : g->alive_edges())
    require(g->tail(e) != g->head(e), Err::PreconditionViolated,
            "decomposition input has loops");
  BuildState st;
  st.gg = g.get();
  st.cfg = cfg;
  st.expand = false;

  Ctx root;
  root.edges = g->alive_edges();
  build_piece(st, std::move(root));

  DecompTree t;
  t.graph = std::move(g);
  t.pieces = std::move(st.pieces);
  t.leaves = std::move(st.leaves);
  finalize_tree(t, false);
  return t;
}

SimpleDecomposition build_simple_decomposition(const PlaneMultigraph& g,
                                               const DecompConfig& cfg) {
  AugmentedGraph aug = connect(g);
  {
    bool nice = aug.graph.edge_count() > 0;
    for (EId e : aug.graph.alive_edges())
      if (aug.graph.tail(e) == aug.graph.head(e)) nice = false;
    if (nice) {
      FaceStructure f(aug.graph);
      for (FaceId i = 0; i < f.face_count() && nice; ++i)
        if (f.walk(i).size() != 3) nice = false;
    }
    if (!nice) aug = compose(aug, expand_and_triangulate(aug.graph));
  }
  const PlaneMultigraph g1 = aug.graph;  // triangulated, loop-free

  BuildState st;
  st.gg = &g1;
  st.cfg = cfg;
  st.expand = true;

  // root expansion: one circle per vertex, two slots per ring position
  Ctx root;
  root.edges = g1.alive_edges();
  std::vector<EId> first_rung(g1.edge_slots(), -1);
  {
    root.exp.circles.reserve(g1.vertex_count());
    for (VId v = 0; v < g1.vertex_count(); ++v) {
      ExpCircle c;
      c.owner = v;
      int d = g1.degree(v);
      for (int i = 0; i < d; ++i) {
        EId ge = edge_of(g1.ring(v)[i]);
        for (int rep = 0; rep < 2; ++rep) {
          c.verts.push_back(st.exp.add_vertex(v));
          c.tag.push_back(ge);
        }
      }
      if (d == 1) {
        c.verts.push_back(st.exp.add_vertex(v));
        c.tag.push_back(-1);
      }
      int n = static_cast<int>(c.verts.size());
      for (int i = 0; i < n; ++i)
        c.edges.push_back(st.exp.add_edge(c.verts[i], c.verts[(i + 1) % n], EdgeClass::E0));
      root.exp.circles.push_back(std::move(c));
    }
    // rings start as [next, prev]; a rail dart is prepended at its slot
    for (VId v = 0; v < g1.vertex_count(); ++v) {
      const ExpCircle& c = root.exp.circles[v];
      int n = static_cast<int>(c.verts.size());
      for (int i = 0; i < n; ++i) {
        VId x = c.verts[i];
        st.exp.rings[x].push_back(tail_dart(c.edges[i]));
        st.exp.rings[x].push_back(head_dart(c.edges[(i + n - 1) % n]));
      }
    }
    // rails: the left rail joins the tail fragment's cw-first vertex with
    // the head fragment's cw-last vertex; all rungs run tail -> head
    for (EId ge : root.edges) {
      VId u = g1.tail(ge), wv = g1.head(ge);
      const auto& ru = g1.ring(u);
      const auto& rw = g1.ring(wv);
      int iu = static_cast<int>(std::find(ru.begin(), ru.end(), tail_dart(ge)) - ru.begin());
      int iw = static_cast<int>(std::find(rw.begin(), rw.end(), head_dart(ge)) - rw.begin());
      ExpCircle& cu = root.exp.circles[u];
      ExpCircle& cw = root.exp.circles[wv];
      EId left = st.exp.add_edge(cu.verts[2 * iu], cw.verts[2 * iw + 1], EdgeClass::Filler);
      EId right = st.exp.add_edge(cu.verts[2 * iu + 1], cw.verts[2 * iw], EdgeClass::Filler);
      first_rung[ge] = left;
      root.exp.rungs.push_back({ge, {left, right}});
      st.exp.rings[cu.verts[2 * iu]].insert(st.exp.rings[cu.verts[2 * iu]].begin(),
                                            tail_dart(left));
      st.exp.rings[cu.verts[2 * iu + 1]].insert(st.exp.rings[cu.verts[2 * iu + 1]].begin(),
                                                tail_dart(right));
      st.exp.rings[cw.verts[2 * iw + 1]].insert(st.exp.rings[cw.verts[2 * iw + 1]].begin(),
                                                head_dart(left));
      st.exp.rings[cw.verts[2 * iw]].insert(st.exp.rings[cw.verts[2 * iw]].begin(),
                                            head_dart(right));
    }
    std::sort(root.exp.rungs.begin(), root.exp.rungs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  }

  build_piece(st, std::move(root));

  // assemble G'' and the expansion-step mapping
  AugmentedGraph expstep;
  expstep.input_n = g1.vertex_count();
  expstep.input_m = g1.edge_slots();
  expstep.input_edges.resize(g1.edge_slots());
  for (EId e = 0; e < g1.edge_slots(); ++e) expstep.input_edges[e] = g1.edge(e);
  expstep.steps = {"circle_expansion"};
  expstep.edge_class = st.exp.cls;
  for (EId ge = 0; ge < g1.edge_slots(); ++ge)
    if (first_rung[ge] >= 0) expstep.edge_class[first_rung[ge]] = EdgeClass::E1;
  expstep.orig = st.exp.orig;
  expstep.vertex_cycle.assign(g1.vertex_count(), {});
  for (VId x = 0; x < static_cast<VId>(st.exp.orig.size()); ++x)
    expstep.vertex_cycle[st.exp.orig[x]].push_back(x);
  expstep.edge_image = first_rung;
  expstep.graph = PlaneMultigraph::build_from_rotation(
      static_cast<int>(st.exp.orig.size()), std::move(st.exp.edges), std::move(st.exp.rings),
      std::move(st.exp.alive));
  int maxdeg = 0;
  for (VId v = 0; v < expstep.graph.vertex_count(); ++v)
    maxdeg = std::max(maxdeg, expstep.graph.degree(v));
  expstep.degree_bound = maxdeg;

  SimpleDecomposition out;
  out.mapping = compose(aug, expstep);
  validate_augmented(out.mapping);

  out.tree.graph = std::make_shared<PlaneMultigraph>(out.mapping.graph);
  out.tree.pieces = std::move(st.pieces);
  out.tree.leaves = std::move(st.leaves);
  finalize_tree(out.tree, true);
  return out;
}

std::vector<SimpleViolation> validate_simple(const DecompTree& t) {
  std::vector<SimpleViolation> report;
  const PlaneMultigraph& gg = *t.graph;

  std::vector<int> owner(gg.edge_slots(), -1);
  for (int leaf : t.leaves)
    for (EId e : t.pieces[leaf].edges) {
      if (owner[e] != -1) report.push_back({leaf, "edge in two leaves"});
      owner[e] = leaf;
    }
  for (EId e : gg.alive_edges())
    if (owner[e] == -1) {
      report.push_back({0, "edge in no leaf"});
      break;
    }

  Stamp vmap, emap, hmark;
  for (const Piece& p : t.pieces) {
    std::vector<EId> edges = p.is_leaf() ? p.edges : t.piece_edges(p.id);
    if (!p.is_leaf()) {
      auto e0 = t.piece_edges(p.child[0]);
      auto e1 = t.piece_edges(p.child[1]);
      std::vector<EId> inter;
      std::set_intersection(e0.begin(), e0.end(), e1.begin(), e1.end(),
                            std::back_inserter(inter));
      if (!inter.empty()) report.push_back({p.id, "sibling edge sets overlap"});
      if (e0.size() + e1.size() - inter.size() != edges.size())
        report.push_back({p.id, "children do not cover the piece"});
    }
    Local L = build_local(gg, edges, vmap, emap);
    FaceStructure lf(L.g);
    std::vector<int> holes = find_holes(gg, L, lf);
    hmark.next();
    for (std::size_t hi = 0; hi < holes.size(); ++hi) {
      const auto& walk = lf.walk(holes[hi]);
      bool dup = false;
      std::vector<VId> seen;
      for (Dart d : walk) {
        VId gv = L.gvert[L.g.dart_vertex(d)];
        if (std::find(seen.begin(), seen.end(), gv) != seen.end()) dup = true;
        seen.push_back(gv);
      }
      if (dup || walk.size() < 2) report.push_back({p.id, "hole walk is not simple"});
      std::sort(seen.begin(), seen.end());
      seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
      for (VId gv : seen) {
        int prev = hmark.get(gv);
        if (prev >= 0 && prev != static_cast<int>(hi))
          report.push_back({p.id, "holes share a vertex"});
        hmark.set(gv, static_cast<int>(hi));
      }
    }
    for (VId b : p.boundary)
      if (hmark.get(b) < 0) report.push_back({p.id, "boundary vertex on no hole"});
  }
  return report;
}

CycleSeparatorResult simple_cycle_separator(const PlaneMultigraph& g,
                                            std::span<const long long> vertex_weight,
                                            int leaf_threshold) {
  require(g.edge_count() > leaf_threshold, Err::TooSmall, "piece at or below leaf threshold");
  require(g.connected(), Err::PreconditionViolated, "separator needs a connected graph");
  WeightSpec ws;
  if (vertex_weight.empty())
    ws.vertex.assign(g.vertex_count(), 1);
  else {
    require(static_cast<int>(vertex_weight.size()) == g.vertex_count(), Err::BadParams,
            "weight size mismatch");
    ws.vertex.assign(vertex_weight.begin(), vertex_weight.end());
  }
  FaceStructure wf(g);
  SepChoice sep = find_separator(g, wf, g.edge_slots(), {}, 0, ws, true);
  require(sep.found, Err::PreconditionViolated, "no separator found");

  CycleSeparatorResult out;
  out.record.inside_weight = sep.in_w;
  out.record.outside_weight = sep.out_w;
  out.record.cycle_weight = sep.cyc_w;
  out.record.total_weight = sep.total_w;
  out.record.cycle = sep.cycle_local;
  for (std::size_t i = 0; i < sep.cycle_local.size(); ++i) {
    SeparatorPart part;
    part.from = sep.cycle_local[i];
    part.to = sep.cycle_local[(i + 1) % sep.cycle_local.size()];
    part.edge = sep.cycle_wedges[i];
    out.record.parts.push_back(part);
  }
  std::vector<std::uint8_t> on_cycle(g.edge_slots(), 0);
  for (EId e : sep.cycle_wedges) on_cycle[e] = 1;
  out.edge_side.assign(g.edge_slots(), 0);
  for (EId e = 0; e < g.edge_slots(); ++e) {
    if (!g.edge_alive(e)) continue;
    out.edge_side[e] = on_cycle[e] ? 2 : (sep.face_in[wf.face_of(tail_dart(e))] ? 0 : 1);
  }
  return out;
}

}  // namespace planar_reach
