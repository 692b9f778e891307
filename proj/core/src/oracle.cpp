#include "planar_reach/oracle.hpp"

#include <algorithm>

namespace planar_reach::oracle {

void check_cap(int n) {
  require(n <= kMaxOracleN, Err::OracleCapExceeded, "oracle input exceeds n cap");
}

static std::vector<std::vector<VId>> out_adj(int n, const EdgeList& edges) {
  std::vector<std::vector<VId>> adj(n);
  for (auto [u, w] : edges) adj[u].push_back(w);
  return adj;
}

std::vector<std::uint8_t> reachable_set(int n, const EdgeList& edges, VId s) {
  check_cap(n);
  auto adj = out_adj(n, edges);
  std::vector<std::uint8_t> seen(n, 0);
  std::vector<VId> stack{s};
  seen[s] = 1;
  while (!stack.empty()) {
    VId v = stack.back();
    stack.pop_back();
    for (VId w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
  }
  return seen;
}

bool reach(int n, const EdgeList& edges, VId u, VId w) {
  return reachable_set(n, edges, u)[w];
}

std::pair<std::vector<int>, int> scc(int n, const EdgeList& edges) {
  check_cap(n);
  auto adj = out_adj(n, edges);
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<std::uint8_t> on_stack(n, 0);
  std::vector<VId> stack;
  int next = 0, count = 0;
  struct Frame {
    VId v;
    std::size_t child;
  };
  for (VId root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = next++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      Frame& fr = frames.back();
      if (fr.child < adj[fr.v].size()) {
        VId w = adj[fr.v][fr.child++];
        if (index[w] == -1) {
          index[w] = low[w] = next++;
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
            comp[w] = count;
            if (w == fr.v) break;
          }
          count++;
        }
        VId done = fr.v;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[done]);
      }
    }
  }
  return {std::move(comp), count};
}

std::vector<std::uint8_t> inter_scc(int n, const EdgeList& edges) {
  auto [comp, count] = scc(n, edges);
  (void)count;
  std::vector<std::uint8_t> inter(edges.size(), 0);
  for (std::size_t i = 0; i < edges.size(); ++i)
    inter[i] = comp[edges[i].first] != comp[edges[i].second];
  return inter;
}

std::vector<std::uint8_t> strong_bridges(int n, const EdgeList& edges) {
  check_cap(n);
  int base = scc(n, edges).second;
  std::vector<std::uint8_t> bridge(edges.size(), 0);
  EdgeList rest;
  rest.reserve(edges.size() - 1);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    rest.clear();
    for (std::size_t j = 0; j < edges.size(); ++j)
      if (j != i) rest.push_back(edges[j]);
    bridge[i] = scc(n, rest).second > base;
  }
  return bridge;
}

std::pair<std::vector<int>, int> two_edge_connected_subgraphs(int n, const EdgeList& edges) {
  check_cap(n);
  EdgeList cur = edges;
  while (true) {
    auto bridges = strong_bridges(n, cur);
    EdgeList next;
    for (std::size_t i = 0; i < cur.size(); ++i)
      if (!bridges[i]) next.push_back(cur[i]);
    if (next.size() == cur.size()) break;
    cur = std::move(next);
  }
  return scc(n, cur);
}

std::vector<std::uint8_t> closure(int n, const EdgeList& edges) {
  check_cap(n);
  std::vector<std::uint8_t> c(static_cast<std::size_t>(n) * n, 0);
  for (VId v = 0; v < n; ++v) {
    auto row = reachable_set(n, edges, v);
    std::copy(row.begin(), row.end(), c.begin() + static_cast<std::size_t>(v) * n);
  }
  return c;
}

}  // namespace planar_reach::oracle
