#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "planar_reach/common.hpp"

namespace planar_reach::oracle {

// Brute-force reference implementations. Deliberately independent of the
// dynamic structures: plain edge lists in, textbook answers out. Every call
// recomputes from scratch. Inputs are capped at n <= 500 to keep validation
// sweeps bounded.

inline constexpr int kMaxOracleN = 500;

using EdgeList = std::vector<std::pair<VId, VId>>;

void check_cap(int n);

bool reach(int n, const EdgeList& edges, VId u, VId w);

// SCC labels via Tarjan; labels are dense in [0, count).
std::pair<std::vector<int>, int> scc(int n, const EdgeList& edges);

// Indices into `edges` whose endpoints lie in distinct SCCs.
std::vector<std::uint8_t> inter_scc(int n, const EdgeList& edges);

// Per-edge removal test: e is a strong bridge iff removing it raises the
// SCC count.
std::vector<std::uint8_t> strong_bridges(int n, const EdgeList& edges);

// Fixed point of (find strong bridges, remove them, recompute) and the SCC
// partition of the residual graph.
std::pair<std::vector<int>, int> two_edge_connected_subgraphs(int n, const EdgeList& edges);

// Transitive closure as a row-major n*n byte matrix; diagonal set to 1.
std::vector<std::uint8_t> closure(int n, const EdgeList& edges);

// Reachable set from s.
std::vector<std::uint8_t> reachable_set(int n, const EdgeList& edges, VId s);

}  // namespace planar_reach::oracle
