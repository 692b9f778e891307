#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <span>
#include <vector>

#include "planar_reach/common.hpp"

namespace planar_reach::monge {

// ---------------------------------------------------------------------------
// ground sets

// A ground set U = U_1 + ... + U_l of elements on l separator curves; the
// total order keeps each curve contiguous and clockwise. Elements are the
// positions 0..size()-1.
struct CurveOrder {
  std::vector<int> curve_sizes;

  int size() const {
    int s = 0;
    for (int k : curve_sizes) s += k;
    return s;
  }
  int curves() const { return static_cast<int>(curve_sizes.size()); }
  // [lo, hi) position range of curve i
  std::pair<int, int> curve_range(int i) const {
    int lo = 0;
    for (int j = 0; j < i; ++j) lo += curve_sizes[j];
    return {lo, lo + curve_sizes[i]};
  }
};

enum class SubKind : std::uint8_t { Bipartite, InterCurve };

// Row/column sets as contiguous position ranges; the recursive halving and
// the coarse inter-curve blocks only ever produce contiguous sets.
struct SubmatrixDesc {
  int s_lo = 0, s_hi = 0;
  int t_lo = 0, t_hi = 0;
  SubKind kind = SubKind::Bipartite;
};

// Recursive halving of one curve: emits A^{X1,X2} and A^{X2,X1} with
// q = floor((k+1)/2) and recurses. Covers every ordered pair exactly once.
std::vector<SubmatrixDesc> partition_single_curve(int k);

struct ReachPartition {
  CurveOrder order;
  std::vector<SubmatrixDesc> members;
  std::vector<std::vector<std::int32_t>> row_members;  // per position
  std::vector<std::vector<std::int32_t>> col_members;
};

// l^2 coarse blocks; diagonal blocks refined by partition_single_curve,
// off-diagonal blocks kept whole.
ReachPartition partition_multi_curve(const CurveOrder& order);

// ---------------------------------------------------------------------------
// small dense bit matrix

class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), wpr_((cols + 63) / 64),
        words_(static_cast<std::size_t>(rows) * wpr_, 0) {}
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool get(int r, int c) const {
    return (words_[static_cast<std::size_t>(r) * wpr_ + (c >> 6)] >> (c & 63)) & 1;
  }
  void set(int r, int c) {
    words_[static_cast<std::size_t>(r) * wpr_ + (c >> 6)] |= 1ULL << (c & 63);
  }

 private:
  int rows_ = 0, cols_ = 0, wpr_ = 0;
  std::vector<std::uint64_t> words_;
};

// Test-facing validators (Monge / block structure of reachability
// submatrices). `order` gives simple position order; restriction to active
// columns is part of the block check.
bool verify_monge(const BitMatrix& m);
int max_row_blocks_over_active_columns(const BitMatrix& m);
inline bool verify_blocks(const BitMatrix& m, int cap) {
  return max_row_blocks_over_active_columns(m) <= cap;
}

// ---------------------------------------------------------------------------
// predecessor sets

enum class PredKind : std::uint8_t { OrderedSet, Bucket };

// Dynamic predecessor structure over [0, universe): a balanced ordered set,
// or a two-level bitset approximating the loglog-time structure.
class PredSet {
 public:
  void init(PredKind kind, int universe);
  bool initialized() const { return universe_ > 0; }
  void insert(int x);
  void erase(int x);
  bool contains(int x) const;
  // smallest member in [lo, hi], or -1
  int next_in(int lo, int hi) const;
  // largest member in [lo, hi], or -1
  int prev_in(int lo, int hi) const;
  bool empty() const { return size_ == 0; }
  int size() const { return size_; }

 private:
  int universe_ = 0;
  int size_ = 0;
  PredKind kind_ = PredKind::OrderedSet;
  std::set<int> set_;
  std::vector<std::uint64_t> words_;
  std::vector<std::uint64_t> summary_;
};

// ---------------------------------------------------------------------------
// reachability submatrix state

struct Interval {
  int lo = 0, hi = 0;  // column ids of the run's first and last 1-cells
};

// One member A^{S,T}: entries, active rows/columns, and the interval
// representation of every row (over active columns) and column (over active
// rows). Entries flip 0 -> 1 only.
class ReachSubmatrix {
 public:
  ReachSubmatrix() = default;
  ReachSubmatrix(SubmatrixDesc desc, int side);

  const SubmatrixDesc& desc() const { return desc_; }
  int side() const { return side_; }
  int s_size() const { return desc_.s_hi - desc_.s_lo; }
  int t_size() const { return desc_.t_hi - desc_.t_lo; }

  bool get(int s_local, int t_local) const { return bits_.get(s_local, t_local); }
  bool col_active(int t_local) const { return actcols_.get(0, t_local); }
  bool row_active(int s_local) const { return actrows_.get(0, s_local); }
  const std::vector<Interval>& row_intervals(int s_local) const { return row_iv_[s_local]; }
  const std::vector<Interval>& col_intervals(int t_local) const { return col_iv_[t_local]; }
  const std::vector<int>& active_cols() const { return active_cols_list_; }
  const std::vector<int>& active_rows() const { return active_rows_list_; }

  // applies one cell flip; returns (column_activated, row_activated)
  std::pair<bool, bool> set_cell(int s_local, int t_local);

  // batch-boundary structural check (Lemmas 4.6 / 4.8)
  void check_caps(int bipartite_cap, int inter_cap) const;

  BitMatrix snapshot() const { return bits_; }

 private:
  SubmatrixDesc desc_;
  int side_ = 0;
  BitMatrix bits_;      // S x T
  BitMatrix tbits_;     // T x S
  BitMatrix actcols_;   // 1 x T
  BitMatrix actrows_;   // 1 x S
  std::vector<int> active_cols_list_, active_rows_list_;
  PredSet act_col_ones_;  // active columns, as a predecessor set
  PredSet act_row_ones_;
  std::vector<std::vector<Interval>> row_iv_;
  std::vector<std::vector<Interval>> col_iv_;

  static void insert_into(std::vector<Interval>& iv, int x, const PredSet& act);
  static void split_at(std::vector<Interval>& iv, int x, const PredSet& act);
  friend class MergeClosure;
};

// ---------------------------------------------------------------------------
// the switch-on Monge transitive closure (union of two growing
// reachability matrices)

struct MergeConfig {
  PredKind pred = PredKind::OrderedSet;
  int block_cap = 8;          // inter-curve rows over active columns
  bool materialize_can = true;  // keep candidate sets, or derive on the fly
  bool check_caps = true;
};

struct MergeCounters {
  long long queue_pushes = 0;
  long long flips = 0;
  long long can_removals = 0;
  long long candidate_probes = 0;
};

class MergeClosure {
 public:
  // sides are (curve order, element ids); ids shared between sides identify
  // the overlap. `expected_shared` is validated against the actual overlap.
  MergeClosure(const CurveOrder& order1, std::vector<VId> ids1, const CurveOrder& order2,
               std::vector<VId> ids2, std::span<const VId> expected_shared,
               MergeConfig cfg = {});

  int universe() const { return static_cast<int>(ids_.size()); }
  const std::vector<VId>& ids() const { return ids_; }
  // global closure entry by vertex ids; u == w reports true
  bool reachable(VId u, VId w) const;

  // feeds newly-one entries of one side's reachability matrix; returns the
  // off-diagonal pairs of the union closure that flipped, as vertex ids
  std::vector<std::pair<VId, VId>> update(int side,
                                          std::span<const std::pair<VId, VId>> newly_one);

  // Q = Out(b) cap Unreachable(a, A), by vertex id (read-only)
  std::vector<VId> candidates_intersect(VId a, VId b) const;

  const MergeCounters& counters() const { return counters_; }
  const std::vector<ReachSubmatrix>& members() const { return members_; }
  // members of one side (1 or 2) as [first, last) indices into members()
  std::pair<int, int> side_members(int side) const {
    int base = member_side_base_[side - 1];
    int hi = side == 1 ? member_side_base_[1] : static_cast<int>(members_.size());
    return {base, hi};
  }
  // vertex id at a side-local position
  VId side_vertex(int side, int pos) const { return ids_[g_of_side_[side - 1][pos]]; }

 private:
  MergeConfig cfg_;
  std::vector<VId> ids_;                 // global index -> vertex id
  std::vector<std::int32_t> side_pos_[2];  // global index -> side position or -1
  std::vector<std::int32_t> g_of_side_[2];  // side position -> global index
  ReachPartition part_[2];
  std::vector<ReachSubmatrix> members_;    // side 1 members then side 2 members
  std::vector<std::int32_t> member_side_base_;  // first member index per side
  std::vector<std::vector<std::int32_t>> rpi_;  // global index -> member ids (rows)
  std::vector<std::vector<std::int32_t>> cpi_;  // global index -> member ids (cols)
  BitMatrix closure_;   // m x m, diagonal implicit
  BitMatrix closure_t_;
  // candidate sets: per member, per global source/target, lazily allocated
  std::vector<std::vector<PredSet>> can_;   // [member][global a] over T-local
  std::vector<std::vector<PredSet>> canr_;  // [member][global b] over S-local
  std::vector<std::pair<VId, int>> by_id_;  // sorted id -> global index
  MergeCounters counters_;

  int global_of(VId id) const;
  void flip(int a, int b, std::vector<std::pair<int, int>>& queue);
  void on_col_activated(int mi, int t_local);
  void on_row_activated(int mi, int s_local);
  void drain(std::vector<std::pair<int, int>>& queue);
  std::vector<std::pair<VId, VId>> run_batch(int side,
                                             std::span<const std::pair<VId, VId>> newly_one);
};

}  // namespace planar_reach::monge
