#include "planar_reach/monge.hpp"

#include <algorithm>

namespace planar_reach::monge {

// ---------------------------------------------------------------------------
// partitions

namespace {
void halve(int lo, int hi, std::vector<SubmatrixDesc>& out) {
  int k = hi - lo;
  if (k <= 1) return;
  int q = (k + 1) / 2;
  out.push_back({lo, lo + q, lo + q, hi, SubKind::Bipartite});
  out.push_back({lo + q, hi, lo, lo + q, SubKind::Bipartite});
  halve(lo, lo + q, out);
  halve(lo + q, hi, out);
}
}  // namespace

std::vector<SubmatrixDesc> partition_single_curve(int k) {
  require(k >= 1, Err::BadParams, "empty curve");
  std::vector<SubmatrixDesc> out;
  halve(0, k, out);
  return out;
}

ReachPartition partition_multi_curve(const CurveOrder& order) {
  ReachPartition p;
  p.order = order;
  int l = order.curves();
  for (int i = 0; i < l; ++i) {
    auto [ilo, ihi] = order.curve_range(i);
    for (int j = 0; j < l; ++j) {
      if (i == j) continue;
      auto [jlo, jhi] = order.curve_range(j);
      if (ihi > ilo && jhi > jlo)
        p.members.push_back({ilo, ihi, jlo, jhi, SubKind::InterCurve});
    }
    if (ihi == ilo) continue;
    std::vector<SubmatrixDesc> inner;
    halve(ilo, ihi, inner);
    p.members.insert(p.members.end(), inner.begin(), inner.end());
  }
  int m = order.size();
  p.row_members.assign(m, {});
  p.col_members.assign(m, {});
  for (std::size_t mi = 0; mi < p.members.size(); ++mi) {
    const auto& d = p.members[mi];
    for (int s = d.s_lo; s < d.s_hi; ++s) p.row_members[s].push_back(static_cast<int>(mi));
    for (int t = d.t_lo; t < d.t_hi; ++t) p.col_members[t].push_back(static_cast<int>(mi));
  }
  return p;
}

// ---------------------------------------------------------------------------
// validators

bool verify_monge(const BitMatrix& m) {
  for (int a = 0; a < m.rows(); ++a)
    for (int b = a + 1; b < m.rows(); ++b)
      for (int c = 0; c < m.cols(); ++c)
        for (int d = c + 1; d < m.cols(); ++d)
          if (m.get(a, c) && m.get(b, d) && !(m.get(a, d) && m.get(b, c))) return false;
  return true;
}

int max_row_blocks_over_active_columns(const BitMatrix& m) {
  std::vector<int> active;
  for (int c = 0; c < m.cols(); ++c) {
    bool any = false;
    for (int r = 0; r < m.rows() && !any; ++r) any = m.get(r, c);
    if (any) active.push_back(c);
  }
  int worst = 0;
  for (int r = 0; r < m.rows(); ++r) {
    int blocks = 0;
    bool in_run = false;
    for (int c : active) {
      bool one = m.get(r, c);
      if (one && !in_run) blocks++;
      in_run = one;
    }
    worst = std::max(worst, blocks);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// PredSet

void PredSet::init(PredKind kind, int universe) {
  universe_ = universe;
  kind_ = kind;
  size_ = 0;
  if (kind_ == PredKind::Bucket) {
    words_.assign((universe + 63) / 64, 0);
    summary_.assign((words_.size() + 63) / 64, 0);
  }
}

void PredSet::insert(int x) {
  if (kind_ == PredKind::OrderedSet) {
    if (set_.insert(x).second) size_++;
    return;
  }
  std::uint64_t& w = words_[x >> 6];
  std::uint64_t bit = 1ULL << (x & 63);
  if (!(w & bit)) {
    w |= bit;
    summary_[x >> 12] |= 1ULL << ((x >> 6) & 63);
    size_++;
  }
}

void PredSet::erase(int x) {
  if (kind_ == PredKind::OrderedSet) {
    if (set_.erase(x)) size_--;
    return;
  }
  std::uint64_t& w = words_[x >> 6];
  std::uint64_t bit = 1ULL << (x & 63);
  if (w & bit) {
    w &= ~bit;
    if (!w) summary_[x >> 12] &= ~(1ULL << ((x >> 6) & 63));
    size_--;
  }
}

bool PredSet::contains(int x) const {
  if (kind_ == PredKind::OrderedSet) return set_.count(x) > 0;
  return (words_[x >> 6] >> (x & 63)) & 1;
}

int PredSet::prev_in(int lo, int hi) const {
  if (lo > hi || size_ == 0) return -1;
  if (kind_ == PredKind::OrderedSet) {
    auto it = set_.upper_bound(hi);
    if (it == set_.begin()) return -1;
    --it;
    return *it >= lo ? *it : -1;
  }
  int wi = hi >> 6;
  std::uint64_t w = words_[wi] & (~0ULL >> (63 - (hi & 63)));
  while (true) {
    if (w) {
      int x = (wi << 6) + 63 - __builtin_clzll(w);
      return x >= lo ? x : -1;
    }
    wi--;
    if (wi < (lo >> 6)) return -1;
    w = words_[wi];
  }
}

int PredSet::next_in(int lo, int hi) const {
  if (lo > hi || size_ == 0) return -1;
  if (kind_ == PredKind::OrderedSet) {
    auto it = set_.lower_bound(lo);
    return (it != set_.end() && *it <= hi) ? *it : -1;
  }
  int wi = lo >> 6;
  int last_w = hi >> 6;
  std::uint64_t w = words_[wi] & (~0ULL << (lo & 63));
  while (true) {
    if (w) {
      int x = (wi << 6) + __builtin_ctzll(w);
      return x <= hi ? x : -1;
    }
    // skip empty words via the summary
    int si = (wi + 1) >> 6;
    std::uint64_t sw = si < static_cast<int>(summary_.size())
                           ? summary_[si] & (~0ULL << ((wi + 1) & 63))
                           : 0;
    while (!sw) {
      si++;
      if (si > (last_w >> 6)) return -1;
      sw = summary_[si];
    }
    wi = (si << 6) + __builtin_ctzll(sw);
    if (wi > last_w) return -1;
    w = words_[wi];
  }
}

// ---------------------------------------------------------------------------
// ReachSubmatrix

ReachSubmatrix::ReachSubmatrix(SubmatrixDesc desc, int side)
    : desc_(desc),
      side_(side),
      bits_(desc.s_hi - desc.s_lo, desc.t_hi - desc.t_lo),
      tbits_(desc.t_hi - desc.t_lo, desc.s_hi - desc.s_lo),
      actcols_(1, desc.t_hi - desc.t_lo),
      actrows_(1, desc.s_hi - desc.s_lo),
      row_iv_(desc.s_hi - desc.s_lo),
      col_iv_(desc.t_hi - desc.t_lo) {
  act_col_ones_.init(PredKind::Bucket, t_size());
  act_row_ones_.init(PredKind::Bucket, s_size());
}

// splits any interval spanning x (x just became an active 0-cell for this
// line)
void ReachSubmatrix::split_at(std::vector<Interval>& iv, int x, const PredSet& act) {
  for (std::size_t i = 0; i < iv.size(); ++i) {
    if (iv[i].lo < x && x < iv[i].hi) {
      // every active id inside a run is a 1-cell except x itself, so the
      // split bounds are the active neighbors of x
      int pred = act.prev_in(iv[i].lo, x - 1);
      int succ = act.next_in(x + 1, iv[i].hi);
      Interval right{succ, iv[i].hi};
      require(pred >= iv[i].lo && succ >= 0, Err::PreconditionViolated,
              "interval split out of range");
      iv[i].hi = pred;
      iv.insert(iv.begin() + i + 1, right);
      return;
    }
  }
}

void ReachSubmatrix::insert_into(std::vector<Interval>& iv, int x, const PredSet& act) {
  // x is a fresh 1-cell in an active position; glue to neighbor runs when
  // the adjacent active cells are 1-cells (they are iff they terminate runs)
  int pred = -1, succ = -1;
  for (std::size_t i = 0; i < iv.size(); ++i) {
    if (iv[i].hi < x) pred = static_cast<int>(i);
    if (iv[i].lo > x && succ == -1) succ = static_cast<int>(i);
  }
  bool glue_left = pred != -1 && act.next_in(iv[pred].hi + 1, x - 1) == -1;
  bool glue_right = succ != -1 && act.next_in(x + 1, iv[succ].lo - 1) == -1;
  if (glue_left && glue_right) {
    iv[pred].hi = iv[succ].hi;
    iv.erase(iv.begin() + succ);
  } else if (glue_left) {
    iv[pred].hi = x;
  } else if (glue_right) {
    iv[succ].lo = x;
  } else {
    iv.insert(iv.begin() + (pred + 1), Interval{x, x});
  }
}

std::pair<bool, bool> ReachSubmatrix::set_cell(int s_local, int t_local) {
  require(!bits_.get(s_local, t_local), Err::AlreadyOne, "cell already one");
  bool col_act = false, row_act = false;
  if (!actcols_.get(0, t_local)) {
    actcols_.set(0, t_local);
    active_cols_list_.push_back(t_local);
    act_col_ones_.insert(t_local);
    col_act = true;
    // a fresh active column is a 0-cell for every other row: split runs
    for (int r : active_rows_list_)
      if (r != s_local) split_at(row_iv_[r], t_local, act_col_ones_);
  }
  if (!actrows_.get(0, s_local)) {
    actrows_.set(0, s_local);
    active_rows_list_.push_back(s_local);
    act_row_ones_.insert(s_local);
    row_act = true;
    for (int c : active_cols_list_)
      if (c != t_local) split_at(col_iv_[c], s_local, act_row_ones_);
  }
  bits_.set(s_local, t_local);
  tbits_.set(t_local, s_local);
  insert_into(row_iv_[s_local], t_local, act_col_ones_);
  insert_into(col_iv_[t_local], s_local, act_row_ones_);
  return {col_act, row_act};
}

void ReachSubmatrix::check_caps(int bipartite_cap, int inter_cap) const {
  int cap = desc_.kind == SubKind::Bipartite ? bipartite_cap : inter_cap;
  for (int r : active_rows_list_)
    require(static_cast<int>(row_iv_[r].size()) <= cap, Err::BlockCapExceeded,
            "row interval count above the cap");
  for (int c : active_cols_list_)
    require(static_cast<int>(col_iv_[c].size()) <= cap, Err::BlockCapExceeded,
            "column interval count above the cap");
}

// ---------------------------------------------------------------------------
// MergeClosure

MergeClosure::MergeClosure(const CurveOrder& order1, std::vector<VId> ids1,
                           const CurveOrder& order2, std::vector<VId> ids2,
                           std::span<const VId> expected_shared, MergeConfig cfg)
    : cfg_(cfg) {
  require(static_cast<int>(ids1.size()) == order1.size(), Err::BadParams, "side 1 id mismatch");
  require(static_cast<int>(ids2.size()) == order2.size(), Err::BadParams, "side 2 id mismatch");
  // global index space: side-1 ids, then fresh side-2 ids
  ids_ = ids1;
  {
    std::vector<VId> sorted1 = ids1;
    std::sort(sorted1.begin(), sorted1.end());
    require(std::adjacent_find(sorted1.begin(), sorted1.end()) == sorted1.end(), Err::BadParams,
            "duplicate id on side 1");
    std::vector<VId> shared;
    for (VId v : ids2)
      if (std::binary_search(sorted1.begin(), sorted1.end(), v)) shared.push_back(v);
    for (VId v : ids2)
      if (!std::binary_search(sorted1.begin(), sorted1.end(), v)) ids_.push_back(v);
    std::vector<VId> expected(expected_shared.begin(), expected_shared.end());
    std::sort(expected.begin(), expected.end());
    std::sort(shared.begin(), shared.end());
    require(expected == shared, Err::OverlapViolation,
            "declared overlap does not match the shared ids");
  }
  int m = universe();
  side_pos_[0].assign(m, -1);
  side_pos_[1].assign(m, -1);
  g_of_side_[0].resize(ids1.size());
  g_of_side_[1].resize(ids2.size());
  {
    by_id_.resize(m);
    for (int g = 0; g < m; ++g) by_id_[g] = {ids_[g], g};
    std::sort(by_id_.begin(), by_id_.end());
    auto lookup = [&](VId v) {
      auto it = std::lower_bound(by_id_.begin(), by_id_.end(), std::pair<VId, int>{v, -1});
      return it->second;
    };
    for (std::size_t p = 0; p < ids1.size(); ++p) {
      int g = lookup(ids1[p]);
      side_pos_[0][g] = static_cast<int>(p);
      g_of_side_[0][p] = g;
    }
    for (std::size_t p = 0; p < ids2.size(); ++p) {
      int g = lookup(ids2[p]);
      side_pos_[1][g] = static_cast<int>(p);
      g_of_side_[1][p] = g;
    }
  }

  part_[0] = partition_multi_curve(order1);
  part_[1] = order2.size() > 0 ? partition_multi_curve(order2) : ReachPartition{};
  member_side_base_ = {0, static_cast<int>(part_[0].members.size())};
  for (int side = 0; side < 2; ++side)
    for (const auto& d : part_[side].members) members_.emplace_back(d, side);

  rpi_.assign(m, {});
  cpi_.assign(m, {});
  for (int side = 0; side < 2; ++side) {
    for (std::size_t p = 0; p < g_of_side_[side].size(); ++p) {
      int g = g_of_side_[side][p];
      for (int mi : part_[side].row_members[p])
        rpi_[g].push_back(member_side_base_[side] + mi);
      for (int mi : part_[side].col_members[p])
        cpi_[g].push_back(member_side_base_[side] + mi);
    }
  }

  closure_ = BitMatrix(m, m);
  closure_t_ = BitMatrix(m, m);
  if (cfg_.materialize_can) {
    can_.resize(members_.size());
    canr_.resize(members_.size());
    for (std::size_t mi = 0; mi < members_.size(); ++mi) {
      can_[mi].resize(m);
      canr_[mi].resize(m);
    }
  }
}

int MergeClosure::global_of(VId id) const {
  auto it = std::lower_bound(by_id_.begin(), by_id_.end(), std::pair<VId, int>{id, -1});
  require(it != by_id_.end() && it->first == id, Err::UnknownVertex,
          "id not in the merge universe");
  return it->second;
}

bool MergeClosure::reachable(VId u, VId w) const {
  if (u == w) return true;
  return closure_.get(global_of(u), global_of(w));
}

void MergeClosure::on_col_activated(int mi, int t_local) {
  if (!cfg_.materialize_can) return;
  const auto& d = members_[mi].desc();
  int side = members_[mi].side();
  int g_t = g_of_side_[side][d.t_lo + t_local];
  for (int a = 0; a < universe(); ++a) {
    if (a == g_t) continue;
    if (closure_.get(a, g_t)) continue;
    PredSet& ps = can_[mi][a];
    if (!ps.initialized()) ps.init(cfg_.pred, members_[mi].t_size());
    ps.insert(t_local);
  }
}

void MergeClosure::on_row_activated(int mi, int s_local) {
  if (!cfg_.materialize_can) return;
  const auto& d = members_[mi].desc();
  int side = members_[mi].side();
  int g_s = g_of_side_[side][d.s_lo + s_local];
  for (int b = 0; b < universe(); ++b) {
    if (b == g_s) continue;
    if (closure_.get(g_s, b)) continue;
    PredSet& ps = canr_[mi][b];
    if (!ps.initialized()) ps.init(cfg_.pred, members_[mi].s_size());
    ps.insert(s_local);
  }
}

void MergeClosure::flip(int a, int b, std::vector<std::pair<int, int>>& queue) {
  closure_.set(a, b);
  closure_t_.set(b, a);
  counters_.flips++;
  counters_.queue_pushes++;
  queue.push_back({a, b});
  if (cfg_.materialize_can) {
    for (int mi : cpi_[b]) {
      auto& ps = can_[mi][a];
      if (ps.initialized()) {
        int t_local = side_pos_[members_[mi].side()][b] - members_[mi].desc().t_lo;
        ps.erase(t_local);
        counters_.can_removals++;
      }
    }
    for (int mi : rpi_[a]) {
      auto& ps = canr_[mi][b];
      if (ps.initialized()) {
        int s_local = side_pos_[members_[mi].side()][a] - members_[mi].desc().s_lo;
        ps.erase(s_local);
        counters_.can_removals++;
      }
    }
  }
}

void MergeClosure::drain(std::vector<std::pair<int, int>>& queue) {
  std::size_t head = 0;
  while (head < queue.size()) {
    auto [a, b] = queue[head++];
    // forward: x in Out(b) cap Unreachable(a)
    for (int mi : rpi_[b]) {
      ReachSubmatrix& sm = members_[mi];
      int side = sm.side();
      int s_local = side_pos_[side][b] - sm.desc().s_lo;
      if (!sm.row_active(s_local)) continue;
      for (const Interval& iv : sm.row_intervals(s_local)) {
        if (cfg_.materialize_can) {
          const PredSet& ps = can_[mi][a];
          if (!ps.initialized() || ps.empty()) continue;
          int x = ps.next_in(iv.lo, iv.hi);
          while (x != -1) {
            counters_.candidate_probes++;
            int g_x = g_of_side_[side][sm.desc().t_lo + x];
            flip(a, g_x, queue);  // erases x from the candidate set
            x = ps.next_in(x + 1, iv.hi);
          }
        } else {
          int x = sm.act_col_ones_.next_in(iv.lo, iv.hi);
          while (x != -1) {
            counters_.candidate_probes++;
            int g_x = g_of_side_[side][sm.desc().t_lo + x];
            if (g_x != a && !closure_.get(a, g_x)) flip(a, g_x, queue);
            x = sm.act_col_ones_.next_in(x + 1, iv.hi);
          }
        }
      }
    }
    // backward: x in In(a) cap CannotReach(b)
    for (int mi : cpi_[a]) {
      ReachSubmatrix& sm = members_[mi];
      int side = sm.side();
      int t_local = side_pos_[side][a] - sm.desc().t_lo;
      if (!sm.col_active(t_local)) continue;
      for (const Interval& iv : sm.col_intervals(t_local)) {
        if (cfg_.materialize_can) {
          const PredSet& ps = canr_[mi][b];
          if (!ps.initialized() || ps.empty()) continue;
          int x = ps.next_in(iv.lo, iv.hi);
          while (x != -1) {
            counters_.candidate_probes++;
            int g_x = g_of_side_[side][sm.desc().s_lo + x];
            flip(g_x, b, queue);
            x = ps.next_in(x + 1, iv.hi);
          }
        } else {
          int x = sm.act_row_ones_.next_in(iv.lo, iv.hi);
          while (x != -1) {
            counters_.candidate_probes++;
            int g_x = g_of_side_[side][sm.desc().s_lo + x];
            if (g_x != b && !closure_.get(g_x, b)) flip(g_x, b, queue);
            x = sm.act_row_ones_.next_in(x + 1, iv.hi);
          }
        }
      }
    }
  }
}

std::vector<std::pair<VId, VId>> MergeClosure::update(
    int side, std::span<const std::pair<VId, VId>> newly_one) {
  require(side == 1 || side == 2, Err::BadParams, "side must be 1 or 2");
  return run_batch(side - 1, newly_one);
}

std::vector<std::pair<VId, VId>> MergeClosure::run_batch(
    int side, std::span<const std::pair<VId, VId>> newly_one) {
  long long first_flip = counters_.flips;
  std::vector<std::pair<int, int>> queue;
  std::vector<int> touched_members;
  for (auto [su, sv] : newly_one) {
    int gu = global_of(su), gv = global_of(sv);
    int pu = side_pos_[side][gu], pv = side_pos_[side][gv];
    require(pu >= 0 && pv >= 0, Err::UnknownVertex, "pair outside the side's ground set");
    require(gu != gv, Err::BadParams, "diagonal update");
    // the unique member holding the cell
    int found = -1;
    for (int mi : part_[side].row_members[pu]) {
      const auto& d = part_[side].members[mi];
      if (pv >= d.t_lo && pv < d.t_hi) {
        found = member_side_base_[side] + mi;
        break;
      }
    }
    require(found >= 0, Err::PreconditionViolated, "no member covers the cell");
    ReachSubmatrix& sm = members_[found];
    auto [col_act, row_act] = sm.set_cell(pu - sm.desc().s_lo, pv - sm.desc().t_lo);
    touched_members.push_back(found);
    if (col_act) on_col_activated(found, pv - sm.desc().t_lo);
    if (row_act) on_row_activated(found, pu - sm.desc().s_lo);
    if (!closure_.get(gu, gv)) flip(gu, gv, queue);
  }
  drain(queue);
  if (cfg_.check_caps) {
    std::sort(touched_members.begin(), touched_members.end());
    touched_members.erase(std::unique(touched_members.begin(), touched_members.end()),
                          touched_members.end());
    for (int mi : touched_members) members_[mi].check_caps(1, cfg_.block_cap);
  }
  std::vector<std::pair<VId, VId>> out;
  out.reserve(counters_.flips - first_flip);
  for (auto [a, b] : queue) out.push_back({ids_[a], ids_[b]});
  return out;
}

std::vector<VId> MergeClosure::candidates_intersect(VId va, VId vb) const {
  int a = global_of(va), b = global_of(vb);
  std::vector<VId> out;
  for (int mi : rpi_[b]) {
    const ReachSubmatrix& sm = members_[mi];
    int side = sm.side();
    int s_local = side_pos_[side][b] - sm.desc().s_lo;
    if (!sm.row_active(s_local)) continue;
    for (const Interval& iv : sm.row_intervals(s_local)) {
      int x = sm.act_col_ones_.next_in(iv.lo, iv.hi);
      while (x != -1) {
        int g_x = g_of_side_[side][sm.desc().t_lo + x];
        if (g_x != a && !closure_.get(a, g_x)) out.push_back(ids_[g_x]);
        x = sm.act_col_ones_.next_in(x + 1, iv.hi);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace planar_reach::monge
