#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "seds/board.hpp"

namespace seds {

enum class AtariAdjustment { MultiLibertyOnly, Always, Off };

inline const char* to_string(AtariAdjustment a) noexcept {
  switch (a) {
    case AtariAdjustment::MultiLibertyOnly: return "multi_liberty_only";
    case AtariAdjustment::Always: return "always";
    case AtariAdjustment::Off: return "off";
  }
  return "?";
}

inline std::optional<AtariAdjustment> parse_atari_adjustment(std::string_view s) {
  if (s == "multi_liberty_only") return AtariAdjustment::MultiLibertyOnly;
  if (s == "always") return AtariAdjustment::Always;
  if (s == "off") return AtariAdjustment::Off;
  return std::nullopt;
}

struct SolverConfig {
  double stop_value = 1e-3;
  int max_iter = 5;
  AtariAdjustment atari_adjustment = AtariAdjustment::MultiLibertyOnly;

  bool valid() const noexcept { return stop_value > 0.0 && std::isfinite(stop_value) && max_iter >= 1; }
};

/// Dynamical variables of a position: white ownership per empty point and
/// survival per block. Black ownership is always 1 - w.
struct SedsState {
  int size = 0;
  std::vector<double> w;              // indexed by point; only empty points are meaningful
  std::vector<double> s;              // indexed by block id
  std::vector<std::uint8_t> clamped;  // indexed by block id; solver never updates these

  static constexpr std::uint8_t kFree = 0;
  static constexpr std::uint8_t kStaticLife = 1;
  static constexpr std::uint8_t kPinned = 2;  // set by the caller, survives moves

  double b(int p) const { return 1.0 - w[p]; }

  /// Fixes a block at full strength.
  void clamp(BlockId id, std::uint8_t why = kPinned) {
    s[id] = 1.0;
    clamped[id] = why;
  }
  bool is_clamped(BlockId id) const { return clamped[id] != 0; }
};

struct BarValues {
  double w_bar = 0.0;
  double b_bar = 0.0;
};

/// Per-unit update counts. Points occupy slots [0, area), blocks follow at
/// area + id.
struct SolveStats {
  int area = 0;
  std::vector<int> iterations;
  long sweeps = 0;
  bool converged = true;

  int point_iterations(int p) const { return iterations[p]; }
  int block_iterations(BlockId id) const {
    const std::size_t slot = static_cast<std::size_t>(area + id);
    return slot < iterations.size() ? iterations[slot] : 0;
  }
};

struct SolveResult {
  SedsState state;
  SolveStats stats;
};

class DegenerateBars : public std::domain_error {
 public:
  DegenerateBars() : std::domain_error("both bar values are zero") {}
};

class NoConvergence : public std::runtime_error {
 public:
  explicit NoConvergence(int sweeps)
      : std::runtime_error("dense iteration did not converge after " + std::to_string(sweeps) +
                           " sweeps") {}
};

inline SedsState init_state(const Board& board) {
  SedsState st;
  st.size = board.size();
  st.w.assign(board.area(), 0.5);
  st.s.assign(board.id_capacity(), 1.0);
  st.clamped.assign(board.id_capacity(), 0);
  for (BlockId id : board.block_ids())
    if (board.block(id).statically_alive) st.clamped[id] = SedsState::kStaticLife;
  return st;
}

/// Probability that at least one neighbour of `point` ends up White / Black.
inline BarValues bar_values(const Board& board, const SedsState& state, int point) {
  double none_white = 1.0;
  double none_black = 1.0;
  board.for_each_point_neighbour(point, [&](Unit u) {
    double wc, bc;
    if (u.is_point()) {
      wc = state.w[u.index];
      bc = 1.0 - wc;
    } else {
      const double sv = state.s[u.index];
      if (board.block(u.index).color == Color::White) {
        wc = sv;
        bc = 1.0 - sv;
      } else {
        wc = 1.0 - sv;
        bc = sv;
      }
    }
    none_white *= 1.0 - wc;
    none_black *= 1.0 - bc;
  });
  return {1.0 - none_white, 1.0 - none_black};
}

inline BarValues bar_values(const Board& board, const SedsState& state, Coord c) {
  return bar_values(board, state, to_index(c, board.size()));
}

inline double update_point(BarValues bar) {
  const double total = bar.w_bar + bar.b_bar;
  if (!(total > 0.0)) throw DegenerateBars();
  return bar.w_bar / total;
}

/// Survival of a block: one minus the probability that every adjacent
/// opponent block lives and every liberty falls to the opponent.
inline double update_block(const Board& board, const SedsState& state, BlockId id,
                           AtariAdjustment adjustment) {
  const Block& blk = board.block(id);
  double product = 1.0;
  for (BlockId k : blk.adjacent_blocks)
    if (board.block(k).color != blk.color) product *= state.s[k];

  const bool black = blk.color == Color::Black;
  const std::size_t n_libs = blk.liberties.size();
  const bool adjust = adjustment == AtariAdjustment::Always
                          ? n_libs >= 1
                          : adjustment == AtariAdjustment::MultiLibertyOnly && n_libs >= 2;
  std::size_t skip = n_libs;
  if (adjust) {
    double lowest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_libs; ++i) {
      const double wv = state.w[blk.liberties[i]];
      const double opp = black ? wv : 1.0 - wv;
      if (opp < lowest) {
        lowest = opp;
        skip = i;
      }
    }
  }
  for (std::size_t i = 0; i < n_libs; ++i) {
    if (i == skip) continue;
    const double wv = state.w[blk.liberties[i]];
    product *= black ? wv : 1.0 - wv;
  }
  return 1.0 - product;
}

namespace detail {

inline double recompute_unit(const Board& board, const SedsState& state, int unit,
                             const SolverConfig& config) {
  const int area = board.area();
  if (unit < area) return update_point(bar_values(board, state, unit));
  return update_block(board, state, unit - area, config.atari_adjustment);
}

inline double& unit_value(SedsState& state, int area, int unit) {
  return unit < area ? state.w[unit] : state.s[unit - area];
}

template <class F>
void for_each_unit_neighbour(const Board& board, int unit, F&& f) {
  const int area = board.area();
  if (unit < area) {
    board.for_each_point_neighbour(unit, [&](Unit u) {
      f(u.is_point() ? u.index : area + u.index);
    });
    return;
  }
  const Block& blk = board.block(unit - area);
  for (int p : blk.liberties) f(p);
  for (BlockId k : blk.adjacent_blocks) f(area + k);
}

inline bool updatable(const Board& board, const SedsState& state, int unit) {
  const int area = board.area();
  if (unit < area) return board.is_empty(unit);
  const BlockId id = unit - area;
  return board.has_block(id) && !state.is_clamped(id);
}

/// FIFO Gauss-Seidel propagation from an ordered seed list.
inline SolveStats run_worklist(const Board& board, SedsState& state, const SolverConfig& config,
                               const std::vector<int>& seeds) {
  const int area = board.area();
  const int n_units = area + board.id_capacity();
  SolveStats stats;
  stats.area = area;
  stats.iterations.assign(n_units, 0);

  std::vector<std::uint8_t> queued(n_units, 0);
  std::deque<int> queue;
  for (int u : seeds) {
    if (u < 0 || u >= n_units || queued[u] || !updatable(board, state, u)) continue;
    queued[u] = 1;
    queue.push_back(u);
  }

  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    queued[u] = 0;

    double& slot = unit_value(state, area, u);
    const double next = recompute_unit(board, state, u, config);
    const double change = std::abs(next - slot);
    slot = next;
    ++stats.iterations[u];
    ++stats.sweeps;

    if (change < config.stop_value) continue;
    for_each_unit_neighbour(board, u, [&](int v) {
      if (queued[v] || !updatable(board, state, v)) return;
      if (stats.iterations[v] >= config.max_iter) {
        stats.converged = false;
        return;
      }
      queued[v] = 1;
      queue.push_back(v);
    });
  }
  return stats;
}

inline std::vector<int> all_units(const Board& board) {
  std::vector<int> units;
  for (int p = 0; p < board.area(); ++p)
    if (board.is_empty(p)) units.push_back(p);
  for (BlockId id : board.block_ids()) units.push_back(board.area() + id);
  return units;
}

}  // namespace detail

/// Worklist fixed-point iteration over every non-clamped unit.
inline SolveResult solve(const Board& board, SedsState state, const SolverConfig& config = {}) {
  SolveStats stats = detail::run_worklist(board, state, config, detail::all_units(board));
  return {std::move(state), std::move(stats)};
}

/// One synchronous (Jacobi) update of every non-clamped unit from a snapshot.
/// Returns the largest absolute change.
inline double dense_sweep(const Board& board, SedsState& state, const SolverConfig& config) {
  const SedsState snapshot = state;
  double largest = 0.0;
  for (int u : detail::all_units(board)) {
    if (!detail::updatable(board, snapshot, u)) continue;
    const double next = detail::recompute_unit(board, snapshot, u, config);
    double& slot = detail::unit_value(state, board.area(), u);
    largest = std::max(largest, std::abs(next - slot));
    slot = next;
  }
  return largest;
}

/// Largest |a - b| over the empty points and live blocks of the board.
inline double max_unit_deviation(const Board& board, const SedsState& a, const SedsState& b) {
  double m = 0.0;
  for (int p = 0; p < board.area(); ++p)
    if (board.is_empty(p)) m = std::max(m, std::abs(a.w[p] - b.w[p]));
  for (BlockId id : board.block_ids()) m = std::max(m, std::abs(a.s[id] - b.s[id]));
  return m;
}

constexpr int kDenseSweepCap = 10000;

/// Reference solver: Jacobi sweeps until the largest change drops below
/// stop_value / 10.
inline SedsState solve_dense_oracle(const Board& board, SedsState state,
                                    const SolverConfig& config = {}) {
  const double tol = config.stop_value / 10.0;
  for (int sweep = 1; sweep <= kDenseSweepCap; ++sweep)
    if (dense_sweep(board, state, config) < tol) return state;
  throw NoConvergence(kDenseSweepCap);
}

/// Carries a solved state across a move and re-solves only around the
/// units the move touched.
inline SolveResult resolve_incremental(const Board& board_after, const SedsState& prev,
                                       const MoveDelta& delta, const SolverConfig& config = {}) {
  SedsState st = prev;
  const int area = board_after.area();
  const int cap = board_after.id_capacity();
  st.s.resize(cap, 1.0);
  st.clamped.resize(cap, 0);

  for (int p : delta.captured_points) st.w[p] = 0.5;
  if (delta.new_block != kNoBlock) {
    double inherited = 1.0;
    for (BlockId m : delta.merged) inherited = std::min(inherited, prev.s[m]);
    st.s[delta.new_block] = inherited;
    st.clamped[delta.new_block] = SedsState::kFree;
  }
  for (BlockId id : delta.changed_blocks) {
    if (!board_after.has_block(id) || st.clamped[id] == SedsState::kPinned) continue;
    if (board_after.block(id).statically_alive)
      st.clamp(id, SedsState::kStaticLife);
    else
      st.clamped[id] = SedsState::kFree;
  }

  std::vector<int> seeds;
  auto seed_with_neighbours = [&](int u) {
    seeds.push_back(u);
    if (u >= area || board_after.is_empty(u))
      detail::for_each_unit_neighbour(board_after, u, [&](int v) { seeds.push_back(v); });
  };
  for (int p : delta.changed_points)
    if (board_after.is_empty(p)) seed_with_neighbours(p);
  for (BlockId id : delta.changed_blocks)
    if (board_after.has_block(id)) seed_with_neighbours(area + id);
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

  SolveStats stats = detail::run_worklist(board_after, st, config, seeds);
  return {std::move(st), std::move(stats)};
}

}  // namespace seds
