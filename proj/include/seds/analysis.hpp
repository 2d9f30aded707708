#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "seds/board.hpp"
#include "seds/solver.hpp"

namespace seds {

/// Expected final area per side. Dead stones count for the opponent.
struct Score {
  double black_total = 0.0;
  double white_total = 0.0;
  double net = 0.0;  // black_total - white_total
};

inline Score score(const Board& board, const SedsState& state) {
  Score sc;
  for (int p = 0; p < board.area(); ++p) {
    if (!board.is_empty(p)) continue;
    sc.black_total += 1.0 - state.w[p];
    sc.white_total += state.w[p];
  }
  for (BlockId id : board.block_ids()) {
    const Block& b = board.block(id);
    const double n = static_cast<double>(b.stones.size());
    const double own = state.s[id] * n;
    const double lost = (1.0 - state.s[id]) * n;
    if (b.color == Color::Black) {
      sc.black_total += own;
      sc.white_total += lost;
    } else {
      sc.white_total += own;
      sc.black_total += lost;
    }
  }
  sc.net = sc.black_total - sc.white_total;
  return sc;
}

inline double mover_score(const Score& sc, Color mover) {
  return mover == Color::Black ? sc.net : -sc.net;
}

struct RankedMove {
  Coord coord;
  double score = 0.0;  // net from the mover's perspective
  long sweeps = 0;     // worklist pops of the re-solve after this move
};

/// Legal moves ordered best first; ties broken row-major.
struct MoveRanking {
  Color mover = Color::Black;
  int size = 0;
  std::vector<RankedMove> entries;

  std::optional<std::size_t> position_of(Coord c) const {
    for (std::size_t i = 0; i < entries.size(); ++i)
      if (entries[i].coord == c) return i;
    return std::nullopt;
  }

  /// 100 * (entries ordered after c) / total.
  double percentile(Coord c) const {
    const auto pos = position_of(c);
    if (!pos) throw std::out_of_range("move not in ranking");
    const double n = static_cast<double>(entries.size());
    return 100.0 * (n - 1.0 - static_cast<double>(*pos)) / n;
  }
};

class UnknownMove : public std::out_of_range {
 public:
  UnknownMove() : std::out_of_range("move not present in ranking") {}
};

/// Bucket 0..99 of a move's rank: 99 is the top bucket.
inline int percentile_of(const MoveRanking& ranking, Coord c) {
  const auto pos = ranking.position_of(c);
  if (!pos) throw UnknownMove();
  const long n = static_cast<long>(ranking.entries.size());
  const long worse = n - 1 - static_cast<long>(*pos);
  return static_cast<int>((100 * worse) / n);
}

inline void sort_ranking(std::vector<RankedMove>& entries) {
  std::stable_sort(entries.begin(), entries.end(), [](const RankedMove& a, const RankedMove& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.coord.row != b.coord.row) return a.coord.row < b.coord.row;
    return a.coord.col < b.coord.col;
  });
}

/// Evaluates one candidate move starting from the parent's solved state.
inline RankedMove evaluate_move(const Board& board, const SedsState& solved, Coord c, Color mover,
                                const SolverConfig& config) {
  Board next = board;
  const MoveDelta delta = next.play(c, mover);
  SolveResult r = resolve_incremental(next, solved, delta, config);
  return {c, mover_score(score(next, r.state), mover), r.stats.sweeps};
}

/// 1-ply ranking from an already solved parent state. With jobs > 1 the
/// candidates are spread over worker threads, each on its own board copy.
inline MoveRanking rank_moves_from(const Board& board, const SedsState& solved, Color mover,
                                   const SolverConfig& config, unsigned jobs = 1) {
  MoveRanking ranking;
  ranking.mover = mover;
  ranking.size = board.size();
  const std::vector<Coord> moves = board.legal_moves(mover);
  ranking.entries.resize(moves.size());

  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < moves.size(); i += step)
      ranking.entries[i] = evaluate_move(board, solved, moves[i], mover, config);
  };
  if (jobs <= 1 || moves.size() < 2) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    const std::size_t n = std::min<std::size_t>(jobs, moves.size());
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(work, t, n);
    for (auto& th : pool) th.join();
  }
  sort_ranking(ranking.entries);
  return ranking;
}

inline MoveRanking rank_moves(const Board& board, Color mover, const SolverConfig& config = {},
                              unsigned jobs = 1) {
  const SolveResult parent = solve(board, init_state(board), config);
  return rank_moves_from(board, parent.state, mover, config, jobs);
}

/// Iteration counts per unit, plus a per-point aggregate (max over the point
/// and its adjacent blocks).
struct InstabilityMap {
  int size = 0;
  std::vector<int> point_counts;  // per point index
  std::vector<int> block_counts;  // per block id
  std::vector<int> aggregate;     // per point index

  int at(Coord c) const { return aggregate[to_index(c, size)]; }
};

inline InstabilityMap instability_map(const Board& board, const SolveStats& stats) {
  InstabilityMap m;
  m.size = board.size();
  const int area = board.area();
  m.point_counts.assign(area, 0);
  m.aggregate.assign(area, 0);
  m.block_counts.assign(board.id_capacity(), 0);
  for (int p = 0; p < area; ++p)
    if (p < static_cast<int>(stats.iterations.size())) m.point_counts[p] = stats.iterations[p];
  for (BlockId id : board.block_ids()) m.block_counts[id] = stats.block_iterations(id);
  for (int p = 0; p < area; ++p) {
    if (board.is_empty(p)) {
      int best = m.point_counts[p];
      board.for_each_point_neighbour(p, [&](Unit u) {
        if (!u.is_point()) best = std::max(best, m.block_counts[u.index]);
      });
      m.aggregate[p] = best;
    } else {
      m.aggregate[p] = m.block_counts[board.block_at(p)];
    }
  }
  return m;
}

namespace detail {

// Black-weighted value of whatever sits at q; 0.5 off the board.
inline double black_weight(const Board& board, const SedsState& state, int row, int col) {
  const int n = board.size();
  if (row < 0 || col < 0 || row >= n || col >= n) return 0.5;
  const int q = row * n + col;
  if (board.is_empty(q)) return 1.0 - state.w[q];
  const BlockId id = board.block_at(q);
  return board.block(id).color == Color::Black ? state.s[id] : 1.0 - state.s[id];
}

struct Cross {
  double north, south, west, east;
};

inline Cross cross_values(const Board& board, const SedsState& state, Coord c) {
  return {black_weight(board, state, c.row - 1, c.col), black_weight(board, state, c.row + 1, c.col),
          black_weight(board, state, c.row, c.col - 1), black_weight(board, state, c.row, c.col + 1)};
}

}  // namespace detail

/// |A + D - B - C| with A/D the north/south and B/C the west/east neighbour
/// values; large where cutting or connecting matters.
inline double quadrupole_indicator(const Board& board, const SedsState& state, Coord c) {
  const auto x = detail::cross_values(board, state, c);
  return std::abs(x.north + x.south - x.west - x.east);
}

struct Dipole {
  double dx = 0.0;  // east - west
  double dy = 0.0;  // north - south
  double magnitude() const { return std::hypot(dx, dy); }
};

inline Dipole dipole_indicator(const Board& board, const SedsState& state, Coord c) {
  const auto x = detail::cross_values(board, state, c);
  return {x.east - x.west, x.north - x.south};
}

}  // namespace seds
