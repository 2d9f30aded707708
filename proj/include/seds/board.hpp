#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "seds/coord.hpp"

namespace seds {

using BlockId = int;
constexpr BlockId kNoBlock = -1;

struct Block {
  BlockId id = kNoBlock;
  Color color = Color::Black;
  std::vector<int> stones;             // point indices, ascending
  std::vector<int> liberties;          // point indices, ascending
  std::vector<BlockId> adjacent_blocks;  // both colours, ascending
  bool statically_alive = false;

  bool live() const noexcept { return !stones.empty(); }
};

/// A node of the evaluation graph: an empty point or a block.
struct Unit {
  enum class Kind : std::uint8_t { Point, Block };
  Kind kind = Kind::Point;
  int index = 0;  // point index or block id

  static Unit point(int p) noexcept { return {Kind::Point, p}; }
  static Unit block(BlockId id) noexcept { return {Kind::Block, id}; }
  bool is_point() const noexcept { return kind == Kind::Point; }

  friend auto operator<=>(const Unit&, const Unit&) = default;
};

/// What a single move changed. Point lists hold post-move empty points; block
/// lists hold post-move block ids.
struct MoveDelta {
  std::optional<Coord> coord;  // nullopt for a pass
  Color color = Color::Black;
  BlockId new_block = kNoBlock;
  std::vector<BlockId> merged;
  std::vector<BlockId> captured;
  std::vector<int> captured_points;
  std::vector<int> changed_points;
  std::vector<BlockId> changed_blocks;

  bool empty() const noexcept {
    return !coord && changed_points.empty() && changed_blocks.empty();
  }
};

class BoardError : public std::invalid_argument {
 public:
  enum class Kind { OverlappingStones, ZeroLibertyBlock, BadCoord, BadSize };

  BoardError(Kind kind, const std::string& what) : std::invalid_argument(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

inline const char* to_string(BoardError::Kind k) noexcept {
  switch (k) {
    case BoardError::Kind::OverlappingStones: return "OverlappingStones";
    case BoardError::Kind::ZeroLibertyBlock: return "ZeroLibertyBlock";
    case BoardError::Kind::BadCoord: return "BadCoord";
    case BoardError::Kind::BadSize: return "BadSize";
  }
  return "?";
}

enum class IllegalReason { Occupied, Suicide, Ko };

inline const char* to_string(IllegalReason r) noexcept {
  switch (r) {
    case IllegalReason::Occupied: return "Occupied";
    case IllegalReason::Suicide: return "Suicide";
    case IllegalReason::Ko: return "Ko";
  }
  return "?";
}

class IllegalMove : public std::runtime_error {
 public:
  IllegalMove(IllegalReason reason, Coord c)
      : std::runtime_error(std::string("illegal move (") + to_string(reason) + ") at col " +
                           std::to_string(c.col) + " row " + std::to_string(c.row)),
        reason_(reason) {}
  IllegalReason reason() const noexcept { return reason_; }

 private:
  IllegalReason reason_;
};

namespace detail {

/// Orthogonal neighbour table for one board size, in north, west, east, south order.
struct Geometry {
  int size = 0;
  std::vector<std::array<int, 4>> adj;
  std::vector<std::uint8_t> degree;

  explicit Geometry(int n) : size(n), adj(n * n), degree(n * n, 0) {
    for (int p = 0; p < n * n; ++p) {
      const int r = p / n, c = p % n;
      auto& a = adj[p];
      auto& d = degree[p];
      if (r > 0) a[d++] = p - n;
      if (c > 0) a[d++] = p - 1;
      if (c + 1 < n) a[d++] = p + 1;
      if (r + 1 < n) a[d++] = p + n;
    }
  }

  std::span<const int> neighbours(int p) const { return {adj[p].data(), degree[p]}; }
};

inline const Geometry& geometry(int size) {
  static const std::vector<std::unique_ptr<Geometry>> table = [] {
    std::vector<std::unique_ptr<Geometry>> t(kMaxBoardSize + 1);
    for (int n = kMinBoardSize; n <= kMaxBoardSize; ++n) t[n] = std::make_unique<Geometry>(n);
    return t;
  }();
  return *table.at(size);
}

template <class T>
void insert_sorted(std::vector<T>& v, T x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || *it != x) v.insert(it, x);
}

template <class T>
bool contains_sorted(const std::vector<T>& v, T x) {
  return std::binary_search(v.begin(), v.end(), x);
}

}  // namespace detail

class Board;
inline std::vector<BlockId> benson_alive(const Board& board);

/// Go position with an incrementally maintained block partition and
/// point/block neighbourhood graph.
class Board {
 public:
  explicit Board(int size) : size_(size) {
    if (size < kMinBoardSize || size > kMaxBoardSize)
      throw BoardError(BoardError::Kind::BadSize, "board size out of range: " + std::to_string(size));
    geo_ = &detail::geometry(size);
    grid_.assign(size * size, kNoBlock);
  }

  int size() const noexcept { return size_; }
  int area() const noexcept { return size_ * size_; }

  bool is_empty(int p) const { return grid_[p] == kNoBlock; }
  BlockId block_at(int p) const { return grid_[p]; }
  BlockId block_at(Coord c) const { return grid_[to_index(c, size_)]; }
  std::optional<Color> color_at(int p) const {
    if (grid_[p] == kNoBlock) return std::nullopt;
    return blocks_[grid_[p]].color;
  }

  std::span<const int> adjacent_points(int p) const { return geo_->neighbours(p); }

  /// One past the largest block id ever issued.
  int id_capacity() const noexcept { return static_cast<int>(blocks_.size()); }
  bool has_block(BlockId id) const {
    return id >= 0 && id < id_capacity() && blocks_[id].live();
  }
  const Block& block(BlockId id) const {
    if (!has_block(id)) throw std::out_of_range("no block " + std::to_string(id));
    return blocks_[id];
  }

  /// Live block ids, ascending.
  std::vector<BlockId> block_ids() const {
    std::vector<BlockId> out;
    for (const auto& b : blocks_)
      if (b.live()) out.push_back(b.id);
    return out;
  }
  int num_blocks() const {
    return static_cast<int>(std::count_if(blocks_.begin(), blocks_.end(),
                                          [](const Block& b) { return b.live(); }));
  }
  int num_empty() const {
    return static_cast<int>(std::count(grid_.begin(), grid_.end(), kNoBlock));
  }
  int num_stones() const { return area() - num_empty(); }

  std::vector<int> empty_points() const {
    std::vector<int> out;
    for (int p = 0; p < area(); ++p)
      if (grid_[p] == kNoBlock) out.push_back(p);
    return out;
  }

  /// Calls f(Unit) once per distinct neighbouring unit of empty point p.
  template <class F>
  void for_each_point_neighbour(int p, F&& f) const {
    std::array<BlockId, 4> seen{};
    int n_seen = 0;
    for (int q : geo_->neighbours(p)) {
      const BlockId id = grid_[q];
      if (id == kNoBlock) {
        f(Unit::point(q));
        continue;
      }
      if (std::find(seen.begin(), seen.begin() + n_seen, id) != seen.begin() + n_seen) continue;
      seen[n_seen++] = id;
      f(Unit::block(id));
    }
  }

  std::vector<Unit> point_neighbours(int p) const {
    std::vector<Unit> out;
    for_each_point_neighbour(p, [&](Unit u) { out.push_back(u); });
    return out;
  }

  std::optional<Coord> ko_point() const noexcept { return ko_point_; }

  /// Colour barred from playing at ko_point() on the next move.
  Color ko_color() const noexcept { return ko_color_; }

  /// Restores a ko restriction on a freshly built position.
  void set_ko(Coord c, Color barred) {
    if (!on_board(c, size_) || !is_empty(to_index(c, size_)))
      throw BoardError(BoardError::Kind::BadCoord, "ko point must be an empty intersection");
    ko_point_ = c;
    ko_color_ = barred;
  }

  std::optional<IllegalReason> check_move(Coord c, Color color) const {
    if (!on_board(c, size_)) return IllegalReason::Occupied;
    const int p = to_index(c, size_);
    if (grid_[p] != kNoBlock) return IllegalReason::Occupied;
    if (ko_point_ && *ko_point_ == c && ko_color_ == color) return IllegalReason::Ko;
    for (int q : geo_->neighbours(p)) {
      const BlockId id = grid_[q];
      if (id == kNoBlock) return std::nullopt;
      const Block& b = blocks_[id];
      const bool single = b.liberties.size() == 1;
      if (b.color == color ? !single : single) return std::nullopt;
    }
    return IllegalReason::Suicide;
  }

  bool is_legal(Coord c, Color color) const { return !check_move(c, color).has_value(); }

  std::vector<Coord> legal_moves(Color color) const {
    std::vector<Coord> out;
    for (int p = 0; p < area(); ++p) {
      if (grid_[p] != kNoBlock) continue;
      const Coord c = from_index(p, size_);
      if (is_legal(c, color)) out.push_back(c);
    }
    return out;
  }

  /// Places a stone, resolving merges and captures in place.
  MoveDelta play(Coord c, Color color) {
    if (auto why = check_move(c, color)) throw IllegalMove(*why, c);
    const int p = to_index(c, size_);

    MoveDelta delta;
    delta.coord = c;
    delta.color = color;

    std::vector<BlockId> affected;
    std::vector<BlockId> opponents;
    for (int q : geo_->neighbours(p)) {
      const BlockId id = grid_[q];
      if (id == kNoBlock) continue;
      if (blocks_[id].color == color)
        detail::insert_sorted(delta.merged, id);
      else
        detail::insert_sorted(opponents, id);
    }

    const BlockId nid = id_capacity();
    Block fresh;
    fresh.id = nid;
    fresh.color = color;
    fresh.stones.push_back(p);
    for (BlockId m : delta.merged) {
      Block& old = blocks_[m];
      fresh.stones.insert(fresh.stones.end(), old.stones.begin(), old.stones.end());
      affected.insert(affected.end(), old.adjacent_blocks.begin(), old.adjacent_blocks.end());
      old = Block{m, old.color, {}, {}, {}, false};
    }
    std::sort(fresh.stones.begin(), fresh.stones.end());
    for (int s : fresh.stones) grid_[s] = nid;
    blocks_.push_back(std::move(fresh));
    delta.new_block = nid;

    for (BlockId o : opponents) {
      Block& ob = blocks_[o];
      std::erase(ob.liberties, p);
      if (!ob.liberties.empty()) {
        affected.push_back(o);
        continue;
      }
      delta.captured.push_back(o);
      affected.insert(affected.end(), ob.adjacent_blocks.begin(), ob.adjacent_blocks.end());
      for (int s : ob.stones) {
        grid_[s] = kNoBlock;
        delta.captured_points.push_back(s);
      }
      ob = Block{o, ob.color, {}, {}, {}, false};
    }
    std::sort(delta.captured_points.begin(), delta.captured_points.end());

    affected.push_back(nid);
    std::sort(affected.begin(), affected.end());
    affected.erase(std::unique(affected.begin(), affected.end()), affected.end());
    std::erase_if(affected, [&](BlockId id) { return !blocks_[id].live(); });
    for (BlockId id : affected) rebuild_links(id);

    const Block& placed = blocks_[nid];
    ko_point_.reset();
    if (delta.captured_points.size() == 1 && placed.stones.size() == 1 &&
        placed.liberties.size() == 1) {
      ko_point_ = from_index(delta.captured_points.front(), size_);
      ko_color_ = opposite(color);
    }

    std::vector<int> points = placed.liberties;
    for (int s : delta.captured_points) {
      points.push_back(s);
      for (int q : geo_->neighbours(s))
        if (grid_[q] == kNoBlock) points.push_back(q);
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    delta.changed_points = std::move(points);

    delta.changed_blocks = affected;
    for (BlockId id : refresh_static_life()) detail::insert_sorted(delta.changed_blocks, id);
    return delta;
  }

  /// Records a pass: clears the ko restriction only.
  MoveDelta pass(Color color) {
    ko_point_.reset();
    MoveDelta d;
    d.color = color;
    return d;
  }

  /// Rebuilds the board from stone lists.
  static Board build(int size, std::span<const Coord> black, std::span<const Coord> white) {
    Board b(size);
    std::vector<std::int8_t> colour(size * size, -1);
    auto place = [&](std::span<const Coord> stones, Color c) {
      for (Coord s : stones) {
        if (!on_board(s, size))
          throw BoardError(BoardError::Kind::BadCoord, "stone off board");
        std::int8_t& slot = colour[to_index(s, size)];
        if (slot != -1) throw BoardError(BoardError::Kind::OverlappingStones, "overlapping stones");
        slot = static_cast<std::int8_t>(c);
      }
    };
    place(black, Color::Black);
    place(white, Color::White);

    const auto& geo = *b.geo_;
    std::vector<int> stack;
    for (int start = 0; start < b.area(); ++start) {
      if (colour[start] == -1 || b.grid_[start] != kNoBlock) continue;
      Block blk;
      blk.id = b.id_capacity();
      blk.color = static_cast<Color>(colour[start]);
      stack.assign(1, start);
      b.grid_[start] = blk.id;
      while (!stack.empty()) {
        const int p = stack.back();
        stack.pop_back();
        blk.stones.push_back(p);
        for (int q : geo.neighbours(p)) {
          if (colour[q] == colour[start] && b.grid_[q] == kNoBlock) {
            b.grid_[q] = blk.id;
            stack.push_back(q);
          }
        }
      }
      std::sort(blk.stones.begin(), blk.stones.end());
      b.blocks_.push_back(std::move(blk));
    }
    for (BlockId id = 0; id < b.id_capacity(); ++id) {
      b.rebuild_links(id);
      if (b.blocks_[id].liberties.empty())
        throw BoardError(BoardError::Kind::ZeroLibertyBlock, "block without liberties");
    }
    b.refresh_static_life();
    return b;
  }

 private:
  void rebuild_links(BlockId id) {
    Block& b = blocks_[id];
    b.liberties.clear();
    b.adjacent_blocks.clear();
    for (int s : b.stones) {
      for (int q : geo_->neighbours(s)) {
        const BlockId other = grid_[q];
        if (other == kNoBlock)
          b.liberties.push_back(q);
        else if (other != id)
          b.adjacent_blocks.push_back(other);
      }
    }
    std::sort(b.liberties.begin(), b.liberties.end());
    b.liberties.erase(std::unique(b.liberties.begin(), b.liberties.end()), b.liberties.end());
    std::sort(b.adjacent_blocks.begin(), b.adjacent_blocks.end());
    b.adjacent_blocks.erase(std::unique(b.adjacent_blocks.begin(), b.adjacent_blocks.end()),
                            b.adjacent_blocks.end());
  }

  // Returns ids whose flag flipped.
  std::vector<BlockId> refresh_static_life() {
    const std::vector<BlockId> alive = benson_alive(*this);
    std::vector<BlockId> flipped;
    for (Block& b : blocks_) {
      if (!b.live()) continue;
      const bool now = detail::contains_sorted(alive, b.id);
      if (now != b.statically_alive) flipped.push_back(b.id);
      b.statically_alive = now;
    }
    return flipped;
  }

  int size_;
  const detail::Geometry* geo_ = nullptr;
  std::vector<BlockId> grid_;
  std::vector<Block> blocks_;
  std::optional<Coord> ko_point_;
  Color ko_color_ = Color::Black;
};

inline Board build_position(int size, std::span<const Coord> black, std::span<const Coord> white) {
  return Board::build(size, black, white);
}

struct MoveResult {
  Board board;
  MoveDelta delta;
};

inline MoveResult apply_move(const Board& board, Coord c, Color color) {
  Board next = board;
  MoveDelta d = next.play(c, color);
  return {std::move(next), std::move(d)};
}

inline std::vector<Coord> legal_moves(const Board& board, Color color) {
  return board.legal_moves(color);
}

/// Unconditionally alive blocks of both colours (Benson's vital-region
/// fixpoint), ascending ids.
inline std::vector<BlockId> benson_alive(const Board& board) {
  const int area = board.area();
  std::vector<BlockId> result;
  std::vector<int> region_of(area);
  std::vector<int> stack;

  for (Color color : {Color::Black, Color::White}) {
    struct Region {
      std::vector<int> empties;
      std::vector<BlockId> border;
      bool live = true;
    };
    std::vector<Region> regions;
    std::fill(region_of.begin(), region_of.end(), -1);

    for (int start = 0; start < area; ++start) {
      if (region_of[start] != -1 || board.color_at(start) == color) continue;
      Region r;
      const int rid = static_cast<int>(regions.size());
      region_of[start] = rid;
      stack.assign(1, start);
      while (!stack.empty()) {
        const int p = stack.back();
        stack.pop_back();
        if (board.is_empty(p)) r.empties.push_back(p);
        for (int q : board.adjacent_points(p)) {
          const auto qc = board.color_at(q);
          if (qc == color) {
            detail::insert_sorted(r.border, board.block_at(q));
          } else if (region_of[q] == -1) {
            region_of[q] = rid;
            stack.push_back(q);
          }
        }
      }
      regions.push_back(std::move(r));
    }

    std::vector<BlockId> candidates;
    for (BlockId id : board.block_ids())
      if (board.block(id).color == color) candidates.push_back(id);
    if (candidates.empty()) continue;

    // healthy[(region, block)]: every empty point of the region is a liberty of the block.
    auto healthy = [&](const Region& r, BlockId id) {
      const auto& libs = board.block(id).liberties;
      return std::all_of(r.empties.begin(), r.empties.end(),
                         [&](int p) { return detail::contains_sorted(libs, p); });
    };

    std::vector<BlockId> alive = candidates;
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<BlockId> keep;
      for (BlockId id : alive) {
        int vital = 0;
        for (const Region& r : regions)
          if (r.live && detail::contains_sorted(r.border, id) && healthy(r, id)) ++vital;
        if (vital >= 2)
          keep.push_back(id);
        else
          changed = true;
      }
      alive.swap(keep);
      for (Region& r : regions) {
        if (!r.live) continue;
        for (BlockId id : r.border) {
          if (!detail::contains_sorted(alive, id)) {
            r.live = false;
            changed = true;
            break;
          }
        }
      }
    }
    result.insert(result.end(), alive.begin(), alive.end());
  }
  std::sort(result.begin(), result.end());
  return result;
}

}  // namespace seds
