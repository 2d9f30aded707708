#pragma once

#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "seds/board.hpp"
#include "seds/coord.hpp"

namespace seds::sgf {

struct Move {
  Color color = Color::Black;
  std::optional<Coord> coord;  // nullopt is a pass

  bool is_pass() const noexcept { return !coord.has_value(); }
  friend bool operator==(const Move&, const Move&) = default;
};

/// Main line of the first game tree in an SGF file.
struct GameRecord {
  int board_size = 19;
  std::vector<Coord> setup_black;
  std::vector<Coord> setup_white;
  std::optional<Color> first_player;  // PL
  std::vector<Move> moves;
  std::map<std::string, std::vector<std::string>> metadata;

  friend bool operator==(const GameRecord&, const GameRecord&) = default;
};

class SgfError : public std::runtime_error {
 public:
  enum class Kind { SyntaxError, UnsupportedSize };

  SgfError(Kind kind, std::size_t offset, const std::string& what)
      : std::runtime_error(what + " at offset " + std::to_string(offset)),
        kind_(kind),
        offset_(offset) {}
  Kind kind() const noexcept { return kind_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

class IllegalRecordedMove : public std::runtime_error {
 public:
  IllegalRecordedMove(std::size_t index, IllegalReason reason)
      : std::runtime_error("recorded move " + std::to_string(index) + " is illegal (" +
                           to_string(reason) + ")"),
        index_(index),
        reason_(reason) {}
  std::size_t index() const noexcept { return index_; }
  IllegalReason reason() const noexcept { return reason_; }

 private:
  std::size_t index_;
  IllegalReason reason_;
};

namespace detail {

struct Property {
  std::string id;
  std::vector<std::string> values;
  std::size_t offset = 0;
};
using Node = std::vector<Property>;

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  // Reads the first game tree and returns the nodes of its main line.
  std::vector<Node> main_line() {
    skip_ws();
    while (pos_ < text_.size() && text_[pos_] != '(') ++pos_;  // tolerate leading junk
    if (pos_ >= text_.size()) fail("no game tree");
    std::vector<Node> nodes;
    tree(nodes, true);
    return nodes;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw SgfError(SgfError::Kind::SyntaxError, pos_, msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void tree(std::vector<Node>& out, bool collect) {
    expect('(');
    if (!peek(';')) fail("empty sequence");
    while (peek(';')) {
      ++pos_;
      Node n = node();
      if (collect) out.push_back(std::move(n));
    }
    bool first = true;
    while (peek('(')) {
      tree(out, collect && first);
      first = false;
    }
    expect(')');
  }

  Node node() {
    Node n;
    while (true) {
      skip_ws();
      if (pos_ >= text_.size()) fail("unterminated node");
      const char c = text_[pos_];
      if (!std::isalpha(static_cast<unsigned char>(c))) break;
      Property p;
      p.offset = pos_;
      while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
        // Old-style long names ("AddBlack") keep only their capitals.
        if (std::isupper(static_cast<unsigned char>(text_[pos_]))) p.id.push_back(text_[pos_]);
        ++pos_;
      }
      if (p.id.empty()) fail("property without identifier");
      if (!peek('[')) fail("property without value");
      while (peek('[')) p.values.push_back(value());
      n.push_back(std::move(p));
    }
    return n;
  }

  std::string value() {
    ++pos_;  // '['
    std::string v;
    while (true) {
      if (pos_ >= text_.size()) fail("unterminated value");
      const char c = text_[pos_++];
      if (c == ']') break;
      if (c == '\\') {
        if (pos_ >= text_.size()) fail("unterminated escape");
        v.push_back(text_[pos_++]);
        continue;
      }
      v.push_back(c);
    }
    return v;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

inline std::optional<Coord> decode_point(const std::string& v, int size, std::size_t offset,
                                         bool allow_pass) {
  if (allow_pass && (v.empty() || (v == "tt" && size <= 19))) return std::nullopt;
  auto axis = [&](char ch) -> int {
    if (ch >= 'a' && ch <= 'z') return ch - 'a';
    if (ch >= 'A' && ch <= 'Z') return ch - 'A' + 26;
    throw SgfError(SgfError::Kind::SyntaxError, offset, "bad coordinate '" + v + "'");
  };
  if (v.size() != 2) throw SgfError(SgfError::Kind::SyntaxError, offset, "bad coordinate '" + v + "'");
  Coord c{axis(v[0]), axis(v[1])};
  if (!on_board(c, size))
    throw SgfError(SgfError::Kind::SyntaxError, offset, "coordinate off board '" + v + "'");
  return c;
}

// Expands "aa:cc" compressed point lists into single points.
inline void decode_point_list(const std::vector<std::string>& values, int size, std::size_t offset,
                              std::vector<Coord>& out) {
  for (const auto& v : values) {
    const auto colon = v.find(':');
    if (colon == std::string::npos) {
      out.push_back(*decode_point(v, size, offset, false));
      continue;
    }
    const Coord a = *decode_point(v.substr(0, colon), size, offset, false);
    const Coord b = *decode_point(v.substr(colon + 1), size, offset, false);
    for (int r = std::min(a.row, b.row); r <= std::max(a.row, b.row); ++r)
      for (int c = std::min(a.col, b.col); c <= std::max(a.col, b.col); ++c) out.push_back({c, r});
  }
}

inline char encode_axis(int v) { return static_cast<char>(v < 26 ? 'a' + v : 'A' + (v - 26)); }

inline std::string escape(const std::string& v) {
  std::string out;
  for (char c : v) {
    if (c == ']' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace detail

inline std::string encode_point(Coord c) {
  return {detail::encode_axis(c.col), detail::encode_axis(c.row)};
}

/// Parses the main line of the first game tree. Only SZ, AB, AW, B, W and PL
/// are interpreted; everything else lands in metadata untouched.
inline GameRecord parse_sgf(std::string_view text) {
  detail::Reader reader(text);
  const std::vector<detail::Node> nodes = reader.main_line();

  GameRecord rec;
  // SZ must be known before any coordinate is decoded.
  for (const auto& n : nodes) {
    for (const auto& p : n) {
      if (p.id != "SZ") continue;
      const std::string& v = p.values.front();
      int a = 0, b = 0;
      const auto colon = v.find(':');
      try {
        a = std::stoi(v.substr(0, colon));
        b = colon == std::string::npos ? a : std::stoi(v.substr(colon + 1));
      } catch (const std::exception&) {
        throw SgfError(SgfError::Kind::SyntaxError, p.offset, "bad SZ value '" + v + "'");
      }
      if (a != b || a < kMinBoardSize || a > kMaxBoardSize)
        throw SgfError(SgfError::Kind::UnsupportedSize, p.offset, "unsupported size '" + v + "'");
      rec.board_size = a;
    }
    break;  // SZ is a root property
  }

  for (const auto& n : nodes) {
    for (const auto& p : n) {
      if (p.id == "SZ") continue;
      if ((p.id == "B" || p.id == "W") && !p.values.empty()) {
        const Color c = p.id == "B" ? Color::Black : Color::White;
        rec.moves.push_back({c, detail::decode_point(p.values.front(), rec.board_size, p.offset, true)});
      } else if ((p.id == "AB" || p.id == "AW") && rec.moves.empty()) {
        detail::decode_point_list(p.values, rec.board_size, p.offset,
                                  p.id == "AB" ? rec.setup_black : rec.setup_white);
      } else if (p.id == "PL" && !p.values.empty() && !rec.first_player) {
        const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(p.values.front()[0])));
        if (c == 'B') rec.first_player = Color::Black;
        if (c == 'W') rec.first_player = Color::White;
      } else {
        auto& slot = rec.metadata[p.id];
        slot.insert(slot.end(), p.values.begin(), p.values.end());
      }
    }
  }
  return rec;
}

/// Writes a record as a single-line FF[4] main line.
inline std::string emit_sgf(const GameRecord& rec) {
  std::string out = "(;SZ[" + std::to_string(rec.board_size) + "]";
  for (const auto& [id, values] : rec.metadata) {
    out += id;
    for (const auto& v : values) out += "[" + detail::escape(v) + "]";
  }
  auto list = [&](const char* id, const std::vector<Coord>& stones) {
    if (stones.empty()) return;
    out += id;
    for (Coord c : stones) out += "[" + encode_point(c) + "]";
  };
  list("AB", rec.setup_black);
  list("AW", rec.setup_white);
  if (rec.first_player) out += rec.first_player == Color::Black ? "PL[B]" : "PL[W]";
  for (const auto& m : rec.moves) {
    out += m.color == Color::Black ? ";B[" : ";W[";
    if (m.coord) out += encode_point(*m.coord);
    out += "]";
  }
  out += ")";
  return out;
}

inline Board setup_board(const GameRecord& rec) {
  return build_position(rec.board_size, rec.setup_black, rec.setup_white);
}

/// Board after the first `upto` recorded moves.
inline Board replay(const GameRecord& rec, std::size_t upto) {
  if (upto > rec.moves.size()) throw std::out_of_range("replay beyond the end of the record");
  Board board = setup_board(rec);
  for (std::size_t i = 0; i < upto; ++i) {
    const Move& m = rec.moves[i];
    if (m.is_pass()) {
      board.pass(m.color);
      continue;
    }
    if (auto why = board.check_move(*m.coord, m.color)) throw IllegalRecordedMove(i, *why);
    board.play(*m.coord, m.color);
  }
  return board;
}

}  // namespace seds::sgf
