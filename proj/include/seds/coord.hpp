#pragma once

#include <cctype>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace seds {

constexpr int kMinBoardSize = 2;
constexpr int kMaxBoardSize = 25;

enum class Color : std::uint8_t { Black, White };

constexpr Color opposite(Color c) noexcept {
  return c == Color::Black ? Color::White : Color::Black;
}

inline const char* to_string(Color c) noexcept {
  return c == Color::Black ? "black" : "white";
}

/// Intersection on the board. Row 0 is the top edge (SGF "aa" is col 0, row 0).
struct Coord {
  int col = 0;
  int row = 0;

  friend constexpr auto operator<=>(const Coord&, const Coord&) = default;
};

class CoordError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

constexpr bool on_board(Coord c, int size) noexcept {
  return c.col >= 0 && c.row >= 0 && c.col < size && c.row < size;
}

constexpr int to_index(Coord c, int size) noexcept { return c.row * size + c.col; }

constexpr Coord from_index(int index, int size) noexcept {
  return Coord{index % size, index / size};
}

// Column letters as used on printed diagrams: A..Z without I.
inline char column_letter(int col) {
  char c = static_cast<char>('A' + col);
  if (c >= 'I') ++c;
  return c;
}

/// Parses a diagram label such as "D1" or "r8" (letters skip I, row 1 at the
/// bottom edge).
inline Coord parse_label(std::string_view label, int size) {
  if (label.size() < 2) throw CoordError("bad label: " + std::string(label));
  const char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(label[0])));
  if (letter < 'A' || letter > 'Z' || letter == 'I')
    throw CoordError("bad label column: " + std::string(label));
  int col = letter - 'A';
  if (letter > 'I') --col;
  int number = 0;
  for (char ch : label.substr(1)) {
    if (!std::isdigit(static_cast<unsigned char>(ch)))
      throw CoordError("bad label row: " + std::string(label));
    number = number * 10 + (ch - '0');
  }
  Coord c{col, size - number};
  if (number < 1 || !on_board(c, size)) throw CoordError("label off board: " + std::string(label));
  return c;
}

inline std::string to_label(Coord c, int size) {
  return std::string(1, column_letter(c.col)) + std::to_string(size - c.row);
}

}  // namespace seds
