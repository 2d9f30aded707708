#pragma once

// Reference positions shared by the unit and acceptance suites.

#include <cctype>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "seds/seds.hpp"

namespace fixtures {

using seds::Board;
using seds::Color;
using seds::Coord;

/// "D12D13C10" -> coords, letters skip I, row 1 at the bottom.
inline std::vector<Coord> labels(std::string_view packed, int size) {
  std::vector<Coord> out;
  std::size_t i = 0;
  while (i < packed.size()) {
    if (std::isspace(static_cast<unsigned char>(packed[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < packed.size() && std::isdigit(static_cast<unsigned char>(packed[j]))) ++j;
    out.push_back(seds::parse_label(packed.substr(i, j - i), size));
    i = j;
  }
  return out;
}

inline Coord at(std::string_view label, int size = 19) { return seds::parse_label(label, size); }
inline int idx(std::string_view label, int size = 19) { return seds::to_index(at(label, size), size); }

inline Board position(int size, std::string_view black, std::string_view white) {
  const auto b = labels(black, size);
  const auto w = labels(white, size);
  return seds::build_position(size, b, w);
}

// Three points between two white walls and two black stones.
inline Board dia3() { return position(9, "E7J7", "F6G6H6F8G8H8"); }

// Five-point version of dia3.
inline Board dia3a() { return position(9, "C7J7", "D6E6F6G6H6D8E8F8G8H8"); }

// Two inner blocks (white C1-C2, black D2-E2-E1) sharing the liberty D1.
inline Board dia3b() { return position(19, "B1B2B3C3D2E2E1", "C1C2D3E3F3F2F1"); }

// Semeai: inner black A2-B1-B2-B3 against inner white C3-D1-D2-D3.
inline Board dia3c() { return position(19, "A2B1B2B3C4D4E1E2E3E4", "A3A4B4B5C5D5D1D2D3C3"); }

// White formation whose life follows only from all blocks together.
inline Board dia1() {
  return position(19,
                  "A13B13B16B17B18C13C15C16C18D13D15D17D18E13E15E16E17F13G13G14G15G16G17G18G19",
                  "A14B14B15C14D14E14F14F15F16F17F18F19E18A16A17A18B19C19D19");
}

inline constexpr std::string_view kFullBoardWhite =
    "D12D13D14C13D15E15F15F14G15G16G17M15M16N15O15O14O13C10C11D10B11"
    "E10F10F11G11H18J18K18K17L18B4B14B15C4D2D3D5D7D17E4E5E7E17E18E19"
    "F18G9H3H5H6J7J13K13L13L14M11M13N6P6P16P17P18Q5Q13Q14R4R5R6R14S7S8";
inline constexpr std::string_view kFullBoardBlack =
    "A15B3B12B13B16B18C2C5C7C12C14C15C16C17C19D1D11D16D18E2E11E12E13"
    "E16F5F7F12F16F17G2G3G5G7G10G12G13G14H8H10H11H12H15J8J14J16J17K3"
    "K12L15L16L17M9M14M17M18N14N17O4P4P13P14Q4Q7Q12Q17R3R7R12R13R15R16S3S14";

inline Board full_board() { return position(19, kFullBoardBlack, kFullBoardWhite); }

/// Clamps every block of the position at s = 1.
inline seds::SedsState all_clamped(const Board& b) {
  auto st = seds::init_state(b);
  for (auto id : b.block_ids()) st.clamp(id);
  return st;
}

/// Clamps every block except those containing the listed stones.
inline seds::SedsState clamp_except(const Board& b, std::initializer_list<std::string_view> free_labels) {
  auto st = all_clamped(b);
  for (auto l : free_labels) st.clamped[b.block_at(at(l, b.size()))] = seds::SedsState::kFree;
  return st;
}

/// Random legal play from an empty board; passes are never generated.
inline Board random_position(std::mt19937_64& rng, int size, int stones) {
  return seds::bench::random_position(rng, size, stones);
}

/// Colour-swapped copy built from the same stones.
inline Board swap_colours(const Board& b) {
  std::vector<Coord> black, white;
  for (int p = 0; p < b.area(); ++p) {
    const auto c = b.color_at(p);
    if (!c) continue;
    (*c == Color::Black ? white : black).push_back(seds::from_index(p, b.size()));
  }
  return seds::build_position(b.size(), black, white);
}

/// Rebuilds from stones only (fresh ids, no ko).
inline Board rebuild(const Board& b) {
  std::vector<Coord> black, white;
  for (int p = 0; p < b.area(); ++p) {
    const auto c = b.color_at(p);
    if (!c) continue;
    (*c == Color::Black ? black : white).push_back(seds::from_index(p, b.size()));
  }
  return seds::build_position(b.size(), black, white);
}

}  // namespace fixtures
