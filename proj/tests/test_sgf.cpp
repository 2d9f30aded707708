#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fixtures.hpp"

using namespace seds;
using namespace seds::sgf;
namespace fs = std::filesystem;

namespace {

const fs::path kData = SEDS_TEST_DATA;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<int>> sorted_pairs(const std::vector<Coord>& cs) {
  std::vector<std::vector<int>> out;
  for (Coord c : cs) out.push_back({c.col, c.row});
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<int>> stones_of(const Board& b, Color colour) {
  std::vector<std::vector<int>> out;
  for (int p = 0; p < b.area(); ++p)
    if (b.color_at(p) == colour) {
      const Coord c = from_index(p, b.size());
      out.push_back({c.col, c.row});
    }
  std::sort(out.begin(), out.end());
  return out;
}

SgfError::Kind error_kind(std::string_view text) {
  try {
    parse_sgf(text);
  } catch (const SgfError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "parsed: " << text;
  return SgfError::Kind::SyntaxError;
}

}  // namespace

TEST(Sgf, SingleMove) {
  const GameRecord r = parse_sgf("(;FF[4]SZ[9];B[ee])");
  EXPECT_EQ(r.board_size, 9);
  ASSERT_EQ(r.moves.size(), 1u);
  EXPECT_EQ(r.moves[0].color, Color::Black);
  EXPECT_EQ(r.moves[0].coord, (Coord{4, 4}));
}

TEST(Sgf, SetupStones) {
  const GameRecord r = parse_sgf("(;SZ[19]AB[dd][pd];W[qq])");
  EXPECT_EQ(r.setup_black, (std::vector<Coord>{{3, 3}, {15, 3}}));
  ASSERT_EQ(r.moves.size(), 1u);
  EXPECT_EQ(r.moves[0].color, Color::White);
  EXPECT_EQ(r.moves[0].coord, (Coord{16, 16}));
}

TEST(Sgf, PassConventions) {
  EXPECT_TRUE(parse_sgf("(;SZ[19];B[tt])").moves.at(0).is_pass());
  EXPECT_TRUE(parse_sgf("(;SZ[19];W[])").moves.at(0).is_pass());
  // On boards above 19 "tt" is an ordinary point.
  const GameRecord big = parse_sgf("(;SZ[21];B[tt])");
  EXPECT_EQ(big.moves.at(0).coord, (Coord{19, 19}));
}

TEST(Sgf, DefaultSizeAndTopLeftOrigin) {
  const GameRecord r = parse_sgf("(;B[aa];W[sa])");
  EXPECT_EQ(r.board_size, 19);
  EXPECT_EQ(r.moves[0].coord, (Coord{0, 0}));
  EXPECT_EQ(r.moves[1].coord, (Coord{18, 0}));
  EXPECT_EQ(to_label(*r.moves[0].coord, 19), "A19");
}

TEST(Sgf, Errors) {
  EXPECT_EQ(error_kind("(;SZ[26])"), SgfError::Kind::UnsupportedSize);
  EXPECT_EQ(error_kind("(;SZ[19:13])"), SgfError::Kind::UnsupportedSize);
  EXPECT_EQ(error_kind("(;SZ[x])"), SgfError::Kind::SyntaxError);
  EXPECT_EQ(error_kind("(;B[ee]"), SgfError::Kind::SyntaxError);
  EXPECT_EQ(error_kind(";B[ee])"), SgfError::Kind::SyntaxError);
  EXPECT_EQ(error_kind("(;SZ[9];B[zz])"), SgfError::Kind::SyntaxError);
  try {
    parse_sgf("(;SZ[9];B[e");
    FAIL();
  } catch (const SgfError& e) {
    EXPECT_GT(e.offset(), 0u);
  }
}

TEST(Sgf, MainLineOnlyAndMetadataKept) {
  const GameRecord r = parse_sgf(slurp(kData / "handicap_variations.sgf"));
  EXPECT_EQ(r.board_size, 13);
  EXPECT_EQ(r.setup_black.size(), 2u);
  ASSERT_EQ(r.first_player, Color::White);
  ASSERT_EQ(r.moves.size(), 5u);  // jd dj gg pass ge
  EXPECT_EQ(r.moves[1].color, Color::White);  // colours need not alternate
  EXPECT_TRUE(r.moves[3].is_pass());
  EXPECT_EQ(r.metadata.at("HA"), std::vector<std::string>{"2"});
  EXPECT_NE(r.metadata.at("C").front().find("] with"), std::string::npos);
  EXPECT_TRUE(r.metadata.count("TR"));
}

TEST(Sgf, CompressedPointLists) {
  const GameRecord r = parse_sgf(slurp(kData / "compressed_setup.sgf"));
  EXPECT_EQ(r.setup_black.size(), 9u);
  EXPECT_EQ(r.setup_white.size(), 3u);
  EXPECT_EQ(r.metadata.at("GN").front(), "setup\\test");
}

TEST(Sgf, LongPropertyNamesKeepCapitals) {
  const GameRecord r = parse_sgf(slurp(kData / "long_names.sgf"));
  EXPECT_EQ(r.moves.size(), 8u);
  EXPECT_EQ(r.metadata.at("PB").front(), "x");
}

TEST(Sgf, RoundTripOnFixtures) {
  for (const auto& f : bench::sgf_files(kData)) {
    const GameRecord r = parse_sgf(slurp(f));
    const GameRecord again = parse_sgf(emit_sgf(r));
    EXPECT_EQ(again, r) << f;
  }
}

TEST(Replay, EmptyAtStart) {
  const GameRecord r = parse_sgf("(;SZ[9];B[ee];W[cc])");
  EXPECT_EQ(replay(r, 0).num_stones(), 0);
  EXPECT_THROW(replay(r, 3), std::out_of_range);
}

TEST(Replay, CornerCapture) {
  const GameRecord r = parse_sgf(slurp(kData / "corner_capture.sgf"));
  const Board b = replay(r, r.moves.size());
  EXPECT_TRUE(b.is_empty(0));  // aa captured
  EXPECT_EQ(b.num_stones(), 3);
  EXPECT_EQ(b.color_at(1), Color::White);
}

TEST(Replay, IllegalRecordedMoveReportsIndex) {
  const GameRecord r = parse_sgf("(;SZ[9];B[ee];W[ee])");
  try {
    replay(r, 2);
    FAIL();
  } catch (const IllegalRecordedMove& e) {
    EXPECT_EQ(e.index(), 1u);
    EXPECT_EQ(e.reason(), IllegalReason::Occupied);
  }
}

void check_against_replayer(const fs::path& dir, const fs::path& expected_file, int min_games) {
  const auto expected = nlohmann::json::parse(slurp(expected_file));
  int checked = 0;
  for (const auto& [name, e] : expected.items()) {
    const GameRecord r = parse_sgf(slurp(dir / name));
    EXPECT_EQ(r.board_size, e["size"].get<int>()) << name;
    EXPECT_EQ(sorted_pairs(r.setup_black), e["setup_black"].get<std::vector<std::vector<int>>>()) << name;
    EXPECT_EQ(sorted_pairs(r.setup_white), e["setup_white"].get<std::vector<std::vector<int>>>()) << name;
    ASSERT_EQ(r.moves.size(), e["moves"].get<std::size_t>()) << name;
    const auto passes = std::count_if(r.moves.begin(), r.moves.end(), [](const Move& m) { return m.is_pass(); });
    EXPECT_EQ(passes, e["passes"].get<long>()) << name;

    const Board b = replay(r, r.moves.size());
    const long placed = static_cast<long>(r.setup_black.size() + r.setup_white.size() + r.moves.size()) - passes;
    EXPECT_EQ(b.num_stones(), placed - e["captured"].get<long>()) << name;
    EXPECT_EQ(stones_of(b, Color::Black), e["final_black"].get<std::vector<std::vector<int>>>()) << name;
    EXPECT_EQ(stones_of(b, Color::White), e["final_white"].get<std::vector<std::vector<int>>>()) << name;
    ++checked;
  }
  EXPECT_GE(checked, min_games);
}

TEST(Replay, AgreesWithIndependentReplayer) {
  check_against_replayer(kData, kData / "replay_expected.json", 10);
}

TEST(Replay, CorpusAgreesWithIndependentReplayer) {
  check_against_replayer(SEDS_CORPUS_DIR, kData / "corpus_expected.json", 20);
}

TEST(Replay, EachStepIsOnePlacementPlusCaptures) {
  for (const auto& f : bench::sgf_files(kData)) {
    const GameRecord r = parse_sgf(slurp(f));
    Board prev = replay(r, 0);
    for (std::size_t k = 0; k < r.moves.size(); ++k) {
      const Board next = replay(r, k + 1);
      const Move& m = r.moves[k];
      int added = 0, removed = 0;
      for (int p = 0; p < next.area(); ++p) {
        const auto a = prev.color_at(p), b = next.color_at(p);
        if (a == b) continue;
        if (!a && b) {
          ++added;
          EXPECT_EQ(from_index(p, next.size()), *m.coord);
          EXPECT_EQ(*b, m.color);
        } else {
          ASSERT_TRUE(a && !b) << "stone changed colour";
          EXPECT_EQ(*a, opposite(m.color));
          ++removed;
        }
      }
      EXPECT_EQ(added, m.is_pass() ? 0 : 1) << f << " move " << k;
      prev = next;
    }
  }
}
