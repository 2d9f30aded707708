#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <map>
#include <memory>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "fixtures.hpp"

using namespace seds;
using namespace seds::bench;
namespace fs = std::filesystem;

namespace {

const fs::path kData = SEDS_TEST_DATA;

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("seds_" + tag + "_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

// Random legal game without passes.
sgf::GameRecord random_game(std::mt19937_64& rng, int size, int length) {
  sgf::GameRecord rec;
  rec.board_size = size;
  Board b(size);
  Color c = Color::Black;
  for (int k = 0; k < length; ++k) {
    const auto moves = b.legal_moves(c);
    if (moves.empty()) break;
    const Coord m = moves[std::uniform_int_distribution<std::size_t>(0, moves.size() - 1)(rng)];
    b.play(m, c);
    rec.moves.push_back({c, m});
    c = opposite(c);
  }
  return rec;
}

// Ranks the legal moves in a seeded random order instead of by score.
Ranker shuffle_ranker(std::uint64_t seed) {
  auto rng = std::make_shared<std::mt19937_64>(seed);
  return [rng](const Board& b, Color mover) {
    MoveRanking r;
    r.mover = mover;
    r.size = b.size();
    for (Coord c : b.legal_moves(mover)) r.entries.push_back({c, 0.0, 0});
    std::shuffle(r.entries.begin(), r.entries.end(), *rng);
    return r;
  };
}

std::string csv(const CorpusStats& s, void (*writer)(std::ostream&, const CorpusStats&)) {
  std::ostringstream out;
  writer(out, s);
  return out.str();
}

}  // namespace

TEST(Histogram, AddAndDensity) {
  PredictionHistogram h;
  h.add(99);
  h.add(99);
  h.add(0);
  h.add(50);
  EXPECT_EQ(h.positions_counted, 4);
  EXPECT_EQ(std::accumulate(h.buckets.begin(), h.buckets.end(), 0L), h.positions_counted);
  const auto p = h.density();
  EXPECT_DOUBLE_EQ(p[99], 50.0);
  EXPECT_DOUBLE_EQ(p[0], 25.0);
}

TEST(Survival, SelfConsistentAndMonotone) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    PredictionHistogram h;
    const int n = std::uniform_int_distribution<int>(1, 5000)(rng);
    for (int i = 0; i < n; ++i) h.add(std::uniform_int_distribution<int>(0, 99)(rng) % (1 + t % 100));
    const SurvivalCurve r = survival(h);
    EXPECT_DOUBLE_EQ(r.values[0], 100.0);
    for (int x = 1; x < kBuckets; ++x) EXPECT_LE(r.values[x], r.values[x - 1]);
    // Tail sums of the counts reproduce R exactly.
    long tail = 0;
    for (int x = kBuckets - 1; x >= 0; --x) {
      tail += h.buckets[x];
      EXPECT_EQ(r.values[x], 100.0 * static_cast<double>(tail) / static_cast<double>(h.positions_counted));
    }
    // Summing the emitted density gives the same curve up to rounding.
    const SurvivalCurve again = survival_from_density(h.move_number, h.density());
    for (int x = 0; x < kBuckets; ++x) EXPECT_NEAR(again.values[x], r.values[x], 1e-9);
  }
}

TEST(Corpus, EmptyDirectoryIsAnError) {
  TempDir dir("empty");
  EXPECT_THROW(run_corpus(dir.path, {}), EmptyCorpus);
  std::ofstream(dir.path / "broken.sgf") << "(;SZ[9];B[";
  EXPECT_THROW(run_corpus(dir.path, {}), EmptyCorpus);
  EXPECT_THROW(timing_profile(dir.path, {}, {10}), EmptyCorpus);
}

TEST(Corpus, OneGameTwoHundredMoves) {
  TempDir dir("one");
  std::mt19937_64 rng(2);
  const sgf::GameRecord rec = random_game(rng, 19, 200);
  ASSERT_EQ(rec.moves.size(), 200u);
  std::ofstream(dir.path / "game.sgf") << sgf::emit_sgf(rec);
  std::ofstream(dir.path / "notes.txt") << "ignored";
  const CorpusStats s = run_corpus(dir.path, {});
  EXPECT_EQ(s.files_parsed, 1);
  ASSERT_EQ(s.histograms.size(), 200u);
  for (const auto& [n, h] : s.histograms) {
    EXPECT_EQ(h.positions_counted, 1);
    EXPECT_EQ(h.move_number, n);
  }
  EXPECT_EQ(s.histograms.begin()->first, 1);
  EXPECT_EQ(s.histograms.rbegin()->first, 200);
}

TEST(Corpus, BrokenFilesLoggedAndSkipped) {
  TempDir dir("mixed");
  std::ofstream(dir.path / "a.sgf") << "(;SZ[9];B[ee];W[cc];B[gg])";
  std::ofstream(dir.path / "b.sgf") << "(;SZ[30];B[ee])";
  const CorpusStats s = run_corpus(dir.path, {});
  EXPECT_EQ(s.files_parsed, 1);
  EXPECT_EQ(s.files_failed, 1);
  ASSERT_FALSE(s.errors.empty());
  EXPECT_NE(s.errors.front().find("b.sgf"), std::string::npos);
  EXPECT_EQ(s.histograms.size(), 3u);
}

TEST(Corpus, PassesAndIllegalMovesSkippedAndCounted) {
  TempDir dir("skips");
  std::ofstream(dir.path / "g.sgf") << "(;SZ[9];B[ee];W[];B[cc];W[cc];B[gg])";
  const CorpusStats s = run_corpus(dir.path, {});
  EXPECT_EQ(s.passes_skipped, 1);
  EXPECT_EQ(s.illegal_skipped, 1);
  EXPECT_EQ(s.histograms.size(), 2u);  // moves 1 and 3
}

TEST(Corpus, CsvDeterministicAcrossRunsAndJobs) {
  const MoveFilter filter{1, 25, {}};
  const CorpusStats a = run_corpus(kData, {}, filter, 1);
  const CorpusStats b = run_corpus(kData, {}, filter, 1);
  const CorpusStats c = run_corpus(kData, {}, filter, 4);
  for (auto writer : {&write_histogram_csv, &write_survival_csv}) {
    EXPECT_EQ(csv(a, writer), csv(b, writer));
    EXPECT_EQ(csv(a, writer), csv(c, writer));
  }
  const std::string h = csv(a, &write_histogram_csv);
  EXPECT_EQ(h.rfind("move_number,bucket,count\n", 0), 0u);
  EXPECT_EQ(csv(a, &write_survival_csv).rfind("move_number,x,R\n", 0), 0u);
  for (const auto& [n, r] : a.survival_curves()) {
    EXPECT_DOUBLE_EQ(r.values[0], 100.0);
    for (int x = 1; x < kBuckets; ++x) EXPECT_LE(r.values[x], r.values[x - 1]);
  }
}

TEST(Corpus, EmittedSurvivalMatchesResummedHistogram) {
  const CorpusStats s = run_corpus(kData, {}, MoveFilter{1, 15, {}});
  std::istringstream hist(csv(s, &write_histogram_csv));
  std::istringstream surv(csv(s, &write_survival_csv));
  std::map<int, std::array<long, kBuckets>> counts;
  std::string line;
  std::getline(hist, line);
  while (std::getline(hist, line)) {
    int n, x;
    long k;
    ASSERT_EQ(std::sscanf(line.c_str(), "%d,%d,%ld", &n, &x, &k), 3);
    counts[n][x] = k;
  }
  std::getline(surv, line);
  while (std::getline(surv, line)) {
    int n, x;
    double r;
    ASSERT_EQ(std::sscanf(line.c_str(), "%d,%d,%lf", &n, &x, &r), 3);
    long tail = 0, total = 0;
    for (int u = 0; u < kBuckets; ++u) {
      total += counts[n][u];
      if (u >= x) tail += counts[n][u];
    }
    EXPECT_NEAR(r, 100.0 * tail / total, 5e-7) << n << ',' << x;
  }
}

TEST(Predict, UniqueCaptureRanksHigh) {
  // Settled walls on D and F; a white stone at B5 in atari inside Black's area.
  const sgf::GameRecord rec = sgf::parse_sgf(
      "(;SZ[9]AB[da][db][dc][dd][de][df][dg][dh][di][ad][bc][be]"
      "AW[fa][fb][fc][fd][fe][ff][fg][fh][fi][bd];B[cd])");
  const Board before = sgf::replay(rec, 0);
  ASSERT_EQ(before.block(before.block_at(Coord{1, 3})).liberties.size(), 1u);
  const auto bucket = predict_rank(rec, 0);
  ASSERT_TRUE(bucket.has_value());
  EXPECT_GE(*bucket, 90);
  // The capture also wins under from-scratch evaluation of every legal move.
  double best = -1e9;
  Coord best_move{};
  for (Coord m : before.legal_moves(Color::Black)) {
    const auto [after, d] = apply_move(before, m, Color::Black);
    const double s = mover_score(score(after, solve(after, init_state(after)).state), Color::Black);
    if (s > best) best = s, best_move = m;
  }
  EXPECT_EQ(best_move, (Coord{2, 3}));
}

TEST(Predict, FirstMoveAndPassAndIllegal) {
  const sgf::GameRecord rec = sgf::parse_sgf("(;SZ[9];B[cc];W[];B[cc])");
  const auto first = predict_rank(rec, 0);
  ASSERT_TRUE(first.has_value());
  EXPECT_GE(*first, 0);
  EXPECT_LE(*first, 99);
  EXPECT_FALSE(predict_rank(rec, 1).has_value());
  EXPECT_THROW(predict_rank(rec, 2), ProMoveIllegal);
  EXPECT_THROW(predict_rank(rec, 3), std::out_of_range);
}

TEST(Predict, RandomRankerBaseline) {
  std::mt19937_64 rng(7);
  std::vector<sgf::GameRecord> games;
  for (int g = 0; g < 24; ++g) games.push_back(random_game(rng, 19, 100));
  const CorpusStats s = run_games(games, {}, MoveFilter{}, 1, shuffle_ranker(99));
  const PredictionHistogram all = s.pooled();
  ASSERT_GE(all.positions_counted, 2000);
  EXPECT_NEAR(survival(all).values[80], 20.0, 3.0);
}

TEST(Timing, EmptyMoveListGivesEmptyProfile) {
  EXPECT_TRUE(timing_profile(kData, {}, {}).rows.empty());
}

TEST(Timing, RowsForRequestedMoveNumbers) {
  const TimingProfile p = timing_profile(kData, {}, {1, 5, 10000}, 3);
  ASSERT_EQ(p.rows.size(), 3u);
  EXPECT_GT(p.rows[0].samples, 0);
  EXPECT_LE(p.rows[0].samples, 3);
  EXPECT_GT(p.rows[0].eval_us, 0.0);
  EXPECT_GT(p.rows[0].rank_ms, 0.0);
  EXPECT_EQ(p.rows[2].samples, 0);
  std::ostringstream out;
  write_timing_csv(out, p);
  EXPECT_EQ(out.str().rfind("move_number,eval_us,rank_ms\n", 0), 0u);
}
