#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "seds/analysis.hpp"
#include "seds/board.hpp"
#include "seds/sgf.hpp"
#include "seds/solver.hpp"

namespace seds::bench {

constexpr int kBuckets = 100;

/// Produces the ranking of every legal move for the mover. Empty means the
/// dynamical-system ranker.
using Ranker = std::function<MoveRanking(const Board&, Color)>;

struct PredictionHistogram {
  int move_number = 0;
  std::array<long, kBuckets> buckets{};
  long positions_counted = 0;

  void add(int bucket) {
    ++buckets.at(bucket);
    ++positions_counted;
  }
  void merge(const PredictionHistogram& other) {
    for (int x = 0; x < kBuckets; ++x) buckets[x] += other.buckets[x];
    positions_counted += other.positions_counted;
  }

  /// P(x) in percent.
  std::array<double, kBuckets> density() const {
    std::array<double, kBuckets> p{};
    if (positions_counted == 0) return p;
    for (int x = 0; x < kBuckets; ++x)
      p[x] = 100.0 * static_cast<double>(buckets[x]) / static_cast<double>(positions_counted);
    return p;
  }
};

/// R(x) = sum over u >= x of P(u), in percent.
struct SurvivalCurve {
  int move_number = 0;
  std::array<double, kBuckets> values{};
};

/// Sums P from the top bucket down.
inline SurvivalCurve survival_from_density(int move_number, const std::array<double, kBuckets>& p) {
  SurvivalCurve r;
  r.move_number = move_number;
  double acc = 0.0;
  for (int x = kBuckets - 1; x >= 0; --x) {
    acc += p[x];
    r.values[x] = acc;
  }
  return r;
}

/// Exact form from integer tail counts; R(0) is exactly 100 when anything
/// was counted.
inline SurvivalCurve survival(const PredictionHistogram& h) {
  SurvivalCurve r;
  r.move_number = h.move_number;
  if (h.positions_counted == 0) return r;
  long tail = 0;
  for (int x = kBuckets - 1; x >= 0; --x) {
    tail += h.buckets[x];
    r.values[x] = 100.0 * static_cast<double>(tail) / static_cast<double>(h.positions_counted);
  }
  return r;
}

class ProMoveIllegal : public std::runtime_error {
 public:
  explicit ProMoveIllegal(std::size_t index)
      : std::runtime_error("recorded move " + std::to_string(index) + " is not legal here"),
        index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class EmptyCorpus : public std::runtime_error {
 public:
  explicit EmptyCorpus(const std::string& dir)
      : std::runtime_error("no parseable SGF files in " + dir) {}
};

/// Bucket of the recorded move when every legal move of the position before
/// it is ranked. nullopt for passes.
inline std::optional<int> predict_rank_at(const Board& before, const sgf::Move& pro, std::size_t index,
                                          const SolverConfig& config, const Ranker& ranker = {}) {
  if (pro.is_pass()) return std::nullopt;
  if (!before.is_legal(*pro.coord, pro.color)) throw ProMoveIllegal(index);
  const MoveRanking ranking = ranker ? ranker(before, pro.color) : rank_moves(before, pro.color, config);
  return percentile_of(ranking, *pro.coord);
}

inline std::optional<int> predict_rank(const sgf::GameRecord& rec, std::size_t move_index,
                                       const SolverConfig& config = {}) {
  if (move_index >= rec.moves.size()) throw std::out_of_range("move index beyond record");
  const Board before = sgf::replay(rec, move_index);
  return predict_rank_at(before, rec.moves[move_index], move_index, config);
}

/// Move numbers are 1-based: move number k predicts rec.moves[k - 1].
struct MoveFilter {
  int first = 1;
  int last = 1 << 30;
  std::set<int> only;  // when non-empty, overrides the range

  bool accepts(int move_number) const {
    if (!only.empty()) return only.count(move_number) != 0;
    return move_number >= first && move_number <= last;
  }
  int max_number() const { return only.empty() ? last : *only.rbegin(); }
};

struct CorpusStats {
  std::map<int, PredictionHistogram> histograms;  // keyed by move number
  long files_parsed = 0;
  long files_failed = 0;
  long passes_skipped = 0;
  long illegal_skipped = 0;
  std::vector<std::string> errors;

  std::map<int, SurvivalCurve> survival_curves() const {
    std::map<int, SurvivalCurve> out;
    for (const auto& [n, h] : histograms) out[n] = survival(h);
    return out;
  }

  PredictionHistogram pooled() const {
    PredictionHistogram all;
    for (const auto& [n, h] : histograms) all.merge(h);
    return all;
  }

  void merge(const CorpusStats& other) {
    for (const auto& [n, h] : other.histograms) {
      auto& mine = histograms[n];
      mine.move_number = n;
      mine.merge(h);
    }
    files_parsed += other.files_parsed;
    files_failed += other.files_failed;
    passes_skipped += other.passes_skipped;
    illegal_skipped += other.illegal_skipped;
    errors.insert(errors.end(), other.errors.begin(), other.errors.end());
  }
};

/// Walks one game and records the bucket of every accepted move.
inline CorpusStats run_game(const sgf::GameRecord& rec, const SolverConfig& config,
                            const MoveFilter& filter, const Ranker& ranker = {}) {
  CorpusStats stats;
  Board board = sgf::setup_board(rec);
  for (std::size_t i = 0; i < rec.moves.size(); ++i) {
    const int number = static_cast<int>(i) + 1;
    if (number > filter.max_number()) break;
    const sgf::Move& m = rec.moves[i];
    if (filter.accepts(number)) {
      if (m.is_pass()) {
        ++stats.passes_skipped;
      } else if (!board.is_legal(*m.coord, m.color)) {
        ++stats.illegal_skipped;
      } else {
        auto& h = stats.histograms[number];
        h.move_number = number;
        h.add(*predict_rank_at(board, m, i, config, ranker));
      }
    }
    if (m.is_pass()) {
      board.pass(m.color);
    } else if (board.is_legal(*m.coord, m.color)) {
      board.play(*m.coord, m.color);
    } else {
      stats.errors.push_back("illegal recorded move " + std::to_string(i) + "; rest of game skipped");
      break;
    }
  }
  return stats;
}

inline std::vector<std::filesystem::path> sgf_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  if (!std::filesystem::is_directory(dir)) return files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::string ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".sgf") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Parses every *.sgf in dir (sorted by name); unparseable files are logged in
/// errors and skipped.
inline std::vector<sgf::GameRecord> load_corpus(const std::filesystem::path& dir, CorpusStats* log = nullptr) {
  std::vector<sgf::GameRecord> games;
  for (const auto& f : sgf_files(dir)) {
    try {
      games.push_back(sgf::parse_sgf(read_file(f)));
      if (log) ++log->files_parsed;
    } catch (const std::exception& e) {
      if (log) {
        ++log->files_failed;
        log->errors.push_back(f.filename().string() + ": " + e.what());
      }
    }
  }
  if (games.empty()) throw EmptyCorpus(dir.string());
  return games;
}

/// Ranks every game of an already loaded corpus. The ranker must be safe to
/// call from several threads when jobs > 1.
inline CorpusStats run_games(const std::vector<sgf::GameRecord>& games, const SolverConfig& config,
                             const MoveFilter& filter = {}, unsigned jobs = 1, const Ranker& ranker = {}) {
  CorpusStats total;

  std::vector<CorpusStats> per_game(games.size());
  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t g = begin; g < games.size(); g += step)
      per_game[g] = run_game(games[g], config, filter, ranker);
  };
  const std::size_t n = std::max<std::size_t>(1, std::min<std::size_t>(jobs, games.size()));
  if (n == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(work, t, n);
    for (auto& th : pool) th.join();
  }
  for (const auto& s : per_game) total.merge(s);
  return total;
}

inline CorpusStats run_corpus(const std::filesystem::path& dir, const SolverConfig& config,
                              const MoveFilter& filter = {}, unsigned jobs = 1, const Ranker& ranker = {}) {
  CorpusStats log;
  const std::vector<sgf::GameRecord> games = load_corpus(dir, &log);
  CorpusStats total = run_games(games, config, filter, jobs, ranker);
  total.files_parsed = log.files_parsed;
  total.files_failed = log.files_failed;
  total.errors.insert(total.errors.begin(), log.errors.begin(), log.errors.end());
  return total;
}

inline void write_histogram_csv(std::ostream& out, const CorpusStats& stats) {
  out << "move_number,bucket,count\n";
  for (const auto& [n, h] : stats.histograms)
    for (int x = 0; x < kBuckets; ++x) out << n << ',' << x << ',' << h.buckets[x] << '\n';
}

inline std::string format_decimal(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline void write_survival_csv(std::ostream& out, const CorpusStats& stats) {
  out << "move_number,x,R\n";
  for (const auto& [n, r] : stats.survival_curves())
    for (int x = 0; x < kBuckets; ++x) out << n << ',' << x << ',' << format_decimal(r.values[x], 6) << '\n';
}

/// Position reached by random legal play from an empty board (no passes).
inline Board random_position(std::mt19937_64& rng, int size, int stones) {
  Board b(size);
  Color c = Color::Black;
  for (int placed = 0, tries = 0; placed < stones && tries < stones * 20; ++tries) {
    const auto moves = b.legal_moves(c);
    if (moves.empty()) break;
    std::uniform_int_distribution<std::size_t> pick(0, moves.size() - 1);
    b.play(moves[pick(rng)], c);
    c = opposite(c);
    placed = b.num_stones();
  }
  return b;
}

struct OracleReport {
  int positions = 0;
  double max_deviation = 0.0;  // worst |worklist - dense| over all units
  long worklist_sweeps = 0;
  int dense_nonconverged = 0;   // positions where the dense sweeps hit their cap
};

/// Worklist solver against the dense Jacobi reference on random positions
/// with 10%..60% of the board occupied.
inline OracleReport oracle_check(int positions, int size, std::uint64_t seed, const SolverConfig& config) {
  std::mt19937_64 rng(seed);
  OracleReport rep;
  const int area = size * size;
  std::uniform_int_distribution<int> fill(area / 10, area * 6 / 10);
  for (int i = 0; i < positions; ++i) {
    const Board b = random_position(rng, size, fill(rng));
    const SolveResult w = solve(b, init_state(b), config);
    rep.worklist_sweeps += w.stats.sweeps;
    ++rep.positions;
    try {
      const SedsState d = solve_dense_oracle(b, init_state(b), config);
      rep.max_deviation = std::max(rep.max_deviation, max_unit_deviation(b, w.state, d));
    } catch (const NoConvergence&) {
      ++rep.dense_nonconverged;
    }
  }
  return rep;
}

struct TimingRow {
  int move_number = 0;
  double eval_us = 0.0;  // mean: play one move + incremental re-solve
  double rank_ms = 0.0;  // mean: rank every legal move of the position
  long samples = 0;
};

struct TimingProfile {
  std::vector<TimingRow> rows;
};

/// Wall-clock profile at the given move numbers, at most `max_samples`
/// positions (one per game) per move number.
inline TimingProfile timing_profile(const std::vector<sgf::GameRecord>& games, const SolverConfig& config,
                                    const std::vector<int>& move_numbers, long max_samples = 400) {
  using clock = std::chrono::steady_clock;
  TimingProfile prof;
  for (int number : move_numbers) {
    TimingRow row;
    row.move_number = number;
    double eval_total = 0.0, rank_total = 0.0;
    for (const auto& rec : games) {
      if (row.samples >= max_samples) break;
      if (number < 1 || static_cast<std::size_t>(number) > rec.moves.size()) continue;
      const sgf::Move& m = rec.moves[number - 1];
      if (m.is_pass()) continue;
      Board before(rec.board_size);
      try {
        before = sgf::replay(rec, number - 1);
      } catch (const std::exception&) {
        continue;
      }
      if (!before.is_legal(*m.coord, m.color)) continue;

      const SolveResult parent = solve(before, init_state(before), config);
      const auto t0 = clock::now();
      Board after = before;
      const MoveDelta delta = after.play(*m.coord, m.color);
      const SolveResult child = resolve_incremental(after, parent.state, delta, config);
      const auto t1 = clock::now();
      const MoveRanking ranking = rank_moves(before, m.color, config);
      const auto t2 = clock::now();
      // keep the results observable so the work cannot be elided
      if (child.stats.sweeps < 0 || ranking.entries.empty()) continue;

      eval_total += std::chrono::duration<double, std::micro>(t1 - t0).count();
      rank_total += std::chrono::duration<double, std::milli>(t2 - t1).count();
      ++row.samples;
    }
    if (row.samples > 0) {
      row.eval_us = eval_total / static_cast<double>(row.samples);
      row.rank_ms = rank_total / static_cast<double>(row.samples);
    }
    prof.rows.push_back(row);
  }
  return prof;
}

inline TimingProfile timing_profile(const std::filesystem::path& dir, const SolverConfig& config,
                                    const std::vector<int>& move_numbers, long max_samples = 400) {
  if (move_numbers.empty()) return {};
  return timing_profile(load_corpus(dir), config, move_numbers, max_samples);
}

inline void write_timing_csv(std::ostream& out, const TimingProfile& prof) {
  out << "move_number,eval_us,rank_ms\n";
  for (const auto& r : prof.rows)
    out << r.move_number << ',' << format_decimal(r.eval_us, 3) << ',' << format_decimal(r.rank_ms, 3) << '\n';
}

}  // namespace seds::bench
