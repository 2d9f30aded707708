// Command-line front end: evaluation, ranking, corpus statistics, timing,
// solver cross-checks and the HTTP service.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seds/seds.hpp"
#include "seds/server.hpp"

namespace fs = std::filesystem;
using namespace seds;

namespace {

constexpr int kExitInput = 1;
constexpr int kExitInternal = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void add_config_flags(CLI::App* cmd, SolverConfig& cfg) {
  cmd->add_option("--stop-value", cfg.stop_value, "smallest change that requeues neighbours")
      ->envname("SEDS_STOP_VALUE")
      ->capture_default_str();
  cmd->add_option("--max-iter", cfg.max_iter, "update cap per unit")
      ->envname("SEDS_MAX_ITER")
      ->capture_default_str();
  cmd->add_option_function<std::string>(
         "--atari-adjustment",
         [&cfg](const std::string& v) {
           auto a = parse_atari_adjustment(v);
           if (!a) throw CLI::ValidationError("--atari-adjustment", "multi_liberty_only, always or off");
           cfg.atari_adjustment = *a;
         },
         "multi_liberty_only | always | off")
      ->default_str(to_string(cfg.atari_adjustment));
}

void check_config(const SolverConfig& cfg) {
  if (!cfg.valid()) throw InputError("stop-value must be > 0 and max-iter >= 1");
}

sgf::GameRecord load_record(const fs::path& path) { return sgf::parse_sgf(bench::read_file(path)); }

/// Position after the first `move` recorded moves and the colour to play next.
std::pair<Board, Color> position_at(const sgf::GameRecord& rec, std::size_t move) {
  if (move > rec.moves.size())
    throw InputError("--move " + std::to_string(move) + " beyond the " + std::to_string(rec.moves.size()) +
                     " recorded moves");
  Board b = sgf::replay(rec, move);
  Color next = rec.first_player.value_or(Color::Black);
  if (move < rec.moves.size())
    next = rec.moves[move].color;
  else if (move > 0)
    next = opposite(rec.moves[move - 1].color);
  return {std::move(b), next};
}

std::vector<int> parse_moves(const std::string& list) {
  std::vector<int> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || v < 1) throw InputError("bad move number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

void print_fields(const Board& b, const SolveResult& r) {
  const int n = b.size();
  std::cout << "     ";
  for (int c = 0; c < n; ++c) std::cout << "   " << column_letter(c) << "  ";
  std::cout << '\n';
  for (int row = 0; row < n; ++row) {
    std::cout << std::setw(3) << n - row << "  ";
    for (int c = 0; c < n; ++c) {
      const int p = to_index(Coord{c, row}, n);
      if (b.is_empty(p)) {
        std::cout << ' ' << std::fixed << std::setprecision(2) << r.state.w[p] << ' ';
      } else {
        const BlockId id = b.block_at(p);
        std::cout << (b.block(id).color == Color::Black ? 'X' : 'O') << std::fixed << std::setprecision(2)
                  << r.state.s[id] << ' ';
      }
    }
    std::cout << '\n';
  }
  std::cout << "\nblocks:\n";
  for (BlockId id : b.block_ids()) {
    const Block& blk = b.block(id);
    std::cout << "  " << std::setw(4) << id << ' ' << to_string(blk.color) << ' '
              << to_label(from_index(blk.stones.front(), n), n) << " stones=" << blk.stones.size()
              << " libs=" << blk.liberties.size() << " s=" << std::setprecision(4) << r.state.s[id]
              << (blk.statically_alive ? " alive" : "") << '\n';
  }
  const Score sc = score(b, r.state);
  std::cout << std::setprecision(3) << "\nscore: black " << sc.black_total << "  white " << sc.white_total
            << "  net " << sc.net << "\nsweeps " << r.stats.sweeps << (r.stats.converged ? "" : " (capped)")
            << '\n';
}

int cmd_eval(const fs::path& file, std::size_t move, const SolverConfig& cfg, bool as_json) {
  check_config(cfg);
  const auto [board, next] = position_at(load_record(file), move);
  const SolveResult r = solve(board, init_state(board), cfg);
  if (as_json)
    std::cout << service::evaluation_json(board, r, cfg).dump(1) << '\n';
  else
    print_fields(board, r);
  return 0;
}

int cmd_rank(const fs::path& file, std::size_t move, std::size_t top, const SolverConfig& cfg, unsigned jobs) {
  check_config(cfg);
  const sgf::GameRecord rec = load_record(file);
  const auto [board, mover] = position_at(rec, move);
  const MoveRanking ranking = rank_moves(board, mover, cfg, jobs);
  std::optional<Coord> recorded;
  if (move < rec.moves.size()) recorded = rec.moves[move].coord;

  std::cout << to_string(mover) << " to move, " << ranking.entries.size() << " legal moves\n";
  const std::size_t n = std::min(top, ranking.entries.size());
  for (std::size_t i = 0; i < n; ++i) {
    const RankedMove& m = ranking.entries[i];
    std::cout << std::setw(4) << i + 1 << "  " << std::setw(4) << to_label(m.coord, board.size()) << "  "
              << std::fixed << std::setprecision(3) << std::setw(9) << m.score << "  bucket "
              << percentile_of(ranking, m.coord) << (recorded == m.coord ? "  <- recorded" : "") << '\n';
  }
  if (recorded && ranking.position_of(*recorded) && *ranking.position_of(*recorded) >= n)
    std::cout << "recorded move " << to_label(*recorded, board.size()) << " at position "
              << *ranking.position_of(*recorded) + 1 << ", bucket " << percentile_of(ranking, *recorded) << '\n';
  return 0;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

int cmd_bench(const fs::path& dir, const std::string& moves, int first, int last, const SolverConfig& cfg,
              const fs::path& out_dir, unsigned jobs) {
  check_config(cfg);
  bench::MoveFilter filter{first, last, {}};
  for (int m : parse_moves(moves)) filter.only.insert(m);
  const bench::CorpusStats stats = bench::run_corpus(dir, cfg, filter, jobs);

  std::ostringstream hist, surv;
  bench::write_histogram_csv(hist, stats);
  bench::write_survival_csv(surv, stats);
  if (out_dir.empty()) {
    std::cout << surv.str();
  } else {
    fs::create_directories(out_dir);
    write_file(out_dir / "histogram.csv", hist.str());
    write_file(out_dir / "survival.csv", surv.str());
  }
  const bench::PredictionHistogram pooled = stats.pooled();
  std::cerr << "files " << stats.files_parsed << " (failed " << stats.files_failed << "), positions "
            << pooled.positions_counted << ", passes skipped " << stats.passes_skipped << ", illegal skipped "
            << stats.illegal_skipped << '\n';
  if (pooled.positions_counted > 0)
    std::cerr << "pooled R(80) = " << std::fixed << std::setprecision(2) << bench::survival(pooled).values[80]
              << "%\n";
  for (const auto& e : stats.errors) std::cerr << "  " << e << '\n';
  return 0;
}

int cmd_timing(const fs::path& dir, const std::string& moves, long samples, const SolverConfig& cfg,
               const fs::path& out_file) {
  check_config(cfg);
  const std::vector<int> numbers = parse_moves(moves);
  const bench::TimingProfile prof = bench::timing_profile(dir, cfg, numbers, samples);
  std::ostringstream csv;
  bench::write_timing_csv(csv, prof);
  if (out_file.empty())
    std::cout << csv.str();
  else
    write_file(out_file, csv.str());
  for (const auto& r : prof.rows) std::cerr << "move " << r.move_number << ": " << r.samples << " samples\n";
  return 0;
}

int cmd_oracle(int positions, int size, std::uint64_t seed, SolverConfig cfg) {
  check_config(cfg);
  if (size < kMinBoardSize || size > kMaxBoardSize) throw InputError("--size must be within 2..25");
  const bench::OracleReport rep = bench::oracle_check(positions, size, seed, cfg);
  std::cout << "positions " << rep.positions << "  size " << size << "  stop_value " << cfg.stop_value
            << "\nmax deviation " << std::scientific << std::setprecision(3) << rep.max_deviation
            << "\ndense iteration without convergence: " << rep.dense_nonconverged << '\n';
  return rep.max_deviation < 1e-3 && rep.dense_nonconverged == 0 ? 0 : kExitInternal;
}

int cmd_serve(int port) {
  auto svr = service::make_server();
  std::cerr << "listening on 0.0.0.0:" << port << '\n';
  if (!svr->listen("0.0.0.0", port)) throw std::runtime_error("cannot listen on port " + std::to_string(port));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Static position evaluation by a dynamical system over points and blocks"};
  app.require_subcommand(1);
  SolverConfig cfg;

  std::string file, dir, moves, out;
  std::size_t move = 0, top = 10;
  unsigned jobs = 1;
  bool as_json = false;

  auto* eval = app.add_subcommand("eval", "print w/s fields and score of a game position");
  eval->add_option("sgf", file, "game record")->required()->check(CLI::ExistingFile);
  eval->add_option("--move", move, "number of recorded moves to play first")->capture_default_str();
  eval->add_flag("--json", as_json, "print the service evaluation payload");
  add_config_flags(eval, cfg);

  auto* rank = app.add_subcommand("rank", "rank every legal move of a game position");
  rank->add_option("sgf", file, "game record")->required()->check(CLI::ExistingFile);
  rank->add_option("--move", move, "number of recorded moves to play first")->capture_default_str();
  rank->add_option("--top", top, "entries to print")->capture_default_str();
  rank->add_option("--jobs", jobs, "worker threads")->capture_default_str();
  add_config_flags(rank, cfg);

  int first = 1, last = 1 << 30;
  auto* bench_cmd = app.add_subcommand("bench", "move-prediction statistics over an SGF directory");
  bench_cmd->add_option("dir", dir, "directory of .sgf files")->required();
  bench_cmd->add_option("--moves", moves, "comma-separated move numbers (overrides --first/--last)");
  bench_cmd->add_option("--first", first, "first move number")->capture_default_str();
  bench_cmd->add_option("--last", last, "last move number");
  bench_cmd->add_option("--out", out, "directory for histogram.csv and survival.csv (default: survival to stdout)");
  bench_cmd->add_option("--jobs", jobs, "games evaluated in parallel")->capture_default_str();
  add_config_flags(bench_cmd, cfg);

  long samples = 400;
  auto* timing = app.add_subcommand("timing", "mean evaluation and ranking time per move number");
  timing->add_option("dir", dir, "directory of .sgf files")->required();
  timing->add_option("--moves", moves, "comma-separated move numbers")->required();
  timing->add_option("--samples", samples, "positions per move number")->capture_default_str();
  timing->add_option("--out", out, "CSV file (default: stdout)");
  add_config_flags(timing, cfg);

  int positions = 50, size = 9;
  std::uint64_t seed = 1;
  SolverConfig oracle_cfg{1e-5, 1000};
  auto* oracle = app.add_subcommand("oracle-check", "worklist solver against dense Jacobi iteration");
  oracle->add_option("--positions", positions)->capture_default_str();
  oracle->add_option("--size", size)->capture_default_str();
  oracle->add_option("--seed", seed)->capture_default_str();
  add_config_flags(oracle, oracle_cfg);

  int port = service::kDefaultPort;
  auto* serve = app.add_subcommand("serve", "run the JSON evaluation service");
  serve->add_option("--port", port)->envname("SEDS_PORT")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*eval) return cmd_eval(file, move, cfg, as_json);
    if (*rank) return cmd_rank(file, move, top, cfg, jobs);
    if (*bench_cmd) return cmd_bench(dir, moves, first, last, cfg, out, jobs);
    if (*timing) return cmd_timing(dir, moves, samples, cfg, out);
    if (*oracle) return cmd_oracle(positions, size, seed, oracle_cfg);
    if (*serve) return cmd_serve(port);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const bench::EmptyCorpus& e) {
    std::cerr << "EmptyCorpus: " << e.what() << '\n';
    return kExitInput;
  } catch (const sgf::SgfError& e) {
    std::cerr << "SGF error: " << e.what() << '\n';
    return kExitInput;
  } catch (const sgf::IllegalRecordedMove& e) {
    std::cerr << "IllegalRecordedMove: " << e.what() << '\n';
    return kExitInput;
  } catch (const BoardError& e) {
    std::cerr << to_string(e.kind()) << ": " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}
