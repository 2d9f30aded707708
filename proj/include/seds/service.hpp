#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "seds/analysis.hpp"
#include "seds/board.hpp"
#include "seds/solver.hpp"

namespace seds::service {

using json = nlohmann::json;

constexpr const char* kVersion = "1.0.0";
constexpr std::size_t kMaxBodyBytes = 64 * 1024;
constexpr int kDefaultPort = 8642;

struct Response {
  int status = 200;
  json body;
};

struct PositionPayload {
  int size = 19;
  std::vector<Coord> black;
  std::vector<Coord> white;
  std::optional<Color> mover;
  std::optional<Coord> ko;  // barred for the mover
  SolverConfig config;
};

namespace detail {

struct RequestError {
  int status;
  std::string reason;
  std::string message;
};

inline Response error_response(const RequestError& e) {
  return {e.status, {{"error", e.reason}, {"message", e.message}}};
}

inline Coord read_coord(const json& j) {
  if (!j.is_object() || !j.contains("col") || !j.contains("row") || !j["col"].is_number_integer() ||
      !j["row"].is_number_integer())
    throw RequestError{400, "BadCoord", "coordinates must be {\"col\":int,\"row\":int}"};
  return {j["col"].get<int>(), j["row"].get<int>()};
}

inline std::vector<Coord> read_stones(const json& j, const char* key) {
  std::vector<Coord> out;
  if (!j.contains(key)) return out;
  if (!j[key].is_array()) throw RequestError{400, "BadRequest", std::string(key) + " must be an array"};
  for (const auto& c : j[key]) out.push_back(read_coord(c));
  return out;
}

inline std::optional<Color> read_color(const json& j) {
  if (!j.is_string()) return std::nullopt;
  const auto s = j.get<std::string>();
  if (s == "black" || s == "B" || s == "b") return Color::Black;
  if (s == "white" || s == "W" || s == "w") return Color::White;
  return std::nullopt;
}

inline PositionPayload parse_payload(const std::string& body) {
  if (body.size() > kMaxBodyBytes) throw RequestError{413, "PayloadTooLarge", "request exceeds 64 KiB"};
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error& e) {
    throw RequestError{400, "BadRequest", e.what()};
  }
  if (!j.is_object()) throw RequestError{400, "BadRequest", "payload must be a JSON object"};

  PositionPayload p;
  if (j.contains("size")) {
    if (!j["size"].is_number_integer()) throw RequestError{400, "BadRequest", "size must be an integer"};
    p.size = j["size"].get<int>();
  }
  if (p.size < kMinBoardSize || p.size > kMaxBoardSize)
    throw RequestError{400, "BadSize", "size must be within 2..25"};
  p.black = read_stones(j, "black");
  p.white = read_stones(j, "white");
  if (j.contains("mover") && !j["mover"].is_null()) {
    p.mover = read_color(j["mover"]);
    if (!p.mover) throw RequestError{400, "BadRequest", "mover must be \"black\" or \"white\""};
  }
  if (j.contains("ko") && !j["ko"].is_null()) p.ko = read_coord(j["ko"]);

  if (j.contains("config") && !j["config"].is_null()) {
    const json& c = j["config"];
    if (!c.is_object()) throw RequestError{400, "BadRequest", "config must be an object"};
    if (c.contains("stop_value")) {
      if (!c["stop_value"].is_number()) throw RequestError{422, "ConfigOutOfRange", "stop_value must be a number"};
      p.config.stop_value = c["stop_value"].get<double>();
    }
    if (c.contains("max_iter")) {
      if (!c["max_iter"].is_number_integer()) throw RequestError{422, "ConfigOutOfRange", "max_iter must be an integer"};
      p.config.max_iter = c["max_iter"].get<int>();
    }
    if (c.contains("atari_adjustment")) {
      const auto a = c["atari_adjustment"].is_string()
                         ? parse_atari_adjustment(c["atari_adjustment"].get<std::string>())
                         : std::nullopt;
      if (!a) throw RequestError{422, "ConfigOutOfRange", "unknown atari_adjustment"};
      p.config.atari_adjustment = *a;
    }
    if (!p.config.valid())
      throw RequestError{422, "ConfigOutOfRange", "stop_value must be > 0 and max_iter >= 1"};
  }
  return p;
}

inline Board build_board(const PositionPayload& p) {
  try {
    Board b = build_position(p.size, p.black, p.white);
    if (p.ko) b.set_ko(*p.ko, p.mover.value_or(Color::Black));
    return b;
  } catch (const BoardError& e) {
    throw RequestError{400, to_string(e.kind()), e.what()};
  }
}

inline json coord_json(Coord c) { return {{"col", c.col}, {"row", c.row}}; }

}  // namespace detail

inline json config_json(const SolverConfig& c) {
  return {{"stop_value", c.stop_value},
          {"max_iter", c.max_iter},
          {"atari_adjustment", to_string(c.atari_adjustment)}};
}

inline json evaluation_json(const Board& board, const SolveResult& r, const SolverConfig& config) {
  const InstabilityMap inst = instability_map(board, r.stats);
  json points = json::array();
  for (int p = 0; p < board.area(); ++p) {
    if (!board.is_empty(p)) continue;
    const Coord c = from_index(p, board.size());
    const Dipole d = dipole_indicator(board, r.state, c);
    points.push_back({{"col", c.col},
                      {"row", c.row},
                      {"w", r.state.w[p]},
                      {"iterations", r.stats.point_iterations(p)},
                      {"instability", inst.aggregate[p]},
                      {"quadrupole", quadrupole_indicator(board, r.state, c)},
                      {"dipole", {d.dx, d.dy}}});
  }
  json blocks = json::array();
  for (BlockId id : board.block_ids()) {
    const Block& b = board.block(id);
    json stones = json::array();
    for (int s : b.stones) stones.push_back(detail::coord_json(from_index(s, board.size())));
    blocks.push_back({{"id", id},
                      {"color", to_string(b.color)},
                      {"stones", std::move(stones)},
                      {"s", r.state.s[id]},
                      {"statically_alive", b.statically_alive},
                      {"iterations", r.stats.block_iterations(id)}});
  }
  const Score sc = score(board, r.state);
  return {{"size", board.size()},
          {"points", std::move(points)},
          {"blocks", std::move(blocks)},
          {"score", {{"black_total", sc.black_total}, {"white_total", sc.white_total}, {"net", sc.net}}},
          {"converged", r.stats.converged},
          {"sweeps", r.stats.sweeps},
          {"config", config_json(config)}};
}

inline json ranking_json(const MoveRanking& ranking, const InstabilityMap& parent_instability) {
  json moves = json::array();
  for (const RankedMove& m : ranking.entries) {
    moves.push_back({{"col", m.coord.col},
                     {"row", m.coord.row},
                     {"score", m.score},
                     {"percentile", ranking.percentile(m.coord)},
                     {"bucket", percentile_of(ranking, m.coord)},
                     {"instability", parent_instability.at(m.coord)},
                     {"sweeps", m.sweeps}});
  }
  return {{"size", ranking.size}, {"mover", to_string(ranking.mover)}, {"moves", std::move(moves)}};
}

/// POST /api/evaluate
inline Response handle_evaluate(const std::string& body) {
  try {
    const PositionPayload p = detail::parse_payload(body);
    const Board board = detail::build_board(p);
    const SolveResult r = solve(board, init_state(board), p.config);
    return {200, evaluation_json(board, r, p.config)};
  } catch (const detail::RequestError& e) {
    return detail::error_response(e);
  }
}

/// POST /api/rank
inline Response handle_rank(const std::string& body) {
  try {
    const PositionPayload p = detail::parse_payload(body);
    if (!p.mover) throw detail::RequestError{422, "MissingMover", "rank needs a mover"};
    const Board board = detail::build_board(p);
    const SolveResult parent = solve(board, init_state(board), p.config);
    const MoveRanking ranking = rank_moves_from(board, parent.state, *p.mover, p.config);
    json body_json = ranking_json(ranking, instability_map(board, parent.stats));
    body_json["config"] = config_json(p.config);
    return {200, std::move(body_json)};
  } catch (const detail::RequestError& e) {
    return detail::error_response(e);
  }
}

/// GET /api/health
inline Response handle_health() {
  return {200, {{"status", "ok"}, {"version", kVersion}, {"default_config", config_json(SolverConfig{})}}};
}

}  // namespace seds::service
