#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pwlward/chase.hpp"
#include "pwlward/instance.hpp"
#include "pwlward/program.hpp"

#include "json.hpp"

namespace pwlward {

// A rectangular tiling system: tiles with left/right border sets, horizontal
// and vertical adjacency constraints, and distinguished start/finish tiles.
struct TilingSystem {
    std::vector<std::string> tiles;
    std::set<std::string> left, right;
    std::set<std::pair<std::string, std::string>> horiz, vert;
    std::string start, finish;

    // Throws std::invalid_argument on malformed specs (unknown keys, tiles
    // outside the tile set, left/right overlap).
    static TilingSystem from_json(const nlohmann::json& spec);
    nlohmann::ordered_json to_json() const;

    void validate() const;
};

struct TilingEncoding {
    Database db;      // one fact per tile / border / constraint, plus start+finish
    Program program;  // fixed rule set, independent of the system
    CQ query;         // Boolean: some candidate tiling finishes on the finish tile
};

TilingEncoding encode_tiling(const TilingSystem& t);

// Grid of tiles, rows first (grid[i][j] = row i+1, position j+1). Exhaustive
// search over widths n <= max_n and heights m <= max_m.
using TilingGrid = std::vector<std::vector<std::string>>;
std::optional<TilingGrid> brute_force_tiling(const TilingSystem& t, std::size_t max_n,
                                             std::size_t max_m);

struct CrossCheckReport {
    std::optional<TilingGrid> witness;
    bool chase_accepted = false;
    bool chase_terminated = false;
    bool conclusive = false;  // at least one side produced a definite verdict
    bool agree = false;       // meaningful only when conclusive
    std::string summary;
};

// Compares the brute-force search against the chase on the encoding. Negative
// findings are only ever budget-relative: the underlying problem is
// undecidable, so the report never claims "no tiling" unconditionally.
CrossCheckReport cross_check(const TilingSystem& t, std::size_t chase_budget,
                             std::size_t max_n, std::size_t max_m);

}  // namespace pwlward
