#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "abeldim/box_opt.hpp"
#include "abeldim/tower.hpp"

namespace abeldim {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Everything a run depends on. File inputs are held inline so that a
// serialized config replays without the original files.
struct RunConfig {
    std::string command;
    std::string graph;        // graph text
    std::string cycle;        // Z
    std::string lower;        // lower corner for minchi
    std::string chern;        // l' in the coordinates below
    std::string coords = "estar";
    std::string v1;           // base vertex ids
    std::string vertex;       // blow-up center
    std::string mode = "generic";
    std::string base = "genpic";
    std::string table;        // oracle table text; empty means generic
    bool table_fallback = false;
    std::string hypothesis = "warn";
    std::string format = "human";
    std::string emit_table;   // path
    std::string misses;       // path
    std::uint64_t volume_cap = kDefaultVolumeCap;
    std::uint64_t optimizer_cap = kDefaultOptimizerCap;
    std::uint64_t tower_cap = kDefaultTowerCap;
    unsigned jobs = 1;
    std::uint64_t seed = 1;
    std::uint64_t count = 50;
    std::uint64_t max_vertices = 5;

    bool operator==(const RunConfig&) const = default;
};

nlohmann::ordered_json config_to_json(const RunConfig& c);
RunConfig config_from_json(const nlohmann::json& j);

// Throws UsageError. Reads graph and table files named on the command line.
RunConfig parse_args(const std::vector<std::string>& args);

// Exit code 0 on success, 1 on a math error or a fuzz disagreement.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

// Exit code 2 on usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace abeldim
