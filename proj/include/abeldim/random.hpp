#pragma once

#include <cstdint>
#include <random>

#include "abeldim/lattice.hpp"

namespace abeldim {

// Seeded generator with a platform independent bounded draw.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    std::uint64_t next() { return engine_(); }
    // Uniform integer in [lo, hi].
    std::int64_t uniform(std::int64_t lo, std::int64_t hi);
    bool coin() { return (next() >> 63) != 0; }

private:
    std::mt19937_64 engine_;
};

enum class EulerMode {
    // e_v <= -deg(v) - 1: strictly diagonally dominant, hence rational-leaning
    Dominant,
    // e_v drawn from {-1, -2, -2, -2, -3} and filtered by the minor test;
    // produces non-rational graphs regularly
    Wide,
};

struct RandomGraphOptions {
    EulerMode mode = EulerMode::Dominant;
    std::int64_t spread = 2;      // Dominant: e_v in [-deg - 1 - spread, min(-deg - 1, max_euler)]
    std::int64_t max_euler = -2;  // Dominant: upper clamp
};

GraphPtr random_graph(Rng& rng, std::size_t n, const RandomGraphOptions& options = {});
GraphPtr random_graph(std::uint64_t seed, std::size_t n, const RandomGraphOptions& options = {});

struct InstanceOptions {
    std::size_t min_vertices = 1;
    std::size_t max_vertices = 5;
    std::int64_t max_a = 2;          // a_v in [0, max_a]
    std::int64_t z_extra = 2;        // Z = Z_min + (0..z_extra) per vertex
    std::uint64_t volume_cap = 20000;  // box volume of Z
    bool mixed_modes = true;         // alternate Dominant and Wide graphs
};

// A graph, a cycle Z >= Z_min >= E and l' = -sum a_v E*_v.
struct RandomInstance {
    GraphPtr graph;
    Cycle z;
    std::vector<std::int64_t> a;

    RatCycle lprime() const { return from_pairing(graph, a); }
};

RandomInstance random_instance(Rng& rng, const InstanceOptions& options = {});

}  // namespace abeldim
