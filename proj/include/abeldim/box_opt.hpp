#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "abeldim/lattice.hpp"

namespace abeldim {

inline constexpr std::uint64_t kDefaultVolumeCap = 10'000'000;
inline constexpr std::size_t kDefaultOptimizerCap = 4096;

// Objective  chi(base + l) + sum_v w_v l_v + callback(l); every part optional.
// The base enters through its pairing vector, so it must lie in L'.
struct Objective {
    std::optional<RatCycle> chi_base;
    std::vector<std::int64_t> linear;  // empty means no linear term
    std::function<std::int64_t(const Cycle&)> callback;

    static Objective chi_of(const RatCycle& base) { return Objective{base, {}, {}}; }
    static Objective chi_zero(const GraphPtr& g) { return Objective{RatCycle(g), {}, {}}; }
};

struct BoxProblem {
    GraphPtr graph;
    Cycle lower;
    Cycle upper;
    Objective objective;

    BoxProblem(Cycle lower, Cycle upper, Objective objective = {});
    // Saturates at UINT64_MAX.
    std::uint64_t volume() const;
    Rational evaluate(const Cycle& l) const;
};

enum class BoxMethod { Auto, Exhaustive, BranchAndBound, TreeDP };

struct BoxOptions {
    BoxMethod method = BoxMethod::Auto;
    std::uint64_t volume_cap = kDefaultVolumeCap;
    std::size_t optimizer_cap = kDefaultOptimizerCap;
    unsigned jobs = 1;
};

struct OptResult {
    Rational value;
    // All optimizers in lexicographic order, or the least one when count
    // exceeds the optimizer cap.
    std::vector<Cycle> optimizers;
    std::uint64_t count = 0;
    bool complete() const { return count == optimizers.size(); }
};

OptResult minimize_box(const BoxProblem& problem, const BoxOptions& options = {});
OptResult maximize_box(const BoxProblem& problem, const BoxOptions& options = {});

// Lexicographically first l in the box with l != 0 and objective <= bound;
// nullopt if there is none. Ignores the optimizer cap.
std::optional<Cycle> first_at_most(const BoxProblem& problem, const Rational& bound,
                                   bool exclude_zero, const BoxOptions& options = {});

std::uint64_t box_volume(const Cycle& lower, const Cycle& upper);

// Calls f on every cycle of the box in lexicographic order; stops when f
// returns false. Returns false when stopped early.
bool for_each_in_box(const Cycle& lower, const Cycle& upper,
                     const std::function<bool(const Cycle&)>& f);

std::int64_t h1_O_generic(const Cycle& z, const BoxOptions& options = {});
std::int64_t h1_pic_generic(const Cycle& z, const RatCycle& lprime, const BoxOptions& options = {});
// Same value from the pairing vector of l'.
std::int64_t h1_pic_generic(const Cycle& z, std::span<const std::int64_t> pairing,
                            const BoxOptions& options = {});

}  // namespace abeldim
