#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "abeldim/relative.hpp"

namespace abeldim {

// h1 of the structure sheaf (or of a fixed bundle) on subcycles 0 <= Z1 <= Z.
using H1Provider = std::function<std::int64_t(const Cycle&)>;

H1Provider generic_h1_provider(const BoxOptions& options = {});
// h1(O_Z) on the relatively generic ambient singularity of ctx.
H1Provider relgen_h1_provider(const RelativeContext& ctx);
// Thread-safe cache in front of a provider.
H1Provider memoized(H1Provider provider);

// min over 0 <= Z1 <= Z of (l', Z1) + h1(O_Z) - h1(O_Z1).
std::int64_t dim_abel_via_h1(const Cycle& z, const RatCycle& lprime, const H1Provider& h1,
                             const BoxOptions& options = {});

// The same dimension for a generic analytic type, written with chi only.
std::int64_t dim_abel_generic(const Cycle& z, const RatCycle& lprime, const BoxOptions& options = {});

// max over 0 <= Z1 <= Z of h1(Z1, L0) - (l', Z1).
std::int64_t h1_twisted_genim(const Cycle& z, const RatCycle& lprime, const H1Provider& h1_l0,
                              const BoxOptions& options = {});

// h1(O_Z) - h1(O_Z') where Z' is Z with the coefficients on I removed.
std::int64_t e_support(const Cycle& z, const std::vector<std::size_t>& vertices, const H1Provider& h1);

struct ComponentData {
    Cycle cycle;
    std::int64_t g = 0;
    int d = 0;
    std::int64_t t() const { return g + d; }
};

// g, D and T of a connected cycle B against the base bundle.
ComponentData component_data(const RelativeContext& ctx, const Cycle& b, const RatCycle& lprime,
                             const BundleDescriptor& base);

struct BResult {
    std::int64_t value = 0;
    // Lexicographically least maximizer.
    Cycle optimal;
    // Its components, without single V2 vertices of T = 0.
    std::vector<ComponentData> components;
    std::uint64_t maximizers = 0;
};

BResult b_invariant(const RelativeContext& ctx, const Cycle& z, const RatCycle& lprime,
                    const BundleDescriptor& base);

struct AbelReport {
    std::int64_t dimension = 0;
    BResult b;
    std::int64_t h1_base = 0;    // h1(Z1, L)
    std::int64_t h1_O_Z = 0;
    std::int64_t h1_O_Z1 = 0;
    std::optional<std::int64_t> eca_dimension;
    std::vector<std::string> notes;
};

// Dimension of the image of the relative Abel map over the base bundle.
// Structure sheaf values come from h1 or, when empty, from the relatively
// generic formula.
AbelReport dim_rel_abel(const RelativeContext& ctx, const Cycle& z, const RatCycle& lprime,
                        const BundleDescriptor& base, H1Provider h1 = {});

// h1(O_Z) - b with the base bundle generic in the Abel image of R1(l').
AbelReport dim_abel_section5(const RelativeContext& ctx, const Cycle& z, const RatCycle& lprime);

}  // namespace abeldim
