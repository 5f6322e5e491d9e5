#include "abeldim/abel_dim.hpp"

#include <map>
#include <mutex>

namespace abeldim {

namespace {

void require_neg_lipman(const RatCycle& lprime) {
    if (!in_neg_lipman(lprime))
        throw Error(ErrorKind::NotNegLipman, "l' = " + lprime.to_string() + " is not in -S'");
}

void require_at_least_e(const Cycle& z) {
    for (std::size_t v = 0; v < z.size(); ++v)
        if (z[v] < 1)
            throw Error(ErrorKind::CycleBelowE,
                        "Z = " + z.to_string() + " has coefficient " + std::to_string(z[v]) + " at " +
                            z.graph()->id(v));
}

void require_effective(const Cycle& z) {
    if (!z.is_effective()) throw Error(ErrorKind::InvalidArgument, "Z must be effective");
}

std::int64_t to_int(const Rational& q) {
    if (q.get_den() != 1 || !q.get_num().fits_slong_p())
        throw Error(ErrorKind::ConsistencyError, "non-integral value " + format_rational(q));
    return q.get_num().get_si();
}

void check_volume(const Cycle& z, const BoxOptions& options) {
    auto vol = box_volume(Cycle(z.graph()), z);
    if (vol > options.volume_cap)
        throw Error(ErrorKind::BoxTooLarge, "box volume " + std::to_string(vol) + " exceeds the cap " +
                                                std::to_string(options.volume_cap));
}

}  // namespace

H1Provider generic_h1_provider(const BoxOptions& options) {
    return [options](const Cycle& z) { return h1_O_generic(z, options); };
}

H1Provider relgen_h1_provider(const RelativeContext& ctx) {
    return [&ctx](const Cycle& z) { return h1_O_relgen(ctx, z); };
}

H1Provider memoized(H1Provider provider) {
    struct Cache {
        std::mutex mutex;
        std::map<std::vector<std::int64_t>, std::int64_t> values;
    };
    auto cache = std::make_shared<Cache>();
    return [cache, provider = std::move(provider)](const Cycle& z) {
        {
            std::lock_guard<std::mutex> lock(cache->mutex);
            auto it = cache->values.find(z.coefficients());
            if (it != cache->values.end()) return it->second;
        }
        auto v = provider(z);
        std::lock_guard<std::mutex> lock(cache->mutex);
        cache->values.emplace(z.coefficients(), v);
        return v;
    };
}

std::int64_t dim_abel_via_h1(const Cycle& z, const RatCycle& lprime, const H1Provider& h1,
                             const BoxOptions& options) {
    require_same_graph(*z.graph(), *lprime.graph());
    require_neg_lipman(lprime);
    require_at_least_e(z);
    Objective obj;
    obj.linear = pairing_vector(lprime);
    obj.callback = [&h1](const Cycle& z1) { return -h1(z1); };
    auto r = minimize_box(BoxProblem(Cycle(z.graph()), z, std::move(obj)), options);
    return h1(z) + to_int(r.value);
}

std::int64_t dim_abel_generic(const Cycle& z, const RatCycle& lprime, const BoxOptions& options) {
    require_same_graph(*z.graph(), *lprime.graph());
    require_neg_lipman(lprime);
    require_at_least_e(z);
    const auto& g = z.graph();
    auto p = pairing_vector(lprime);
    auto min_chi = [&](const Cycle& lo, const Cycle& hi) {
        return to_int(minimize_box(BoxProblem(lo, hi, Objective::chi_zero(g)), options).value);
    };
    Objective obj;
    obj.callback = [&](const Cycle& z1) -> std::int64_t {
        if (z1.is_zero()) return 0;
        Cycle e = z1.reduced_support();
        return min_chi(e, z1) - chi(e);
    };
    obj.linear = p;
    auto inner = minimize_box(BoxProblem(Cycle(g), z, std::move(obj)), options);
    return 1 - min_chi(Cycle::all_ones(g), z) + to_int(inner.value);
}

std::int64_t h1_twisted_genim(const Cycle& z, const RatCycle& lprime, const H1Provider& h1_l0,
                              const BoxOptions& options) {
    require_same_graph(*z.graph(), *lprime.graph());
    require_neg_lipman(lprime);
    require_effective(z);
    Objective obj;
    obj.linear = pairing_vector(lprime);
    for (auto& x : obj.linear) x = -x;
    obj.callback = [&h1_l0](const Cycle& z1) { return z1.is_zero() ? 0 : h1_l0(z1); };
    auto r = maximize_box(BoxProblem(Cycle(z.graph()), z, std::move(obj)), options);
    return to_int(r.value);
}

std::int64_t e_support(const Cycle& z, const std::vector<std::size_t>& vertices, const H1Provider& h1) {
    require_effective(z);
    Cycle off = z;
    for (std::size_t v : vertices) off[v] = 0;
    return h1(z) - h1(off);
}

ComponentData component_data(const RelativeContext& ctx, const Cycle& b, const RatCycle& lprime,
                             const BundleDescriptor& base) {
    if (b.is_zero() || component_count(b) != 1)
        throw Error(ErrorKind::DisconnectedInput, "component cycle " + b.to_string() + " is not connected");
    ComponentData c{b, 0, 0};
    c.g = h1_rel_generic(ctx, b, lprime, base).value;
    c.d = rel_dominant(ctx, b, lprime, base).dominant ? 0 : 1;
    return c;
}

BResult b_invariant(const RelativeContext& ctx, const Cycle& z, const RatCycle& lprime,
                    const BundleDescriptor& base) {
    require_same_graph(*z.graph(), *ctx.graph());
    require_neg_lipman(lprime);
    check_base_chern(ctx, lprime, base);
    require_effective(z);
    check_volume(z, ctx.options().box);

    std::map<std::vector<std::int64_t>, ComponentData> cache;
    auto data = [&](const Cycle& part) -> const ComponentData& {
        auto it = cache.find(part.coefficients());
        if (it == cache.end()) it = cache.emplace(part.coefficients(), component_data(ctx, part, lprime, base)).first;
        return it->second;
    };

    BResult best{0, Cycle(z.graph()), {}, 0};
    bool first = true;
    for_each_in_box(Cycle(z.graph()), z, [&](const Cycle& zp) {
        std::int64_t total = 0;
        for (const auto& part : split_cycle(zp)) total += data(part).t();
        if (first || total > best.value) {
            best.value = total;
            best.optimal = zp;
            best.maximizers = 1;
            first = false;
        } else if (total == best.value) {
            ++best.maximizers;
        }
        return true;
    });
    for (const auto& part : split_cycle(best.optimal)) {
        const auto& c = data(part);
        auto support = part.support();
        if (support.size() == 1 && !ctx.in_v1(support[0]) && c.t() == 0) continue;
        best.components.push_back(c);
    }
    return best;
}

AbelReport dim_rel_abel(const RelativeContext& ctx, const Cycle& z, const RatCycle& lprime,
                        const BundleDescriptor& base, H1Provider h1) {
    require_same_graph(*z.graph(), *ctx.graph());
    require_neg_lipman(lprime);
    check_base_chern(ctx, lprime, base);
    require_effective(z);
    if (!h1) h1 = relgen_h1_provider(ctx);

    AbelReport rep;
    Cycle z1 = ctx.base_part(z);
    auto section = z1.is_zero() ? std::optional<bool>(true) : ctx.base_has_section(z1, base);
    if (section && !*section)
        throw Error(ErrorKind::EmptyECa, "H0(Z1, L)_0 is empty for Z1 = " + z1.to_string());
    if (!section) ctx.note("nonemptiness of ECa(Z) over the base bundle not verified");

    rep.h1_base = ctx.base_h1(z1, base);
    rep.h1_O_Z = h1(z);
    rep.h1_O_Z1 = h1(z1);
    rep.b = b_invariant(ctx, z, lprime, base);
    rep.dimension = rep.h1_base + rep.h1_O_Z - rep.h1_O_Z1 - rep.b.value;
    rep.eca_dimension = rep.h1_base - rep.h1_O_Z1 + pair(RatCycle(z), lprime).get_num().get_si();
    if (rep.dimension < 0)
        throw Error(ErrorKind::ConsistencyError,
                    "negative dimension " + std::to_string(rep.dimension) + ": b = " + std::to_string(rep.b.value) +
                        " exceeds h1(Z1, L) + h1(O_Z) - h1(O_Z1)");
    if (rep.dimension > *rep.eca_dimension)
        throw Error(ErrorKind::ConsistencyError, "image dimension exceeds the dimension of ECa");
    rep.notes = ctx.oracle()->notes();
    return rep;
}

AbelReport dim_abel_section5(const RelativeContext& ctx, const Cycle& z, const RatCycle& lprime) {
    require_same_graph(*z.graph(), *ctx.graph());
    require_neg_lipman(lprime);
    require_effective(z);
    AbelReport rep;
    auto base = BundleDescriptor::generic_abel_image(ctx.restrict_pairing(lprime));
    rep.h1_O_Z = h1_O_relgen(ctx, z);
    rep.b = b_invariant(ctx, z, lprime, base);
    rep.dimension = rep.h1_O_Z - rep.b.value;
    if (rep.dimension < 0)
        throw Error(ErrorKind::ConsistencyError, "b = " + std::to_string(rep.b.value) + " exceeds h1(O_Z) = " +
                                                     std::to_string(rep.h1_O_Z));
    rep.notes = ctx.oracle()->notes();
    return rep;
}

}  // namespace abeldim
