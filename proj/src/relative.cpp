#include "abeldim/relative.hpp"

#include <algorithm>

namespace abeldim {

RelativeContext::RelativeContext(GraphPtr graph, std::vector<std::size_t> v1, OraclePtr oracle,
                                 RelativeOptions options)
    : graph_(graph), embedding_(graph, std::move(v1)), oracle_(std::move(oracle)), options_(std::move(options)) {
    if (!oracle_) {
        OracleOptions o;
        o.hypothesis = options_.hypothesis;
        o.box = options_.box;
        oracle_ = std::make_shared<GenericOracle>(o);
    }
}

BundleDescriptor::Vec RelativeContext::restrict_pairing(const RatCycle& x) const {
    require_same_graph(*x.graph(), *graph_);
    auto p = pairing_vector(x);
    for (std::size_t v = 0; v < p.size(); ++v)
        if (!in_v1(v)) p[v] = 0;
    return p;
}

BundleDescriptor::Vec RelativeContext::restrict_pairing(const Cycle& x) const {
    require_same_graph(*x.graph(), *graph_);
    BundleDescriptor::Vec p(graph_->size(), 0);
    for (std::size_t v : v1()) {
        std::int64_t s = graph_->euler(v) * x[v];
        for (std::size_t w : graph_->neighbors(v)) s += x[w];
        p[v] = s;
    }
    return p;
}

Cycle RelativeContext::base_part(const Cycle& x) const { return embedding_.restrict_to_parent(x); }

std::int64_t RelativeContext::base_h1(const Cycle& y, const BundleDescriptor& bundle) const {
    std::int64_t total = 0;
    const auto& comps = embedding_.components();
    for (std::size_t k = 0; k < comps.size(); ++k) {
        Cycle local = embedding_.restrict(y, k);
        if (local.is_zero()) continue;
        total += oracle_->h1(local, bundle.restricted(comps[k].to_parent));
    }
    return total;
}

std::optional<bool> RelativeContext::base_has_section(const Cycle& y, const BundleDescriptor& bundle) const {
    bool undecided = false;
    const auto& comps = embedding_.components();
    for (std::size_t k = 0; k < comps.size(); ++k) {
        Cycle local = embedding_.restrict(y, k);
        if (local.is_zero()) continue;
        auto r = oracle_->try_has_section(local, bundle.restricted(comps[k].to_parent));
        if (!r) undecided = true;
        else if (!*r) return false;
    }
    if (undecided) return std::nullopt;
    return true;
}

std::vector<RatCycle> restrict_chern(const RelativeContext& ctx, const RatCycle& x) {
    auto p = ctx.restrict_pairing(x);
    std::vector<RatCycle> out;
    for (const auto& comp : ctx.base().components()) {
        std::vector<std::int64_t> local;
        for (std::size_t v : comp.to_parent) local.push_back(p[v]);
        out.push_back(from_pairing(comp.graph, local));
    }
    return out;
}

Cycle truncate(const Cycle& z, const Cycle& l, const Cycle& z1) {
    Cycle d = z;
    d -= l;
    return cycle_min(d, z1);
}

void check_base_chern(const RelativeContext& ctx, const RatCycle& lprime, const BundleDescriptor& base) {
    if (base.kind() == BundleKind::Table || base.kind() == BundleKind::RelativeGeneric) return;
    auto want = ctx.restrict_pairing(lprime);
    auto have = base.first_chern_class(ctx.graph()->size());
    for (std::size_t v : ctx.v1())
        if (want[v] != have[v])
            throw Error(ErrorKind::ChernMismatch, "base bundle Chern class differs from R1(l') at vertex " +
                                                      ctx.graph()->id(v));
}

namespace {

void require_neg_lipman(const RatCycle& lprime) {
    if (!in_neg_lipman(lprime))
        throw Error(ErrorKind::NotNegLipman, "l' = " + lprime.to_string() + " is not in -S'");
}

bool touches_base(const RelativeContext& ctx, const Cycle& z) {
    for (std::size_t v : z.support())
        if (ctx.in_v1(v)) return true;
    return false;
}

// chi(-l' + l) - h1((Z - l)_1, base(-R1(l))) over 0 <= l <= Z.
BoxProblem relative_problem(const RelativeContext& ctx, const Cycle& z, const RatCycle& lprime,
                            const BundleDescriptor& base) {
    Objective obj = Objective::chi_of(-lprime);
    if (touches_base(ctx, z)) {
        Cycle z1 = ctx.base_part(z);
        obj.callback = [&ctx, z, z1, base](const Cycle& l) {
            return -ctx.base_h1(truncate(z, l, z1), base.twisted(ctx.restrict_pairing(l)));
        };
    }
    return BoxProblem(Cycle(ctx.graph()), z, std::move(obj));
}

std::int64_t integral(const Rational& q) {
    if (q.get_den() != 1 || !q.get_num().fits_slong_p())
        throw Error(ErrorKind::ConsistencyError, "non-integral h1 value " + format_rational(q));
    return q.get_num().get_si();
}

}  // namespace

DominanceResult rel_dominant(const RelativeContext& ctx, const Cycle& z, const RatCycle& lprime,
                             const BundleDescriptor& base) {
    require_same_graph(*z.graph(), *ctx.graph());
    require_neg_lipman(lprime);
    check_base_chern(ctx, lprime, base);
    if (!z.is_effective()) throw Error(ErrorKind::InvalidArgument, "Z must be effective");
    DominanceResult r;
    if (z.is_zero()) return r;
    Rational bound = chi(-lprime) - ctx.base_h1(ctx.base_part(z), base);
    auto problem = relative_problem(ctx, z, lprime, base);
    r.witness = first_at_most(problem, bound, true, ctx.options().box);
    r.dominant = !r.witness.has_value();
    return r;
}

RelH1Result h1_rel_generic(const RelativeContext& ctx, const Cycle& z, const RatCycle& lprime,
                           const BundleDescriptor& base) {
    require_same_graph(*z.graph(), *ctx.graph());
    require_neg_lipman(lprime);
    check_base_chern(ctx, lprime, base);
    if (!z.is_effective()) throw Error(ErrorKind::InvalidArgument, "Z must be effective");
    RelH1Result r;
    auto problem = relative_problem(ctx, z, lprime, base);
    r.minimizers = minimize_box(problem, ctx.options().box);
    r.value = integral(chi(-lprime) - r.minimizers.value);
    return r;
}

std::int64_t h1_natural_relgen(const RelativeContext& ctx, const Cycle& z, const RatCycle& lprime) {
    require_same_graph(*z.graph(), *ctx.graph());
    if (!z.is_effective()) throw Error(ErrorKind::InvalidArgument, "Z must be effective");
    if (z.is_zero()) return 0;
    const auto& g = ctx.graph();
    auto p = pairing_vector(lprime);
    BundleDescriptor base = BundleDescriptor::natural(ctx.restrict_pairing(lprime));

    auto support = z.support();
    if (std::all_of(support.begin(), support.end(), [&](std::size_t v) { return ctx.in_v1(v); }))
        return ctx.base_h1(z, base);

    // -m must have positive E-coordinates on V2 within every component of |Z|.
    bool ok = true;
    for (const auto& comp : components(*g, support)) {
        auto sub = induce_subgraph(g, comp);
        const auto& part = sub.components().front();
        std::vector<std::int64_t> local;
        for (std::size_t v : part.to_parent) local.push_back(p[v]);
        RatCycle m = from_pairing(part.graph, local);
        for (std::size_t i = 0; i < m.size(); ++i)
            if (!ctx.in_v1(part.to_parent[i]) && m[i] >= 0) ok = false;
    }
    if (!ok) {
        std::string msg = "natural bundle formula applied with a coefficient a_v <= 0 on V2 within the support";
        if (ctx.options().hypothesis == HypothesisMode::Strict)
            throw Error(ErrorKind::HypothesisViolation, msg + " (Z = " + z.to_string() + ", l' = " + lprime.to_string() + ")");
        ctx.note(msg);
    }

    auto problem = relative_problem(ctx, z, lprime, base);
    auto r = minimize_box(problem, ctx.options().box);
    return integral(chi(-lprime) - r.value);
}

std::int64_t h1_O_relgen(const RelativeContext& ctx, const Cycle& z) {
    require_same_graph(*z.graph(), *ctx.graph());
    if (!z.is_effective()) throw Error(ErrorKind::InvalidArgument, "Z must be effective");
    std::int64_t total = 0;
    for (const auto& part : split_cycle(z)) {
        Cycle e = part.reduced_support();
        auto support = part.support();
        if (std::all_of(support.begin(), support.end(), [&](std::size_t v) { return ctx.in_v1(v); })) {
            total += ctx.base_h1(part, BundleDescriptor::trivial());
            continue;
        }
        Cycle rest = part;
        rest -= e;
        total += h1_natural_relgen(ctx, rest, -RatCycle(e));
    }
    return total;
}

}  // namespace abeldim
