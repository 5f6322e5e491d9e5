#include "abeldim/box_opt.hpp"

#include <algorithm>
#include <limits>
#include <thread>

namespace abeldim {

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_mul_overflow(a, b, &r)) return std::numeric_limits<std::uint64_t>::max();
    return r;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_add_overflow(a, b, &r)) return std::numeric_limits<std::uint64_t>::max();
    return r;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// Integer part of the objective, multiplied by a sign so that every search
// below is a minimization:  sign * (chi(l) + lin . l + callback(l)).
struct Compiled {
    const PlumbingGraph* g = nullptr;
    std::size_t n = 0;
    int sign = 1;
    bool has_chi = false;
    std::vector<std::int64_t> lin;
    Rational constant = 0;
    const std::function<std::int64_t(const Cycle&)>* callback = nullptr;

    std::int64_t unary(std::size_t v, std::int64_t x) const {
        std::int64_t u = lin[v] * x;
        if (has_chi) {
            const std::int64_t e = g->euler(v);
            u += x * ((e + 2) - e * x) / 2;
        }
        return sign * u;
    }
    std::int64_t edge(std::int64_t a, std::int64_t b) const { return has_chi ? -sign * a * b : 0; }

    std::int64_t smooth(std::span<const std::int64_t> l) const {
        std::int64_t s = 0;
        for (std::size_t v = 0; v < n; ++v) s += unary(v, l[v]);
        if (has_chi)
            for (const auto& [u, w] : g->edges()) s += edge(l[u], l[w]);
        return s;
    }

    std::int64_t full(const Cycle& l) const {
        std::int64_t s = smooth(l.coefficients());
        if (callback && *callback) s += sign * (*callback)(l);
        return s;
    }

    Rational value_of(std::int64_t internal) const {
        return constant + Rational(static_cast<long>(sign * internal));
    }
};

Compiled compile(const BoxProblem& p, int sign) {
    Compiled c;
    c.g = p.graph.get();
    c.n = p.graph->size();
    c.sign = sign;
    c.lin.assign(c.n, 0);
    const auto& obj = p.objective;
    if (!obj.linear.empty()) {
        if (obj.linear.size() != c.n)
            throw Error(ErrorKind::GraphMismatch, "linear weights do not match the graph");
        c.lin = obj.linear;
    }
    if (obj.chi_base) {
        require_same_graph(*obj.chi_base->graph(), *p.graph);
        c.has_chi = true;
        auto pb = pairing_vector(*obj.chi_base);
        for (std::size_t v = 0; v < c.n; ++v) c.lin[v] -= pb[v];
        c.constant = obj.chi_base->is_zero() ? Rational(0) : chi(*obj.chi_base);
    }
    c.callback = &obj.callback;
    return c;
}

bool has_callback(const BoxProblem& p) { return static_cast<bool>(p.objective.callback); }

// Running minimum with lexicographically ordered optimizer capture.
struct Collector {
    explicit Collector(std::size_t c) : cap(c) {}

    std::size_t cap;
    std::int64_t best = kInf;
    std::uint64_t count = 0;
    std::vector<Cycle> opts;

    void offer(std::int64_t val, const Cycle& l) {
        if (val > best) return;
        if (val < best) {
            best = val;
            count = 0;
            opts.clear();
        }
        count = sat_add(count, 1);
        if (opts.size() < std::max<std::size_t>(cap, 1)) opts.push_back(l);
    }
};

void check_volume(const BoxProblem& p, const BoxOptions& o) {
    auto vol = p.volume();
    if (vol > o.volume_cap)
        throw Error(ErrorKind::BoxTooLarge, "box volume " + std::to_string(vol) + " exceeds cap " +
                                                std::to_string(o.volume_cap));
}

// ---------------------------------------------------------------- exhaustive

void scan(const Compiled& c, Cycle l, const Cycle& lower, const Cycle& upper, std::int64_t first_lo,
          std::int64_t first_hi, Collector& out) {
    const std::size_t n = c.n;
    l[0] = first_lo;
    for (;;) {
        out.offer(c.full(l), l);
        std::size_t v = n;
        while (v > 0) {
            --v;
            std::int64_t hi = v == 0 ? first_hi : upper[v];
            if (l[v] < hi) {
                ++l[v];
                break;
            }
            l[v] = v == 0 ? first_lo : lower[v];
            if (v == 0) return;
        }
    }
}

OptResult finish(const Compiled& c, Collector& col, std::size_t cap) {
    OptResult r;
    r.value = c.value_of(col.best);
    r.count = col.count;
    r.optimizers = std::move(col.opts);
    if (r.count > cap) r.optimizers.resize(1);
    return r;
}

OptResult exhaustive(const BoxProblem& p, const Compiled& c, const BoxOptions& o) {
    check_volume(p, o);
    const std::int64_t lo0 = p.lower[0], hi0 = p.upper[0];
    const std::int64_t span0 = hi0 - lo0 + 1;
    unsigned jobs = std::max(1u, o.jobs);
    if (jobs > 1 && span0 > 1 && p.volume() >= 4096) {
        jobs = static_cast<unsigned>(std::min<std::int64_t>(jobs, span0));
        std::vector<Collector> parts(jobs, Collector{o.optimizer_cap});
        std::vector<std::exception_ptr> errors(jobs);
        std::vector<std::thread> threads;
        for (unsigned t = 0; t < jobs; ++t) {
            std::int64_t a = lo0 + span0 * t / jobs;
            std::int64_t b = lo0 + span0 * (t + 1) / jobs - 1;
            threads.emplace_back([&, t, a, b] {
                try {
                    scan(c, p.lower, p.lower, p.upper, a, b, parts[t]);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : threads) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
        Collector merged{o.optimizer_cap};
        for (auto& part : parts) {
            if (part.best > merged.best) continue;
            if (part.best < merged.best) {
                merged.best = part.best;
                merged.count = 0;
                merged.opts.clear();
            }
            merged.count = sat_add(merged.count, part.count);
            for (auto& l : part.opts)
                if (merged.opts.size() < std::max<std::size_t>(o.optimizer_cap, 1)) merged.opts.push_back(l);
        }
        return finish(c, merged, o.optimizer_cap);
    }
    Collector col{o.optimizer_cap};
    scan(c, p.lower, p.lower, p.upper, lo0, hi0, col);
    return finish(c, col, o.optimizer_cap);
}

// ---------------------------------------------------------------- branch and bound

struct BranchBound {
    const Compiled& c;
    const Cycle& lower;
    const Cycle& upper;
    Collector& col;
    Cycle l;

    // min of alpha x^2 + beta x over integers in [lo, hi]
    static std::int64_t quad_min(std::int64_t alpha, std::int64_t beta, std::int64_t lo, std::int64_t hi) {
        auto f = [&](std::int64_t x) { return alpha * x * x + beta * x; };
        std::int64_t m = std::min(f(lo), f(hi));
        if (alpha > 0) {
            std::int64_t x0 = floor_div(-beta, 2 * alpha);
            for (std::int64_t x : {x0, x0 + 1})
                if (x >= lo && x <= hi) m = std::min(m, f(x));
        }
        return m;
    }

    std::int64_t bound(std::size_t depth) const {
        const auto& g = *c.g;
        std::int64_t twice = 0;
        for (std::size_t v = 0; v < depth; ++v) twice += 2 * c.unary(v, l[v]);
        for (const auto& [u, w] : g.edges()) {
            bool fu = u < depth, fw = w < depth;
            if (fu && fw) {
                twice += 2 * c.edge(l[u], l[w]);
            } else if (!fu && !fw && c.has_chi) {
                std::int64_t m = kInf;
                for (std::int64_t a : {lower[u], upper[u]})
                    for (std::int64_t b : {lower[w], upper[w]}) m = std::min(m, c.edge(a, b));
                twice += 2 * m;
            }
        }
        for (std::size_t v = depth; v < c.n; ++v) {
            std::int64_t alpha = 0, beta = 2 * c.sign * c.lin[v];
            if (c.has_chi) {
                const std::int64_t e = g.euler(v);
                alpha = -c.sign * e;
                beta += c.sign * (e + 2);
                std::int64_t fixed = 0;
                for (std::size_t u : g.neighbors(v))
                    if (u < depth) fixed += l[u];
                beta += -2 * c.sign * fixed;
            }
            twice += quad_min(alpha, beta, lower[v], upper[v]);
        }
        return floor_div(twice, 2);
    }

    void run(std::size_t depth) {
        if (depth == c.n) {
            col.offer(c.smooth(l.coefficients()), l);
            return;
        }
        for (std::int64_t x = lower[depth]; x <= upper[depth]; ++x) {
            l[depth] = x;
            if (col.best != kInf && bound(depth + 1) > col.best) continue;
            run(depth + 1);
        }
        l[depth] = lower[depth];
    }
};

OptResult branch_and_bound(const BoxProblem& p, const Compiled& c, const BoxOptions& o) {
    check_volume(p, o);
    Collector col{o.optimizer_cap};
    BranchBound bb{c, p.lower, p.upper, col, p.lower};
    bb.run(0);
    return finish(c, col, o.optimizer_cap);
}

// ---------------------------------------------------------------- tree DP

struct TreeDP {
    const Compiled& c;
    std::vector<std::int64_t> lo, hi;
    std::vector<std::size_t> order;   // preorder from vertex 0
    std::vector<std::size_t> parent;  // n for the root
    std::vector<std::vector<std::size_t>> children;
    std::vector<std::vector<std::int64_t>> table;
    std::vector<std::vector<std::uint64_t>> counts;

    TreeDP(const Compiled& comp, const Cycle& lower, const Cycle& upper)
        : c(comp), lo(lower.coefficients()), hi(upper.coefficients()) {
        const std::size_t n = c.n;
        parent.assign(n, n);
        children.assign(n, {});
        std::vector<char> seen(n, 0);
        std::vector<std::size_t> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            std::size_t v = stack.back();
            stack.pop_back();
            order.push_back(v);
            auto nb = c.g->neighbors(v);
            for (auto it = nb.rbegin(); it != nb.rend(); ++it)
                if (!seen[*it]) {
                    seen[*it] = 1;
                    parent[*it] = v;
                    children[v].push_back(*it);
                    stack.push_back(*it);
                }
        }
    }

    std::uint64_t work() const {
        std::uint64_t w = 0;
        for (std::size_t v = 0; v < c.n; ++v) {
            std::uint64_t rv = static_cast<std::uint64_t>(hi[v] - lo[v] + 1);
            w = sat_add(w, rv);
            for (std::size_t ch : children[v])
                w = sat_add(w, sat_mul(rv, static_cast<std::uint64_t>(hi[ch] - lo[ch] + 1)));
        }
        return w;
    }

    // Best child value given the parent's value x.
    std::pair<std::int64_t, std::uint64_t> child_best(std::size_t ch, std::int64_t x) const {
        std::int64_t m = kInf;
        std::uint64_t cnt = 0;
        const auto& t = table[ch];
        const auto& cc = counts[ch];
        for (std::int64_t y = lo[ch]; y <= hi[ch]; ++y) {
            std::size_t iy = static_cast<std::size_t>(y - lo[ch]);
            std::int64_t val = t[iy] + c.edge(x, y);
            if (val < m) {
                m = val;
                cnt = cc[iy];
            } else if (val == m) {
                cnt = sat_add(cnt, cc[iy]);
            }
        }
        return {m, cnt};
    }

    std::pair<std::int64_t, std::uint64_t> solve() {
        const std::size_t n = c.n;
        table.assign(n, {});
        counts.assign(n, {});
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            std::size_t v = *it;
            std::size_t r = static_cast<std::size_t>(hi[v] - lo[v] + 1);
            table[v].assign(r, 0);
            counts[v].assign(r, 1);
            for (std::size_t i = 0; i < r; ++i) {
                std::int64_t x = lo[v] + static_cast<std::int64_t>(i);
                std::int64_t t = c.unary(v, x);
                std::uint64_t k = 1;
                for (std::size_t ch : children[v]) {
                    auto [m, cnt] = child_best(ch, x);
                    t += m;
                    k = sat_mul(k, cnt);
                }
                table[v][i] = t;
                counts[v][i] = k;
            }
        }
        std::int64_t best = kInf;
        std::uint64_t cnt = 0;
        for (std::size_t i = 0; i < table[0].size(); ++i) {
            if (table[0][i] < best) {
                best = table[0][i];
                cnt = counts[0][i];
            } else if (table[0][i] == best) {
                cnt = sat_add(cnt, counts[0][i]);
            }
        }
        return {best, cnt};
    }

    void enumerate(std::size_t idx, std::vector<std::int64_t>& cur, std::int64_t root_best,
                   std::vector<std::vector<std::int64_t>>& out) const {
        if (idx == order.size()) {
            out.push_back(cur);
            return;
        }
        std::size_t v = order[idx];
        std::int64_t target;
        std::int64_t px = 0;
        if (parent[v] == c.n) {
            target = root_best;
        } else {
            px = cur[parent[v]];
            target = child_best(v, px).first;
        }
        for (std::int64_t x = lo[v]; x <= hi[v]; ++x) {
            std::int64_t val = table[v][static_cast<std::size_t>(x - lo[v])];
            if (parent[v] != c.n) val += c.edge(px, x);
            if (val != target) continue;
            cur[v] = x;
            enumerate(idx + 1, cur, root_best, out);
        }
    }

    // Minimum over the box with the all-zero point removed (kInf if empty).
    std::int64_t solve_nonzero() {
        const std::size_t n = c.n;
        std::vector<std::vector<std::int64_t>> t0(n), t1(n);
        auto add = [](std::int64_t a, std::int64_t b) { return (a >= kInf || b >= kInf) ? kInf : a + b; };
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            std::size_t v = *it;
            std::size_t r = static_cast<std::size_t>(hi[v] - lo[v] + 1);
            t0[v].assign(r, kInf);
            t1[v].assign(r, kInf);
            for (std::size_t i = 0; i < r; ++i) {
                std::int64_t x = lo[v] + static_cast<std::int64_t>(i);
                std::int64_t base = c.unary(v, x);
                std::int64_t all0 = 0, some1 = kInf;
                for (std::size_t ch : children[v]) {
                    std::int64_t m0 = kInf, m1 = kInf;
                    for (std::int64_t y = lo[ch]; y <= hi[ch]; ++y) {
                        std::size_t iy = static_cast<std::size_t>(y - lo[ch]);
                        std::int64_t e = c.edge(x, y);
                        m0 = std::min(m0, add(t0[ch][iy], e));
                        m1 = std::min(m1, add(t1[ch][iy], e));
                    }
                    std::int64_t n1 = std::min(add(some1, std::min(m0, m1)), add(all0, m1));
                    all0 = add(all0, m0);
                    some1 = n1;
                }
                if (x == 0) {
                    t0[v][i] = add(base, all0);
                    t1[v][i] = add(base, some1);
                } else {
                    t1[v][i] = add(base, std::min(all0, some1));
                }
            }
        }
        return *std::min_element(t1[0].begin(), t1[0].end());
    }
};

void check_dp_work(const TreeDP& dp, const BoxOptions& o) {
    auto w = dp.work();
    if (w > o.volume_cap)
        throw Error(ErrorKind::BoxTooLarge, "dynamic program work " + std::to_string(w) +
                                                " exceeds cap " + std::to_string(o.volume_cap));
}

OptResult tree_dp(const BoxProblem& p, const Compiled& c, const BoxOptions& o) {
    TreeDP dp(c, p.lower, p.upper);
    check_dp_work(dp, o);
    auto [best, cnt] = dp.solve();
    OptResult r;
    r.value = c.value_of(best);
    r.count = cnt;
    if (cnt <= o.optimizer_cap) {
        std::vector<std::vector<std::int64_t>> all;
        std::vector<std::int64_t> cur(c.n, 0);
        dp.enumerate(0, cur, best, all);
        std::sort(all.begin(), all.end());
        for (auto& a : all) r.optimizers.emplace_back(p.graph, std::move(a));
        return r;
    }
    // Lexicographically least optimizer by fixing coordinates one at a time.
    TreeDP fixed(c, p.lower, p.upper);
    for (std::size_t v = 0; v < c.n; ++v) {
        for (std::int64_t x = p.lower[v]; x <= p.upper[v]; ++x) {
            fixed.lo[v] = fixed.hi[v] = x;
            if (fixed.solve().first == best) break;
        }
    }
    r.optimizers.emplace_back(p.graph, fixed.lo);
    return r;
}

OptResult dispatch(const BoxProblem& p, int sign, const BoxOptions& o) {
    Compiled c = compile(p, sign);
    BoxMethod m = o.method;
    if (m == BoxMethod::Auto) m = has_callback(p) ? BoxMethod::Exhaustive : BoxMethod::TreeDP;
    if (has_callback(p) && m != BoxMethod::Exhaustive) m = BoxMethod::Exhaustive;
    switch (m) {
        case BoxMethod::BranchAndBound: return branch_and_bound(p, c, o);
        case BoxMethod::TreeDP: return tree_dp(p, c, o);
        default: return exhaustive(p, c, o);
    }
}

}  // namespace

// ---------------------------------------------------------------- public

BoxProblem::BoxProblem(Cycle lo, Cycle up, Objective obj)
    : graph(lo.graph()), lower(std::move(lo)), upper(std::move(up)), objective(std::move(obj)) {
    if (!graph || !upper.graph()) throw Error(ErrorKind::InvalidArgument, "box bounds are unset");
    require_same_graph(*graph, *upper.graph());
    for (std::size_t v = 0; v < graph->size(); ++v)
        if (lower[v] > upper[v])
            throw Error(ErrorKind::InvalidArgument,
                        "box is empty at vertex '" + graph->id(v) + "' (lower exceeds upper)");
}

std::uint64_t BoxProblem::volume() const { return box_volume(lower, upper); }

Rational BoxProblem::evaluate(const Cycle& l) const {
    Compiled c = compile(*this, 1);
    return c.value_of(c.full(l));
}

std::uint64_t box_volume(const Cycle& lower, const Cycle& upper) {
    std::uint64_t vol = 1;
    for (std::size_t v = 0; v < lower.size(); ++v) {
        if (upper[v] < lower[v]) return 0;
        vol = sat_mul(vol, static_cast<std::uint64_t>(upper[v] - lower[v] + 1));
    }
    return vol;
}

bool for_each_in_box(const Cycle& lower, const Cycle& upper,
                     const std::function<bool(const Cycle&)>& f) {
    require_same_graph(*lower.graph(), *upper.graph());
    const std::size_t n = lower.size();
    for (std::size_t v = 0; v < n; ++v)
        if (lower[v] > upper[v]) return true;
    Cycle l = lower;
    for (;;) {
        if (!f(l)) return false;
        std::size_t v = n;
        for (;;) {
            if (v == 0) return true;
            --v;
            if (l[v] < upper[v]) {
                ++l[v];
                break;
            }
            l[v] = lower[v];
        }
    }
}

OptResult minimize_box(const BoxProblem& problem, const BoxOptions& options) {
    return dispatch(problem, 1, options);
}

OptResult maximize_box(const BoxProblem& problem, const BoxOptions& options) {
    return dispatch(problem, -1, options);
}

std::optional<Cycle> first_at_most(const BoxProblem& p, const Rational& bound, bool exclude_zero,
                                   const BoxOptions& o) {
    Compiled c = compile(p, 1);
    if (has_callback(p) || o.method == BoxMethod::Exhaustive || o.method == BoxMethod::BranchAndBound) {
        check_volume(p, o);
        std::optional<Cycle> found;
        for_each_in_box(p.lower, p.upper, [&](const Cycle& l) {
            if (exclude_zero && l.is_zero()) return true;
            if (c.value_of(c.full(l)) <= bound) {
                found = l;
                return false;
            }
            return true;
        });
        return found;
    }
    TreeDP dp(c, p.lower, p.upper);
    check_dp_work(dp, o);
    auto feasible = [&](TreeDP& d) {
        std::int64_t m = exclude_zero ? d.solve_nonzero() : d.solve().first;
        return m < kInf && c.value_of(m) <= bound;
    };
    if (!feasible(dp)) return std::nullopt;
    for (std::size_t v = 0; v < c.n; ++v) {
        for (std::int64_t x = p.lower[v]; x <= p.upper[v]; ++x) {
            dp.lo[v] = dp.hi[v] = x;
            if (feasible(dp)) break;
        }
    }
    return Cycle(p.graph, dp.lo);
}

std::int64_t h1_O_generic(const Cycle& z, const BoxOptions& options) {
    if (!z.is_effective()) throw Error(ErrorKind::InvalidArgument, "cycle must be effective");
    std::int64_t total = 0;
    for (const auto& part : split_cycle(z)) {
        BoxProblem p(part.reduced_support(), part, Objective::chi_zero(z.graph()));
        auto r = minimize_box(p, options);
        total += 1 - r.value.get_num().get_si();
    }
    return total;
}

std::int64_t h1_pic_generic(const Cycle& z, std::span<const std::int64_t> pairing, const BoxOptions& options) {
    if (!z.is_effective()) throw Error(ErrorKind::InvalidArgument, "cycle must be effective");
    if (pairing.size() != z.size()) throw Error(ErrorKind::GraphMismatch, "pairing vector size");
    if (z.is_zero()) return 0;
    // chi(-l' + l) - chi(-l') = chi(l) + (l', l)
    Objective obj = Objective::chi_zero(z.graph());
    obj.linear.assign(pairing.begin(), pairing.end());
    BoxProblem p(Cycle(z.graph()), z, std::move(obj));
    auto r = minimize_box(p, options);
    return -r.value.get_num().get_si();
}

std::int64_t h1_pic_generic(const Cycle& z, const RatCycle& lprime, const BoxOptions& options) {
    require_same_graph(*z.graph(), *lprime.graph());
    return h1_pic_generic(z, pairing_vector(lprime), options);
}

}  // namespace abeldim
