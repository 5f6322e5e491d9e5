#include "abeldim/tower.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <map>
#include <thread>

namespace abeldim {

TowerSpec build_tower(const Cycle& z, const RatCycle& lprime, std::uint64_t cap) {
    require_same_graph(*z.graph(), *lprime.graph());
    const auto& g = z.graph();
    for (std::size_t v = 0; v < z.size(); ++v)
        if (z[v] < 1) throw Error(ErrorKind::CycleBelowE, "Z = " + z.to_string() + " is not at least E");
    if (!in_neg_lipman(lprime)) throw Error(ErrorKind::NotNegLipman, "l' = " + lprime.to_string() + " is not in -S'");

    TowerSpec spec{g, z, lprime, {}, {}, {}, 1};
    auto p = pairing_vector(lprime);
    const auto& zk = g->canonical_coefficients();
    for (std::size_t v = 0; v < g->size(); ++v) {
        spec.a.push_back(p[v]);
        mpz_class f;
        mpz_fdiv_q(f.get_mpz_t(), zk[v].get_num_mpz_t(), zk[v].get_den_mpz_t());
        spec.m.push_back(f > 0 ? f.get_si() : 0);
    }
    for (std::size_t v = 0; v < g->size(); ++v)
        for (std::int64_t k = 1; k <= spec.a[v]; ++k) {
            spec.chains.push_back({v, k, spec.m[v]});
            auto factor = static_cast<std::uint64_t>(spec.m[v] + 1);
            if (spec.size > cap / factor || spec.size * factor > cap)
                throw Error(ErrorKind::TowerTooLarge, "the tower has more than " + std::to_string(cap) + " nodes");
            spec.size *= factor;
        }
    return spec;
}

TowerGraph tower_graph(const TowerSpec& spec, const std::vector<std::int64_t>& s) {
    const auto& g = spec.graph;
    if (s.size() != spec.chains.size()) throw Error(ErrorKind::InvalidArgument, "s-tuple has the wrong length");
    std::vector<VertexDecl> decls;
    for (std::size_t v = 0; v < g->size(); ++v) decls.push_back({g->id(v), g->euler(v)});
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& [u, w] : g->edges()) edges.emplace_back(g->id(u), g->id(w));
    std::vector<std::pair<std::string, std::int64_t>> coeff;
    std::vector<std::string> tips;

    std::string sep = "~";
    for (;;) {
        bool clash = false;
        for (const auto& id : g->ids()) clash = clash || id.find(sep) != std::string::npos;
        if (!clash) break;
        sep += "~";
    }
    for (std::size_t c = 0; c < s.size(); ++c) {
        const auto& ch = spec.chains[c];
        if (s[c] < 0 || s[c] > ch.length) throw Error(ErrorKind::InvalidArgument, "s-tuple entry out of range");
        std::string prev = g->id(ch.vertex);
        if (s[c] == 0) {
            tips.push_back(prev);
            continue;
        }
        decls[ch.vertex].euler -= 1;
        for (std::int64_t t = 1; t <= s[c]; ++t) {
            std::string id = g->id(ch.vertex) + sep + std::to_string(ch.k) + "." + std::to_string(t);
            decls.push_back({id, t == s[c] ? -1 : -2});
            edges.emplace_back(prev, id);
            coeff.emplace_back(id, spec.z[ch.vertex]);
            prev = id;
        }
        tips.push_back(prev);
    }
    TowerGraph out{PlumbingGraph::create_trusted(std::move(decls), std::move(edges)), Cycle(g), {}};
    out.z = Cycle(out.graph);
    for (std::size_t v = 0; v < g->size(); ++v) out.z[out.graph->index_of(g->id(v))] = spec.z[v];
    for (const auto& [id, x] : coeff) out.z[out.graph->index_of(id)] = x;
    for (const auto& id : tips) out.tips.push_back(out.graph->index_of(id));
    std::sort(out.tips.begin(), out.tips.end());
    out.tips.erase(std::unique(out.tips.begin(), out.tips.end()), out.tips.end());
    return out;
}

TowerProvider generic_tower_provider(const BoxOptions& options) {
    return [options](const GraphPtr&) { return memoized(generic_h1_provider(options)); };
}

TowerProvider relgen_tower_provider(std::vector<std::string> base_ids, OraclePtr oracle, RelativeOptions options) {
    return [base_ids = std::move(base_ids), oracle, options](const GraphPtr& g) {
        std::vector<std::size_t> v1;
        for (const auto& id : base_ids) v1.push_back(g->index_of(id));
        auto ctx = std::make_shared<RelativeContext>(g, v1, oracle, options);
        return memoized([ctx](const Cycle& z) { return h1_O_relgen(*ctx, z); });
    };
}

namespace {

std::string tuple_text(const std::vector<std::int64_t>& s) {
    std::string out = "(";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(s[i]);
    }
    return out + ")";
}

}  // namespace

TowerResult d_recursion(const TowerSpec& spec, const TowerProvider& provider, unsigned jobs) {
    const std::size_t c = spec.chains.size();
    TowerResult res;
    // Mixed radix, last chain fastest.
    std::vector<std::int64_t> s(c, 0);
    for (std::uint64_t i = 0; i < spec.size; ++i) {
        res.nodes.push_back({s, 0, 0});
        for (std::size_t j = c; j-- > 0;) {
            if (s[j] < spec.chains[j].length) {
                ++s[j];
                break;
            }
            s[j] = 0;
        }
    }
    std::vector<std::uint64_t> stride(c, 1);
    for (std::size_t j = c; j-- > 1;) stride[j - 1] = stride[j] * static_cast<std::uint64_t>(spec.chains[j].length + 1);

    auto h1_base = provider(spec.graph)(spec.z);
    std::vector<std::string> failures(res.nodes.size());
    auto compute_e = [&](std::size_t idx) {
        try {
            auto tg = tower_graph(spec, res.nodes[idx].s);
            auto h1 = provider(tg.graph);
            auto hz = h1(tg.z);
            if (hz != h1_base) {
                failures[idx] = "h1(O_Zs) = " + std::to_string(hz) + " differs from h1(O_Z) = " +
                                std::to_string(h1_base) + " at s = " + tuple_text(res.nodes[idx].s);
                return;
            }
            res.nodes[idx].e = e_support(tg.z, tg.tips, h1);
        } catch (const std::exception& e) {
            failures[idx] = e.what();
        }
    };
    unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(res.nodes.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < res.nodes.size(); ++i) compute_e(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i; (i = next++) < res.nodes.size();) compute_e(i);
            });
        for (auto& t : pool) t.join();
    }
    for (const auto& f : failures)
        if (!f.empty()) throw Error(ErrorKind::ConsistencyError, f);

    auto children = [&](std::size_t idx) {
        std::vector<std::size_t> out;
        for (std::size_t j = 0; j < c; ++j)
            if (res.nodes[idx].s[j] < spec.chains[j].length) out.push_back(idx + stride[j]);
        return out;
    };

    for (std::size_t idx = res.nodes.size(); idx-- > 0;) {
        auto& node = res.nodes[idx];
        auto ch = children(idx);
        if (ch.empty()) {
            node.d = node.e;
            continue;
        }
        std::int64_t lo = std::numeric_limits<std::int64_t>::max(), hi = std::numeric_limits<std::int64_t>::min();
        for (auto k : ch) {
            lo = std::min(lo, res.nodes[k].d);
            hi = std::max(hi, res.nodes[k].d);
        }
        if (lo != hi) node.d = hi;
        else node.d = lo == node.e ? lo : lo + 1;
    }

    auto fail = [&](const std::string& what, std::size_t idx) {
        throw Error(ErrorKind::ConsistencyError, what + " at s = " + tuple_text(res.nodes[idx].s));
    };
    for (std::size_t idx = 0; idx < res.nodes.size(); ++idx) {
        const auto& node = res.nodes[idx];
        if (node.d > node.e) fail("d exceeds e", idx);
        for (auto k : children(idx)) {
            auto diff = node.d - res.nodes[k].d;
            if (diff != 0 && diff != 1) fail("d drops by " + std::to_string(diff) + " along an edge", idx);
            if (node.e < res.nodes[k].e) fail("e increases along an edge", idx);
        }
    }
    if (res.nodes.back().e != 0) fail("e does not vanish", res.nodes.size() - 1);

    std::size_t at = 0;
    res.path.push_back(at);
    for (;;) {
        std::optional<std::size_t> step;
        for (auto k : children(at))
            if (res.nodes[k].d + 1 == res.nodes[at].d) {
                step = k;
                break;
            }
        if (!step) break;
        at = *step;
        res.path.push_back(at);
    }
    if (res.nodes[at].d != res.nodes[at].e) fail("descent path ends with d != e", at);
    res.d0 = res.nodes.front().d;
    return res;
}

std::string tower_table_text(const TowerSpec& spec, const TowerResult& result) {
    std::string out = "# tower table\n";
    out += "chains";
    for (const auto& ch : spec.chains)
        out += " " + spec.graph->id(ch.vertex) + "/" + std::to_string(ch.k) + ":" + std::to_string(ch.length);
    out += "\nnodes " + std::to_string(result.nodes.size()) + "\n";
    for (const auto& n : result.nodes)
        out += "s " + tuple_text(n.s) + " e " + std::to_string(n.e) + " d " + std::to_string(n.d) + "\n";
    out += "path";
    for (auto i : result.path) out += " " + tuple_text(result.nodes[i].s);
    out += "\nd0 " + std::to_string(result.d0) + "\n";
    return out;
}

}  // namespace abeldim
