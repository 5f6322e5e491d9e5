#include "abeldim/random.hpp"

#include <algorithm>

#include "abeldim/box_opt.hpp"

namespace abeldim {

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
    if (hi <= lo) return lo;
    const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
    if (range == 0) return lo + static_cast<std::int64_t>(next());
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t x;
    do {
        x = next();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % range);
}

namespace {

std::vector<std::pair<std::size_t, std::size_t>> random_tree(Rng& rng, std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    if (n < 2) return edges;
    if (n == 2) return {{0, 1}};
    // Pruefer decoding gives a uniform labelled tree.
    std::vector<std::size_t> code(n - 2);
    for (auto& c : code) c = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(n) - 1));
    std::vector<std::size_t> degree(n, 1);
    for (auto c : code) ++degree[c];
    for (auto c : code) {
        std::size_t leaf = 0;
        while (degree[leaf] != 1) ++leaf;
        edges.emplace_back(leaf, c);
        --degree[leaf];
        --degree[c];
    }
    std::size_t u = n, w = n;
    for (std::size_t v = 0; v < n; ++v)
        if (degree[v] == 1) (u == n ? u : w) = v;
    edges.emplace_back(u, w);
    return edges;
}

std::string vertex_name(std::size_t i, std::size_t n) {
    std::string num = std::to_string(i + 1);
    std::string width = std::to_string(n);
    return "v" + std::string(width.size() - num.size(), '0') + num;
}

}  // namespace

GraphPtr random_graph(Rng& rng, std::size_t n, const RandomGraphOptions& options) {
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "random graph needs at least one vertex");
    auto tree = random_tree(rng, n);
    std::vector<std::size_t> deg(n, 0);
    for (auto [u, w] : tree) {
        ++deg[u];
        ++deg[w];
    }
    std::vector<std::pair<std::string, std::string>> edges;
    for (auto [u, w] : tree) edges.emplace_back(vertex_name(u, n), vertex_name(w, n));

    static const std::int64_t kWide[] = {-1, -2, -2, -2, -3};
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::vector<VertexDecl> vs;
        for (std::size_t v = 0; v < n; ++v) {
            std::int64_t e;
            if (options.mode == EulerMode::Wide && attempt < 199) {
                e = kWide[rng.uniform(0, 4)];
            } else {
                std::int64_t top = std::min<std::int64_t>(-static_cast<std::int64_t>(deg[v]) - 1, options.max_euler);
                e = rng.uniform(top - options.spread, top);
            }
            vs.push_back({vertex_name(v, n), e});
        }
        try {
            return PlumbingGraph::create(std::move(vs), edges);
        } catch (const Error& err) {
            if (err.kind() != ErrorKind::NotNegativeDefinite) throw;
        }
    }
    throw Error(ErrorKind::ConsistencyError, "random graph generation failed");
}

GraphPtr random_graph(std::uint64_t seed, std::size_t n, const RandomGraphOptions& options) {
    Rng rng(seed);
    return random_graph(rng, n, options);
}

RandomInstance random_instance(Rng& rng, const InstanceOptions& options) {
    for (std::uint64_t round = 0;; ++round) {
        std::size_t n = static_cast<std::size_t>(rng.uniform(static_cast<std::int64_t>(options.min_vertices),
                                                             static_cast<std::int64_t>(options.max_vertices)));
        RandomGraphOptions go;
        go.mode = (options.mixed_modes && rng.coin()) ? EulerMode::Wide : EulerMode::Dominant;
        GraphPtr g = random_graph(rng, n, go);
        Cycle z = minimal_cycle(g);
        for (std::size_t v = 0; v < n; ++v) z[v] += rng.uniform(0, options.z_extra);
        std::vector<std::int64_t> a(n);
        for (auto& x : a) x = rng.uniform(0, options.max_a);
        if (box_volume(Cycle(g), z) > options.volume_cap) continue;
        return RandomInstance{g, z, a};
    }
}

}  // namespace abeldim
