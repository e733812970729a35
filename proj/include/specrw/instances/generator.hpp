#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "specrw/common/result.hpp"
#include "specrw/eval/evaluator.hpp"

namespace specrw::inst {

struct GridConfig {
    std::vector<long long> n_values;
    std::vector<long long> edge_density_percents;
    std::vector<long long> cpn_values;
    std::vector<long long> colours_multipliers;
    std::uint64_t seed = 0;
};

struct ConfigError {
    std::string message;
};

struct EdgeListError {
    enum class Kind { Parse, SelfLoop };

    Kind kind = Kind::Parse;
    int line = 0;
    std::string message;
};

/// A loaded graph: irreflexive ordered pairs over vertices 0..n-1.
struct EdgeList {
    long long n = 0;
    std::vector<std::pair<long long, long long>> edges; // sorted, unique
};

namespace detail {

// Fisher-Yates with a portable generator; std::shuffle is implementation
// defined, so instances would not reproduce across standard libraries.
template <typename T>
void deterministic_shuffle(std::vector<T>& v, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(v[i - 1], v[j]);
    }
}

inline std::uint64_t point_seed(std::uint64_t seed, std::uint64_t index) {
    return seed ^ (0x9E3779B97F4A7C15ULL * (index + 1));
}

} // namespace detail

/// Samples an edge set with ⌊n²·d/100⌋ ordered pairs (capped at n·(n−1)),
/// uniformly without replacement: the full ordered irreflexive pair list is
/// shuffled with the seeded generator and a prefix taken. In undirected mode
/// the prefix is symmetrized and re-trimmed to the nearest even count (rounded
/// down), keeping both orientations of each kept edge.
inline std::vector<std::pair<long long, long long>>
sample_edges(long long n, long long density_percent, std::uint64_t seed, bool directed = false) {
    std::vector<std::pair<long long, long long>> pairs;
    for (long long u = 0; u < n; ++u)
        for (long long v = 0; v < n; ++v)
            if (u != v) pairs.emplace_back(u, v);
    detail::deterministic_shuffle(pairs, seed);

    long long target = std::min(n * n * density_percent / 100, n * (n - 1));
    std::vector<std::pair<long long, long long>> out;
    if (directed) {
        out.assign(pairs.begin(), pairs.begin() + target);
    } else {
        long long target_even = target - target % 2;
        std::vector<std::pair<long long, long long>> unordered;
        for (const auto& [u, v] : pairs) {
            if (static_cast<long long>(unordered.size()) * 2 >= target_even) break;
            auto key = std::minmax(u, v);
            bool seen = false;
            for (const auto& k : unordered) seen |= (k.first == key.first && k.second == key.second);
            if (!seen) unordered.emplace_back(key.first, key.second);
        }
        for (const auto& [a, b] : unordered) {
            out.emplace_back(a, b);
            out.emplace_back(b, a);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline eval::Value edges_value(const std::vector<std::pair<long long, long long>>& edges) {
    std::vector<eval::Value> tuples;
    tuples.reserve(edges.size());
    for (const auto& [u, v] : edges)
        tuples.push_back(eval::Value::tuple({eval::Value::integer(u), eval::Value::integer(v)}));
    return eval::Value::relation(std::move(tuples));
}

inline eval::Instance make_instance(std::string id, long long n,
                                    const std::vector<std::pair<long long, long long>>& edges,
                                    long long number_colours, long long colours_per_node) {
    eval::Instance inst;
    inst.id = std::move(id);
    inst.bindings = {
        {"n", eval::Value::integer(n)},
        {"edges", edges_value(edges)},
        {"numberColours", eval::Value::integer(number_colours)},
        {"coloursPerNode", eval::Value::integer(colours_per_node)},
    };
    return inst;
}

/// Grid search over (n, density, coloursPerNode, multiplier):
/// numberColours = cpn·m. Deterministic for a fixed seed; every grid point
/// derives its own sub-seed from (seed, point index).
inline Result<std::vector<eval::Instance>, ConfigError> generate_grid(const GridConfig& cfg,
                                                                      bool directed = false) {
    if (cfg.n_values.empty() || cfg.edge_density_percents.empty() || cfg.cpn_values.empty() ||
        cfg.colours_multipliers.empty())
        return ConfigError{"grid lists must be non-empty"};
    for (long long d : cfg.edge_density_percents)
        if (d <= 0 || d > 100) return ConfigError{"densities must be in (0,100]"};
    for (long long c : cfg.cpn_values)
        if (c < 1) return ConfigError{"coloursPerNode must be >= 1"};
    for (long long n : cfg.n_values)
        if (n < 0) return ConfigError{"n must be >= 0"};
    for (long long m : cfg.colours_multipliers)
        if (m < 1) return ConfigError{"colour multipliers must be >= 1"};

    std::vector<eval::Instance> out;
    std::uint64_t index = 0;
    for (long long n : cfg.n_values)
        for (long long d : cfg.edge_density_percents)
            for (long long cpn : cfg.cpn_values)
                for (long long m : cfg.colours_multipliers) {
                    auto edges = sample_edges(n, d, detail::point_seed(cfg.seed, index), directed);
                    std::ostringstream id;
                    id << "n" << n << "_d" << d << "_cpn" << cpn << "_m" << m;
                    out.push_back(make_instance(id.str(), n, edges, cpn * m, cpn));
                    ++index;
                }
    return out;
}

/// Reads an edge-list file: lines of "u v" pairs, optional leading header
/// "n <count>". Self-loops are rejected, duplicates dropped. In undirected
/// mode (the default) both orientations of every edge are stored.
inline Result<EdgeList, EdgeListError> read_edge_list(const std::string& text,
                                                      bool directed = false) {
    EdgeList out;
    std::vector<std::pair<long long, long long>> edges;
    long long max_vertex = -1;
    bool have_header = false;
    int line_no = 0;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue; // blank
        if (first == "#" || first[0] == '#') continue;
        if (first == "n" && !have_header && edges.empty()) {
            if (!(ls >> out.n) || out.n < 0)
                return EdgeListError{EdgeListError::Kind::Parse, line_no, "bad header count"};
            have_header = true;
            continue;
        }
        long long u = 0, v = 0;
        try {
            u = std::stoll(first);
        } catch (...) {
            return EdgeListError{EdgeListError::Kind::Parse, line_no,
                                 "expected an integer, found '" + first + "'"};
        }
        if (!(ls >> v))
            return EdgeListError{EdgeListError::Kind::Parse, line_no, "expected two integers"};
        std::string rest;
        if (ls >> rest)
            return EdgeListError{EdgeListError::Kind::Parse, line_no, "trailing input"};
        if (u < 0 || v < 0)
            return EdgeListError{EdgeListError::Kind::Parse, line_no, "vertex ids must be >= 0"};
        if (u == v)
            return EdgeListError{EdgeListError::Kind::SelfLoop, line_no,
                                 "self-loop " + std::to_string(u)};
        edges.emplace_back(u, v);
        if (!directed) edges.emplace_back(v, u);
        max_vertex = std::max({max_vertex, u, v});
    }
    if (!have_header) out.n = max_vertex + 1;
    if (have_header && max_vertex >= out.n)
        return EdgeListError{EdgeListError::Kind::Parse, 0, "vertex id exceeds header count"};
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    out.edges = std::move(edges);
    return out;
}

inline eval::Instance edge_list_to_param(const EdgeList& g, long long number_colours,
                                         long long colours_per_node, std::string id = "edges") {
    return make_instance(std::move(id), g.n, g.edges, number_colours, colours_per_node);
}

} // namespace specrw::inst
