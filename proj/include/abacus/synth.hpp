#pragma once

// Synthetic multidimensional networks with planted groups of shared memberships.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "abacus/errors.hpp"
#include "abacus/graph.hpp"

namespace abacus {

struct PlantedGroup {
    std::vector<node_id> nodes;
    std::vector<dim_id> dimensions;
    std::vector<double> p_intra;  // per entry of dimensions, or a single value for all
};

/// Disjoint groups drawn at generation time.
struct RandomGroups {
    std::size_t count = 0;
    std::size_t size = 0;
    std::size_t dimensions = 1;
    double p_intra = 1.0;
};

struct SynthSpec {
    std::size_t nodes = 0;
    std::size_t dimensions = 1;
    std::vector<PlantedGroup> groups;
    RandomGroups random_groups;
    double p_background = 0.0;
    double weight_min = 1.0;
    double weight_max = 10.0;
    std::uint64_t seed = 42;

    void validate() const {
        auto prob = [](double p, const char* what) {
            if (!(p >= 0.0 && p <= 1.0)) throw ValidationError(std::string(what) + " must lie in [0, 1]");
        };
        prob(p_background, "p_background");
        prob(random_groups.p_intra, "random_groups.p_intra");
        if (!(weight_min > 0.0) || !(weight_max >= weight_min) || !std::isfinite(weight_max))
            throw ValidationError("weights need 0 < weight_min <= weight_max");
        for (const auto& g : groups) {
            for (auto n : g.nodes) {
                if (n >= nodes) throw ValidationError("planted group references node " + std::to_string(n));
            }
            for (auto d : g.dimensions) {
                if (d >= dimensions) throw ValidationError("planted group references dimension " + std::to_string(d));
            }
            if (g.p_intra.size() != 1 && g.p_intra.size() != g.dimensions.size())
                throw ValidationError("p_intra needs one value or one per group dimension");
            for (auto p : g.p_intra) prob(p, "p_intra");
        }
        if (random_groups.count > 0) {
            if (random_groups.count * random_groups.size > nodes) throw ValidationError("random groups need more nodes than exist");
            if (random_groups.dimensions == 0 || random_groups.dimensions > dimensions)
                throw ValidationError("random_groups.dimensions out of range");
        }
    }
};

struct SynthResult {
    MultidimNetwork network;
    std::vector<PlantedGroup> truth;  // explicit groups followed by the random ones
};

namespace detail {

/// Calls emit(i, j), i > j, for each pair of 0..m-1 kept independently with probability p.
/// Uses geometric skips, so the cost follows the number of kept pairs.
template <class Rng, class Emit>
void sample_pairs(std::size_t m, double p, Rng& rng, Emit emit) {
    if (m < 2 || p <= 0.0) return;
    if (p >= 1.0) {
        for (std::size_t i = 1; i < m; ++i)
            for (std::size_t j = 0; j < i; ++j) emit(i, j);
        return;
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double log_q = std::log1p(-p);
    std::size_t v = 1;
    std::int64_t w = -1;
    while (v < m) {
        const double r = unit(rng);
        w += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-r) / log_q));
        while (w >= static_cast<std::int64_t>(v) && v < m) {
            w -= static_cast<std::int64_t>(v);
            ++v;
        }
        if (v < m) emit(v, static_cast<std::size_t>(w));
    }
}

}  // namespace detail

/// Samples a network from spec: planted groups first, then background edges in every
/// dimension. A pair hit twice in one dimension keeps its first weight.
inline SynthResult generate(const SynthSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> weight(spec.weight_min, spec.weight_max);
    auto draw_weight = [&] { return spec.weight_min == spec.weight_max ? spec.weight_min : weight(rng); };

    SynthResult out;
    out.truth = spec.groups;
    if (spec.random_groups.count > 0) {
        std::vector<node_id> pool(spec.nodes);
        std::iota(pool.begin(), pool.end(), 0u);
        std::shuffle(pool.begin(), pool.end(), rng);
        std::vector<dim_id> dims(spec.dimensions);
        std::iota(dims.begin(), dims.end(), 0u);
        for (std::size_t g = 0; g < spec.random_groups.count; ++g) {
            PlantedGroup group;
            group.nodes.assign(pool.begin() + static_cast<std::ptrdiff_t>(g * spec.random_groups.size),
                               pool.begin() + static_cast<std::ptrdiff_t>((g + 1) * spec.random_groups.size));
            std::sort(group.nodes.begin(), group.nodes.end());
            std::shuffle(dims.begin(), dims.end(), rng);
            group.dimensions.assign(dims.begin(), dims.begin() + static_cast<std::ptrdiff_t>(spec.random_groups.dimensions));
            std::sort(group.dimensions.begin(), group.dimensions.end());
            group.p_intra = {spec.random_groups.p_intra};
            out.truth.push_back(std::move(group));
        }
    }

    NetworkBuilder builder;
    for (std::size_t n = 0; n < spec.nodes; ++n) builder.add_node("n" + std::to_string(n));
    for (std::size_t d = 0; d < spec.dimensions; ++d) builder.add_dimension("d" + std::to_string(d));

    auto add = [&](node_id u, node_id v, dim_id d) {
        if (u == v || builder.contains(u, v, d)) return;
        builder.add_edge(u, v, d, draw_weight());
    };
    for (const auto& g : out.truth) {
        for (std::size_t k = 0; k < g.dimensions.size(); ++k) {
            const double p = g.p_intra.size() == 1 ? g.p_intra[0] : g.p_intra[k];
            detail::sample_pairs(g.nodes.size(), p, rng, [&](std::size_t i, std::size_t j) { add(g.nodes[i], g.nodes[j], g.dimensions[k]); });
        }
    }
    for (dim_id d = 0; d < spec.dimensions; ++d) {
        detail::sample_pairs(spec.nodes, spec.p_background, rng,
                             [&](std::size_t i, std::size_t j) { add(static_cast<node_id>(i), static_cast<node_id>(j), d); });
    }
    out.network = std::move(builder).build();
    return out;
}

// ---------------------------------------------------------------------------
// JSON spec and ground-truth output.
// ---------------------------------------------------------------------------

inline SynthSpec synth_spec_from_json(const nlohmann::json& j) {
    SynthSpec spec;
    try {
        spec.nodes = j.at("nodes").get<std::size_t>();
        spec.dimensions = j.value("dimensions", std::size_t{1});
        spec.p_background = j.value("p_background", 0.0);
        spec.seed = j.value("seed", std::uint64_t{42});
        if (j.contains("weight")) {
            spec.weight_min = j["weight"].value("min", 1.0);
            spec.weight_max = j["weight"].value("max", 10.0);
        }
        for (const auto& g : j.value("groups", nlohmann::json::array())) {
            PlantedGroup group;
            group.nodes = g.at("nodes").get<std::vector<node_id>>();
            group.dimensions = g.at("dimensions").get<std::vector<dim_id>>();
            const auto& p = g.at("p_intra");
            group.p_intra = p.is_array() ? p.get<std::vector<double>>() : std::vector<double>{p.get<double>()};
            spec.groups.push_back(std::move(group));
        }
        if (j.contains("random_groups")) {
            const auto& r = j["random_groups"];
            spec.random_groups.count = r.at("count").get<std::size_t>();
            spec.random_groups.size = r.at("size").get<std::size_t>();
            spec.random_groups.dimensions = r.value("dimensions", std::size_t{1});
            spec.random_groups.p_intra = r.value("p_intra", 1.0);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("synth spec: ") + e.what(), 0);
    }
    spec.validate();
    return spec;
}

inline SynthSpec read_synth_spec(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("synth spec: ") + e.what(), 0);
    }
    return synth_spec_from_json(j);
}

/// One line per planted group: `dimensions<TAB>nodes`, names space-separated.
inline void write_truth(std::ostream& out, const MultidimNetwork& net, const std::vector<PlantedGroup>& truth) {
    out << "# dimensions\tnodes\n";
    for (const auto& g : truth) {
        for (std::size_t k = 0; k < g.dimensions.size(); ++k) out << (k ? " " : "") << net.dimensions().name(g.dimensions[k]);
        out << '\t';
        for (std::size_t k = 0; k < g.nodes.size(); ++k) out << (k ? " " : "") << net.nodes().name(g.nodes[k]);
        out << '\n';
    }
}

}  // namespace abacus
