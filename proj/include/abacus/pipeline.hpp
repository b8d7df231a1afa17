#pragma once

// The end-to-end pipeline: split, per-dimension community discovery, membership
// transactions, closed-itemset mining, and the measures computed on the result.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <numeric>
#include <optional>
#include <span>
#include <thread>
#include <unordered_set>
#include <vector>

#include "abacus/community.hpp"
#include "abacus/errors.hpp"
#include "abacus/fcim.hpp"
#include "abacus/graph.hpp"
#include "abacus/membership.hpp"

namespace abacus {

/// A frequent closed itemset decoded back to the network.
struct MultidimCommunity {
    std::vector<Membership> memberships;  // sorted
    std::vector<node_id> nodes;           // sorted
    std::size_t support = 0;              // |nodes|
    std::size_t size = 0;                 // distinct dimensions in memberships
    std::optional<double> mcd;            // undefined below two nodes
    std::size_t components = 0;

    bool unconnected() const noexcept { return components > 1; }

    std::vector<dim_id> dimensions() const {
        std::vector<dim_id> out;
        for (const auto& m : memberships) {
            if (out.empty() || out.back() != m.dimension) out.push_back(m.dimension);
        }
        return out;
    }
};

enum class DiscovererKind { label_propagation, connected_components, fixed };

struct RunConfig {
    std::size_t min_support = 2;
    DiscovererKind discoverer = DiscovererKind::label_propagation;
    std::uint64_t seed = 42;
    std::size_t max_iters = 100;
    const AssignmentTable* table = nullptr;  // required for DiscovererKind::fixed
    unsigned threads = 1;                    // workers for the per-dimension stage
};

inline AnyDiscoverer make_discoverer(const RunConfig& cfg) {
    switch (cfg.discoverer) {
        case DiscovererKind::label_propagation:
            return LabelPropagation{cfg.seed, cfg.max_iters};
        case DiscovererKind::connected_components:
            return ConnectedComponents{};
        case DiscovererKind::fixed:
            if (!cfg.table) throw ValidationError("fixed discoverer needs an assignment table");
            return FixedAssignment{cfg.table};
    }
    throw ValidationError("unknown discoverer");
}

inline void validate(const RunConfig& cfg) {
    if (cfg.min_support == 0) throw ValidationError("minimum support must be >= 1");
    if (cfg.discoverer == DiscovererKind::label_propagation && cfg.max_iters == 0)
        throw ValidationError("max_iters must be >= 1");
    if (cfg.discoverer == DiscovererKind::fixed && !cfg.table) throw ValidationError("fixed discoverer needs an assignment table");
}

// ---------------------------------------------------------------------------
// Community measures.
// ---------------------------------------------------------------------------

/// Edges among c.nodes within c's own dimensions over size(c) * C(|nodes|, 2).
inline double compute_mcd(const MultidimNetwork& net, std::span<const node_id> nodes, std::span<const dim_id> dims) {
    std::vector<node_id> members(nodes.begin(), nodes.end());
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    std::vector<dim_id> ds(dims.begin(), dims.end());
    std::sort(ds.begin(), ds.end());
    ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
    if (members.size() < 2) throw UndefinedMeasureError("density needs at least two nodes");
    if (ds.empty()) throw UndefinedMeasureError("density needs at least one dimension");
    const double n = static_cast<double>(members.size());
    const double possible = static_cast<double>(ds.size()) * n * (n - 1.0) / 2.0;
    return static_cast<double>(edges_among(net, members, ds)) / possible;
}

inline double compute_mcd(const MultidimNetwork& net, const MultidimCommunity& c) {
    const auto dims = c.dimensions();
    return compute_mcd(net, c.nodes, dims);
}

/// Connected components of the subgraph induced by `nodes` over edges in `dims`.
inline std::size_t count_components(const MultidimNetwork& net, std::span<const node_id> nodes, std::span<const dim_id> dims) {
    const auto members = detail::normalize_ids(nodes, [&](node_id n) { net.check_node(n); });
    const auto wanted = detail::normalize_ids(dims, [&](dim_id d) { net.check_dim(d); });
    if (members.empty()) throw ValidationError("component count of an empty node set");

    std::vector<std::uint32_t> parent(members.size());
    std::iota(parent.begin(), parent.end(), 0u);
    auto find = [&](std::uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::size_t components = members.size();
    for (std::uint32_t i = 0; i < members.size(); ++i) {
        for (const Incidence& inc : net.neighbors(members[i])) {
            if (inc.neighbor <= members[i]) continue;
            if (!std::binary_search(wanted.begin(), wanted.end(), inc.dim)) continue;
            auto it = std::lower_bound(members.begin(), members.end(), inc.neighbor);
            if (it == members.end() || *it != inc.neighbor) continue;
            auto a = find(i);
            auto b = find(static_cast<std::uint32_t>(it - members.begin()));
            if (a != b) {
                parent[a] = b;
                --components;
            }
        }
    }
    return components;
}

inline std::size_t count_components(const MultidimNetwork& net, const MultidimCommunity& c) {
    const auto dims = c.dimensions();
    return count_components(net, c.nodes, dims);
}

/// Decodes a pattern and fills in every measure.
inline MultidimCommunity assemble(const MultidimNetwork& net, const ItemCatalog& catalog, const ClosedPattern& p) {
    MultidimCommunity c;
    c.memberships = decode(catalog, p.itemset);
    std::sort(c.memberships.begin(), c.memberships.end());
    c.nodes = p.tidset;
    c.support = c.nodes.size();
    const auto dims = c.dimensions();
    c.size = dims.size();
    if (c.nodes.size() >= 2) c.mcd = compute_mcd(net, c.nodes, dims);
    c.components = count_components(net, c.nodes, dims);
    return c;
}

// ---------------------------------------------------------------------------
// The pipeline.
// ---------------------------------------------------------------------------

struct RunResult {
    std::vector<CommunityAssignment> assignments;  // one per non-empty slice, by dimension id
    MembershipTable memberships;
    std::vector<ClosedPattern> patterns;           // canonical order
    std::vector<MultidimCommunity> communities;    // communities[i] decodes patterns[i]
};

/// Runs `discover` on every slice, using up to `threads` workers. Output is ordered by
/// dimension id regardless of scheduling.
template <class Discoverer>
std::vector<CommunityAssignment> discover_all(std::span<const MonoNetwork> slices, const Discoverer& discover, unsigned threads = 1) {
    std::vector<CommunityAssignment> out(slices.size());
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(slices.size())));
    if (workers <= 1) {
        for (std::size_t i = 0; i < slices.size(); ++i) out[i] = discover(slices[i]);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < slices.size();) {
                try {
                    out[i] = discover(slices[i]);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return out;
}

template <class Discoverer>
RunResult run_detailed(const MultidimNetwork& net, const Discoverer& discover, std::size_t min_support, unsigned threads = 1) {
    if (min_support == 0) throw ValidationError("minimum support must be >= 1");
    RunResult r;
    const auto slices = split(net);
    r.assignments = discover_all(std::span<const MonoNetwork>(slices), discover, threads);
    r.memberships = build_memberships(r.assignments, net.num_nodes());
    r.patterns = mine_closed(r.memberships.db, min_support);
    r.communities.reserve(r.patterns.size());
    for (const auto& p : r.patterns) r.communities.push_back(assemble(net, r.memberships.catalog, p));
    return r;
}

inline RunResult run_detailed(const MultidimNetwork& net, const RunConfig& cfg) {
    validate(cfg);
    return run_detailed(net, make_discoverer(cfg), cfg.min_support, cfg.threads);
}

/// Multidimensional communities of net: the decoded frequent closed membership itemsets.
inline std::vector<MultidimCommunity> run(const MultidimNetwork& net, const RunConfig& cfg) {
    return run_detailed(net, cfg).communities;
}

template <CommunityDiscoverer Discoverer>
std::vector<MultidimCommunity> run(const MultidimNetwork& net, const Discoverer& discover, std::size_t min_support = 2) {
    return run_detailed(net, discover, min_support).communities;
}

// ---------------------------------------------------------------------------
// Lattice.
// ---------------------------------------------------------------------------

/// Hasse diagram of itemset inclusion. An edge (p, q) means q's itemset strictly contains
/// p's and no vertex lies strictly between them.
struct Lattice {
    std::size_t num_vertices = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // sorted
};

/// Itemsets must be sorted and duplicate-free.
template <class Key>
Lattice build_lattice(std::span<const std::vector<Key>> itemsets) {
    Lattice lat;
    lat.num_vertices = itemsets.size();

    std::vector<Key> universe;
    for (const auto& s : itemsets) universe.insert(universe.end(), s.begin(), s.end());
    std::sort(universe.begin(), universe.end());
    universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
    auto code = [&](const Key& k) { return static_cast<std::size_t>(std::lower_bound(universe.begin(), universe.end(), k) - universe.begin()); };

    std::vector<std::vector<std::size_t>> containing(universe.size());
    for (std::size_t i = 0; i < itemsets.size(); ++i) {
        for (const auto& k : itemsets[i]) containing[code(k)].push_back(i);
    }

    auto subset = [&](std::size_t a, std::size_t b) {
        return std::includes(itemsets[b].begin(), itemsets[b].end(), itemsets[a].begin(), itemsets[a].end());
    };

    std::vector<std::size_t> hits(itemsets.size(), 0);
    std::vector<std::size_t> touched;
    std::vector<std::size_t> below;
    for (std::size_t q = 0; q < itemsets.size(); ++q) {
        touched.clear();
        for (const auto& k : itemsets[q]) {
            for (auto p : containing[code(k)]) {
                if (hits[p]++ == 0) touched.push_back(p);
            }
        }
        below.clear();
        for (auto p : touched) {
            if (p != q && hits[p] == itemsets[p].size() && itemsets[p].size() < itemsets[q].size()) below.push_back(p);
            hits[p] = 0;
        }
        // Covers of q are the maximal elements of `below`.
        std::sort(below.begin(), below.end(), [&](std::size_t a, std::size_t b) { return itemsets[a].size() > itemsets[b].size(); });
        std::vector<std::size_t> covers;
        for (auto p : below) {
            bool dominated = false;
            for (auto r : covers) {
                if (itemsets[r].size() > itemsets[p].size() && subset(p, r)) {
                    dominated = true;
                    break;
                }
            }
            if (!dominated) covers.push_back(p);
        }
        for (auto p : covers) lat.edges.emplace_back(p, q);
    }
    std::sort(lat.edges.begin(), lat.edges.end());
    return lat;
}

inline Lattice build_lattice(std::span<const ClosedPattern> patterns) {
    std::vector<Itemset> sets;
    sets.reserve(patterns.size());
    for (const auto& p : patterns) sets.push_back(p.itemset);
    return build_lattice(std::span<const Itemset>(sets));
}

inline Lattice build_lattice(std::span<const MultidimCommunity> communities) {
    std::vector<std::vector<Membership>> sets;
    sets.reserve(communities.size());
    for (const auto& c : communities) sets.push_back(c.memberships);
    return build_lattice(std::span<const std::vector<Membership>>(sets));
}

// ---------------------------------------------------------------------------
// Filtering.
// ---------------------------------------------------------------------------

/// Optional lower and upper bound, each inclusive unless marked strict.
template <class T>
struct Range {
    std::optional<T> lo;
    std::optional<T> hi;
    bool lo_strict = false;
    bool hi_strict = false;

    bool bounded() const noexcept { return lo || hi; }

    bool contains(T v) const {
        if (lo && (lo_strict ? !(v > *lo) : !(v >= *lo))) return false;
        if (hi && (hi_strict ? !(v < *hi) : !(v <= *hi))) return false;
        return true;
    }

    void check(const char* what) const {
        if (lo && hi && (*lo > *hi || (*lo == *hi && (lo_strict || hi_strict))))
            throw ValidationError(std::string("inconsistent bounds for ") + what);
    }
};

struct FilterBounds {
    Range<std::size_t> support;
    Range<std::size_t> size;
    Range<double> mcd;  // communities with undefined density fail any bound
};

/// Order-preserving selection of the communities meeting every given bound.
inline std::vector<MultidimCommunity> filter(std::span<const MultidimCommunity> communities, const FilterBounds& bounds) {
    bounds.support.check("support");
    bounds.size.check("size");
    bounds.mcd.check("mcd");
    std::vector<MultidimCommunity> out;
    for (const auto& c : communities) {
        if (!bounds.support.contains(c.support)) continue;
        if (!bounds.size.contains(c.size)) continue;
        if (bounds.mcd.bounded() && (!c.mcd || !bounds.mcd.contains(*c.mcd))) continue;
        out.push_back(c);
    }
    return out;
}

inline std::vector<MultidimCommunity> filter(std::span<const MultidimCommunity> communities, std::optional<std::size_t> min_support,
                                             std::optional<std::size_t> min_size, std::optional<std::size_t> max_size,
                                             std::optional<double> min_mcd, std::optional<double> max_mcd) {
    FilterBounds b;
    b.support.lo = min_support;
    b.size.lo = min_size;
    b.size.hi = max_size;
    b.mcd.lo = min_mcd;
    b.mcd.hi = max_mcd;
    return filter(communities, b);
}

// ---------------------------------------------------------------------------
// Comparison of community sets by exact node-set matching.
// ---------------------------------------------------------------------------

struct SetComparison {
    std::size_t both = 0;
    std::size_t only_a = 0;
    std::size_t only_b = 0;

    std::size_t union_size() const noexcept { return both + only_a + only_b; }
    double both_ratio() const { return ratio(both); }
    double only_a_ratio() const { return ratio(only_a); }
    double only_b_ratio() const { return ratio(only_b); }

private:
    double ratio(std::size_t k) const {
        if (union_size() == 0) throw UndefinedMeasureError("comparison of two empty community sets");
        return static_cast<double>(k) / static_cast<double>(union_size());
    }
};

namespace detail {

template <class T>
struct SequenceHash {
    std::size_t operator()(const std::vector<T>& v) const noexcept {
        std::size_t h = 0x9E3779B97F4A7C15ull ^ v.size();
        for (const auto& x : v) h ^= std::hash<T>{}(x) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
        return h;
    }
};

template <class T>
using NodeSetIndex = std::unordered_set<std::vector<T>, SequenceHash<T>>;

template <class T>
NodeSetIndex<T> canonical_sets(std::span<const std::vector<T>> sets) {
    NodeSetIndex<T> out;
    for (auto s : sets) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        out.insert(std::move(s));
    }
    return out;
}

}  // namespace detail

/// Counts node sets in both, only A, only B (each side deduplicated as a set of sets).
template <class T>
SetComparison compare_node_sets(std::span<const std::vector<T>> a, std::span<const std::vector<T>> b) {
    const auto sa = detail::canonical_sets(a);
    const auto sb = detail::canonical_sets(b);
    if (sa.empty() && sb.empty()) throw UndefinedMeasureError("comparison of two empty community sets");
    SetComparison r;
    for (const auto& s : sa) (sb.count(s) ? r.both : r.only_a)++;
    for (const auto& s : sb) {
        if (!sa.count(s)) ++r.only_b;
    }
    return r;
}

inline std::vector<std::vector<node_id>> node_sets(std::span<const MultidimCommunity> communities) {
    std::vector<std::vector<node_id>> out;
    out.reserve(communities.size());
    for (const auto& c : communities) out.push_back(c.nodes);
    return out;
}

// ---------------------------------------------------------------------------
// Collapse baseline.
// ---------------------------------------------------------------------------

/// All dimensions merged into one network with summed parallel-edge weights.
inline MonoNetwork collapse(const MultidimNetwork& net) {
    std::vector<WeightedEdge> edges;
    edges.reserve(net.num_edges());
    for (const Edge& e : net.edges()) edges.push_back(WeightedEdge{e.u, e.v, e.weight});
    return MonoNetwork::from_edges(0, std::move(edges));
}

/// Communities of the collapsed network as node sets, by community label.
template <class Discoverer>
std::vector<std::vector<node_id>> collapse_baseline(const MultidimNetwork& net, const Discoverer& discover) {
    const MonoNetwork g = collapse(net);
    if (g.empty()) return {};
    return discover(g).members();
}

// ---------------------------------------------------------------------------
// Cumulative distributions.
// ---------------------------------------------------------------------------

struct DistributionPoint {
    double threshold;
    double fraction;    // share of communities with value >= threshold
    std::size_t count;  // number of communities with value >= threshold
};

struct Distribution {
    std::string measure;
    std::vector<DistributionPoint> points;  // ascending threshold
};

/// Complementary cumulative distribution over the distinct observed values.
inline std::vector<DistributionPoint> cumulative(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    std::vector<DistributionPoint> out;
    const double total = static_cast<double>(values.size());
    for (std::size_t i = 0; i < values.size();) {
        std::size_t j = i;
        while (j < values.size() && values[j] == values[i]) ++j;
        const std::size_t at_least = values.size() - i;
        out.push_back(DistributionPoint{values[i], static_cast<double>(at_least) / total, at_least});
        i = j;
    }
    return out;
}

/// Support, size and MCD distributions (MCD over communities where it is defined).
inline std::vector<Distribution> stats(std::span<const MultidimCommunity> communities) {
    std::vector<double> support, size, mcd;
    for (const auto& c : communities) {
        support.push_back(static_cast<double>(c.support));
        size.push_back(static_cast<double>(c.size));
        if (c.mcd) mcd.push_back(*c.mcd);
    }
    return {Distribution{"support", cumulative(std::move(support))}, Distribution{"size", cumulative(std::move(size))},
            Distribution{"mcd", cumulative(std::move(mcd))}};
}

}  // namespace abacus
