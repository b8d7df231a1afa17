#pragma once

// Monodimensional community discovery: the pluggable stage run on every slice.

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "abacus/errors.hpp"
#include "abacus/graph.hpp"

namespace abacus {

using community_id = std::uint32_t;

/// Node -> community labels for one dimension.
///
/// Row i describes slice node nodes[i]. Labels are dense in 0..num_communities-1 and
/// each row is sorted and duplicate-free.
class CommunityAssignment {
public:
    CommunityAssignment() = default;

    /// Builds from one label row per node, densifying labels by ascending original value.
    static CommunityAssignment from_rows(dim_id dimension, std::vector<node_id> nodes, std::vector<std::vector<std::uint64_t>> rows) {
        if (nodes.size() != rows.size()) throw ValidationError("assignment rows do not match node count");
        std::vector<std::uint64_t> distinct;
        for (const auto& r : rows) distinct.insert(distinct.end(), r.begin(), r.end());
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

        CommunityAssignment a;
        a.dim_ = dimension;
        a.nodes_ = std::move(nodes);
        a.offsets_.reserve(a.nodes_.size() + 1);
        a.offsets_.push_back(0);
        for (auto& r : rows) {
            if (r.empty()) throw CoverageError("node without a community label");
            std::vector<community_id> dense;
            dense.reserve(r.size());
            for (auto label : r)
                dense.push_back(static_cast<community_id>(std::lower_bound(distinct.begin(), distinct.end(), label) - distinct.begin()));
            std::sort(dense.begin(), dense.end());
            dense.erase(std::unique(dense.begin(), dense.end()), dense.end());
            a.labels_.insert(a.labels_.end(), dense.begin(), dense.end());
            a.offsets_.push_back(a.labels_.size());
        }
        a.num_communities_ = static_cast<community_id>(distinct.size());
        return a;
    }

    /// Builds from exactly one label per node, renumbering labels by first appearance.
    static CommunityAssignment from_labels(dim_id dimension, std::vector<node_id> nodes, std::span<const std::uint32_t> labels) {
        if (nodes.size() != labels.size()) throw ValidationError("assignment labels do not match node count");
        std::unordered_map<std::uint32_t, community_id> remap;
        CommunityAssignment a;
        a.dim_ = dimension;
        a.nodes_ = std::move(nodes);
        a.offsets_.resize(a.nodes_.size() + 1);
        std::iota(a.offsets_.begin(), a.offsets_.end(), std::size_t{0});
        a.labels_.reserve(labels.size());
        for (auto l : labels) {
            auto [it, inserted] = remap.try_emplace(l, static_cast<community_id>(remap.size()));
            a.labels_.push_back(it->second);
        }
        a.num_communities_ = static_cast<community_id>(remap.size());
        return a;
    }

    dim_id dimension() const noexcept { return dim_; }
    std::span<const node_id> nodes() const noexcept { return nodes_; }
    std::size_t num_nodes() const noexcept { return nodes_.size(); }
    community_id num_communities() const noexcept { return num_communities_; }

    std::span<const community_id> labels_of(std::size_t row) const {
        return std::span<const community_id>(labels_).subspan(offsets_[row], offsets_[row + 1] - offsets_[row]);
    }

    bool overlapping() const noexcept { return labels_.size() != nodes_.size(); }

    /// Global node ids of each community, ascending.
    std::vector<std::vector<node_id>> members() const {
        std::vector<std::vector<node_id>> out(num_communities_);
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            for (auto c : labels_of(i)) out[c].push_back(nodes_[i]);
        }
        return out;
    }

private:
    dim_id dim_ = 0;
    std::vector<node_id> nodes_;
    std::vector<std::size_t> offsets_;
    std::vector<community_id> labels_;
    community_id num_communities_ = 0;
};

/// A monodimensional community discoverer: deterministic map from a slice to an assignment.
template <class D>
concept CommunityDiscoverer = requires(const D& d, const MonoNetwork& g) {
    { d(g) } -> std::same_as<CommunityAssignment>;
};

/// Type-erased discoverer, for run-time selection.
using AnyDiscoverer = std::function<CommunityAssignment(const MonoNetwork&)>;

// ---------------------------------------------------------------------------
// Weighted label propagation.
// ---------------------------------------------------------------------------

struct LabelPropagation {
    std::uint64_t seed = 42;
    std::size_t max_iters = 100;

    struct Trace {
        std::size_t iterations = 0;
        bool converged = false;
    };

    CommunityAssignment operator()(const MonoNetwork& g) const {
        Trace ignored;
        return run(g, ignored);
    }

    /// Asynchronous updates in a fresh seeded random order per sweep. Each node takes the
    /// label of maximum incident weight among its neighbors, keeping its current label when
    /// that label is among the maxima, otherwise choosing uniformly among them. Stops after a
    /// sweep with no change or after max_iters sweeps.
    CommunityAssignment run(const MonoNetwork& g, Trace& trace) const {
        if (max_iters == 0) throw ValidationError("label propagation needs max_iters >= 1");
        const auto n = static_cast<std::uint32_t>(g.num_nodes());
        std::vector<std::uint32_t> label(n);
        std::iota(label.begin(), label.end(), 0u);

        // Seed mixed with the dimension so slices do not share a shuffle sequence.
        std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ull * (std::uint64_t{g.dimension()} + 1)));
        std::vector<std::uint32_t> order(n);
        std::iota(order.begin(), order.end(), 0u);

        std::vector<double> score(n, 0.0);
        std::vector<std::uint32_t> touched;
        std::vector<std::uint32_t> best;

        trace = Trace{};
        for (std::size_t iter = 0; iter < max_iters; ++iter) {
            std::shuffle(order.begin(), order.end(), rng);
            bool changed = false;
            for (auto node : order) {
                auto nb = g.neighbors(node);
                auto w = g.weights(node);
                touched.clear();
                for (std::size_t k = 0; k < nb.size(); ++k) {
                    const auto l = label[nb[k]];
                    if (score[l] == 0.0) touched.push_back(l);
                    score[l] += w[k];
                }
                double top = 0.0;
                for (auto l : touched) top = std::max(top, score[l]);
                best.clear();
                bool keep = false;
                for (auto l : touched) {
                    if (score[l] == top) {
                        best.push_back(l);
                        keep = keep || l == label[node];
                    }
                }
                for (auto l : touched) score[l] = 0.0;
                if (keep || best.empty()) continue;
                std::sort(best.begin(), best.end());
                std::uint32_t pick = best.front();
                if (best.size() > 1) pick = best[std::uniform_int_distribution<std::size_t>(0, best.size() - 1)(rng)];
                label[node] = pick;
                changed = true;
            }
            trace.iterations = iter + 1;
            if (!changed) {
                trace.converged = true;
                break;
            }
        }
        return CommunityAssignment::from_labels(g.dimension(), std::vector<node_id>(g.nodes().begin(), g.nodes().end()), label);
    }
};

// ---------------------------------------------------------------------------
// Connected components.
// ---------------------------------------------------------------------------

struct ConnectedComponents {
    CommunityAssignment operator()(const MonoNetwork& g) const {
        const auto n = static_cast<std::uint32_t>(g.num_nodes());
        constexpr auto unset = static_cast<std::uint32_t>(-1);
        std::vector<std::uint32_t> comp(n, unset);
        std::vector<std::uint32_t> stack;
        std::uint32_t next = 0;
        for (std::uint32_t s = 0; s < n; ++s) {
            if (comp[s] != unset) continue;
            comp[s] = next;
            stack.push_back(s);
            while (!stack.empty()) {
                auto x = stack.back();
                stack.pop_back();
                for (auto y : g.neighbors(x)) {
                    if (comp[y] == unset) {
                        comp[y] = next;
                        stack.push_back(y);
                    }
                }
            }
            ++next;
        }
        return CommunityAssignment::from_labels(g.dimension(), std::vector<node_id>(g.nodes().begin(), g.nodes().end()), comp);
    }
};

// ---------------------------------------------------------------------------
// Externally supplied assignment.
// ---------------------------------------------------------------------------

/// Externally supplied memberships. Entries are either scoped to one dimension or apply
/// to every dimension a node appears in.
class AssignmentTable {
public:
    void add(node_id node, std::uint64_t community) { global_[node].push_back(community); }
    void add(node_id node, dim_id dimension, std::uint64_t community) { scoped_[dimension][node].push_back(community); }

    /// All labels of `node` in `dimension`; empty if none.
    std::vector<std::uint64_t> lookup(node_id node, dim_id dimension) const {
        std::vector<std::uint64_t> out;
        if (auto d = scoped_.find(dimension); d != scoped_.end()) {
            if (auto it = d->second.find(node); it != d->second.end()) out = it->second;
        }
        if (auto it = global_.find(node); it != global_.end()) out.insert(out.end(), it->second.begin(), it->second.end());
        return out;
    }

    bool empty() const noexcept { return global_.empty() && scoped_.empty(); }

private:
    std::unordered_map<node_id, std::vector<std::uint64_t>> global_;
    std::map<dim_id, std::unordered_map<node_id, std::vector<std::uint64_t>>> scoped_;
};

/// Reads `node community [dimension]` lines, resolving names against the network.
/// Lines without a dimension apply to every dimension the node appears in.
inline AssignmentTable read_assignment_table(std::istream& in, const MultidimNetwork& net) {
    AssignmentTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto fields = detail::split_ws(line);
        if (detail::is_comment_or_blank(fields)) continue;
        if (fields.size() != 2 && fields.size() != 3)
            throw ParseError("expected 'node community [dimension]'", lineno);
        auto node = net.nodes().find(fields[0]);
        if (!node) throw LookupError("line " + std::to_string(lineno) + ": unknown node '" + std::string(fields[0]) + "'");
        auto community = detail::parse_uint<std::uint64_t>(fields[1]);
        if (!community) throw ParseError("community label must be a non-negative integer", lineno);
        if (fields.size() == 2) {
            table.add(*node, *community);
        } else {
            auto dim = net.dimensions().find(fields[2]);
            if (!dim) throw LookupError("line " + std::to_string(lineno) + ": unknown dimension '" + std::string(fields[2]) + "'");
            table.add(*node, *dim, *community);
        }
    }
    return table;
}

inline AssignmentTable load_assignment_table(const std::string& path, const MultidimNetwork& net) {
    auto in = detail::open_input(path);
    return read_assignment_table(in, net);
}

/// Returns the table's memberships for the slice; every slice node must be covered.
inline CommunityAssignment fixed_assignment(const MonoNetwork& g, const AssignmentTable& table) {
    std::vector<std::vector<std::uint64_t>> rows;
    rows.reserve(g.num_nodes());
    for (auto n : g.nodes()) {
        auto labels = table.lookup(n, g.dimension());
        if (labels.empty())
            throw CoverageError("fixed assignment has no community for node " + std::to_string(n) + " in dimension " +
                                std::to_string(g.dimension()));
        rows.push_back(std::move(labels));
    }
    return CommunityAssignment::from_rows(g.dimension(), std::vector<node_id>(g.nodes().begin(), g.nodes().end()), std::move(rows));
}

struct FixedAssignment {
    const AssignmentTable* table;

    CommunityAssignment operator()(const MonoNetwork& g) const { return fixed_assignment(g, *table); }
};

static_assert(CommunityDiscoverer<LabelPropagation>);
static_assert(CommunityDiscoverer<ConnectedComponents>);
static_assert(CommunityDiscoverer<FixedAssignment>);

}  // namespace abacus
