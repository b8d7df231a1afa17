#pragma once

// Edge-labeled undirected multigraphs and their per-dimension slices.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "abacus/errors.hpp"

namespace abacus {

using node_id = std::uint32_t;
using dim_id = std::uint32_t;

/// Bijection between opaque names and dense ids, in first-registration order.
class Registry {
public:
    std::uint32_t intern(std::string_view name) {
        auto it = index_.find(std::string(name));
        if (it != index_.end()) return it->second;
        const auto id = static_cast<std::uint32_t>(names_.size());
        names_.emplace_back(name);
        index_.emplace(names_.back(), id);
        return id;
    }

    std::optional<std::uint32_t> find(std::string_view name) const {
        auto it = index_.find(std::string(name));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    std::uint32_t at(std::string_view name) const {
        auto id = find(name);
        if (!id) throw LookupError("unknown name '" + std::string(name) + "'");
        return *id;
    }

    const std::string& name(std::uint32_t id) const {
        if (id >= names_.size()) throw LookupError("unknown id " + std::to_string(id));
        return names_[id];
    }

    std::size_t size() const noexcept { return names_.size(); }
    const std::vector<std::string>& names() const noexcept { return names_; }

    friend bool operator==(const Registry& a, const Registry& b) { return a.names_ == b.names_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::uint32_t> index_;
};

/// Undirected labeled edge, stored with u < v.
struct Edge {
    node_id u;
    node_id v;
    dim_id dim;
    double weight;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Entry of a node's adjacency list.
struct Incidence {
    node_id neighbor;
    dim_id dim;
    double weight;
};

class NetworkBuilder;

/// Immutable multidimensional network (V, E, L) with at most one edge per (u, v, d).
class MultidimNetwork {
public:
    MultidimNetwork() = default;

    std::size_t num_nodes() const noexcept { return nodes_.size(); }
    std::size_t num_dimensions() const noexcept { return dims_.size(); }
    std::size_t num_edges() const noexcept { return edges_.size(); }

    const Registry& nodes() const noexcept { return nodes_; }
    const Registry& dimensions() const noexcept { return dims_; }

    /// Edges in insertion order (first appearance of each (u, v, d) triple).
    std::span<const Edge> edges() const noexcept { return edges_; }

    /// Indices into edges() of dimension d's slice, ordered by (u, v).
    std::span<const std::uint32_t> slice(dim_id d) const {
        check_dim(d);
        return std::span<const std::uint32_t>(by_dim_).subspan(dim_offsets_[d], dim_offsets_[d + 1] - dim_offsets_[d]);
    }

    /// Adjacency of n, ordered by (dimension, neighbor).
    std::span<const Incidence> neighbors(node_id n) const {
        check_node(n);
        return std::span<const Incidence>(adj_).subspan(adj_offsets_[n], adj_offsets_[n + 1] - adj_offsets_[n]);
    }

    std::optional<double> weight(node_id u, node_id v, dim_id d) const {
        check_node(v);
        check_dim(d);
        auto adj = neighbors(u);
        auto it = std::lower_bound(adj.begin(), adj.end(), std::pair{d, v}, [](const Incidence& a, std::pair<dim_id, node_id> key) {
            return std::pair{a.dim, a.neighbor} < key;
        });
        if (it == adj.end() || it->dim != d || it->neighbor != v) return std::nullopt;
        return it->weight;
    }

    /// True iff n has at least one edge labeled d.
    bool belongs_to(node_id n, dim_id d) const {
        check_dim(d);
        auto adj = neighbors(n);
        auto it = std::lower_bound(adj.begin(), adj.end(), d, [](const Incidence& a, dim_id key) { return a.dim < key; });
        return it != adj.end() && it->dim == d;
    }

    void check_node(node_id n) const {
        if (n >= num_nodes()) throw LookupError("unknown node id " + std::to_string(n));
    }
    void check_dim(dim_id d) const {
        if (d >= num_dimensions()) throw LookupError("unknown dimension id " + std::to_string(d));
    }

private:
    friend class NetworkBuilder;

    Registry nodes_;
    Registry dims_;
    std::vector<Edge> edges_;
    std::vector<std::uint32_t> by_dim_;
    std::vector<std::size_t> dim_offsets_;
    std::vector<Incidence> adj_;
    std::vector<std::size_t> adj_offsets_;
};

/// Accumulates edges; duplicate (u, v, d) triples have their weights summed.
class NetworkBuilder {
public:
    node_id add_node(std::string_view name) { return nodes_.intern(name); }
    dim_id add_dimension(std::string_view name) { return dims_.intern(name); }

    void add_edge(std::string_view u, std::string_view v, std::string_view d, double weight = 1.0) {
        if (u == v) throw ValidationError("self-loop on node '" + std::string(u) + "'");
        check_weight(weight);
        const node_id a = add_node(u);
        const node_id b = add_node(v);
        insert(a, b, add_dimension(d), weight);
    }

    void add_edge(node_id u, node_id v, dim_id d, double weight = 1.0) {
        if (u >= nodes_.size() || v >= nodes_.size()) throw LookupError("edge references unregistered node");
        if (d >= dims_.size()) throw LookupError("edge references unregistered dimension");
        if (u == v) throw ValidationError("self-loop on node '" + nodes_.name(u) + "'");
        check_weight(weight);
        insert(u, v, d, weight);
    }

    bool contains(node_id u, node_id v, dim_id d) const {
        if (u > v) std::swap(u, v);
        return index_.count(Key{u, v, d}) != 0;
    }

    std::size_t num_edges() const noexcept { return edges_.size(); }

    MultidimNetwork build() && {
        MultidimNetwork net;
        net.nodes_ = std::move(nodes_);
        net.dims_ = std::move(dims_);
        net.edges_ = std::move(edges_);
        index_.clear();

        const std::size_t n = net.nodes_.size();
        const std::size_t nd = net.dims_.size();
        const auto& edges = net.edges_;

        net.by_dim_.resize(edges.size());
        std::iota(net.by_dim_.begin(), net.by_dim_.end(), 0u);
        std::sort(net.by_dim_.begin(), net.by_dim_.end(), [&](std::uint32_t a, std::uint32_t b) {
            const Edge& x = edges[a];
            const Edge& y = edges[b];
            return std::tie(x.dim, x.u, x.v) < std::tie(y.dim, y.u, y.v);
        });
        net.dim_offsets_.assign(nd + 1, 0);
        for (const Edge& e : edges) ++net.dim_offsets_[e.dim + 1];
        std::partial_sum(net.dim_offsets_.begin(), net.dim_offsets_.end(), net.dim_offsets_.begin());

        net.adj_offsets_.assign(n + 1, 0);
        for (const Edge& e : edges) {
            ++net.adj_offsets_[e.u + 1];
            ++net.adj_offsets_[e.v + 1];
        }
        std::partial_sum(net.adj_offsets_.begin(), net.adj_offsets_.end(), net.adj_offsets_.begin());
        net.adj_.resize(2 * edges.size());
        std::vector<std::size_t> fill(net.adj_offsets_.begin(), net.adj_offsets_.end() - 1);
        for (const Edge& e : edges) {
            net.adj_[fill[e.u]++] = Incidence{e.v, e.dim, e.weight};
            net.adj_[fill[e.v]++] = Incidence{e.u, e.dim, e.weight};
        }
        for (std::size_t i = 0; i < n; ++i) {
            std::sort(net.adj_.begin() + static_cast<std::ptrdiff_t>(net.adj_offsets_[i]),
                      net.adj_.begin() + static_cast<std::ptrdiff_t>(net.adj_offsets_[i + 1]),
                      [](const Incidence& a, const Incidence& b) { return std::pair{a.dim, a.neighbor} < std::pair{b.dim, b.neighbor}; });
        }
        return net;
    }

private:
    struct Key {
        node_id u;
        node_id v;
        dim_id d;
        friend bool operator==(const Key&, const Key&) = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept {
            std::uint64_t h = (std::uint64_t{k.u} << 32) ^ k.v;
            h ^= std::uint64_t{k.d} * 0x9E3779B97F4A7C15ull;
            h ^= h >> 29;
            h *= 0xBF58476D1CE4E5B9ull;
            return static_cast<std::size_t>(h ^ (h >> 32));
        }
    };

    static void check_weight(double w) {
        if (!(w > 0.0) || !std::isfinite(w)) throw ValidationError("edge weight must be positive and finite");
    }

    void insert(node_id u, node_id v, dim_id d, double w) {
        if (u > v) std::swap(u, v);
        auto [it, inserted] = index_.try_emplace(Key{u, v, d}, edges_.size());
        if (inserted)
            edges_.push_back(Edge{u, v, d, w});
        else
            edges_[it->second].weight += w;
    }

    Registry nodes_;
    Registry dims_;
    std::vector<Edge> edges_;
    std::unordered_map<Key, std::size_t, KeyHash> index_;
};

// ---------------------------------------------------------------------------
// Edge-list text format: `u v d [w]` per line, whitespace separated, `#` starts
// a comment line, weight defaults to 1.
// ---------------------------------------------------------------------------

struct ParseOptions {
    double default_weight = 1.0;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r' || line[i] == '\v' || line[i] == '\f')) ++i;
        std::size_t j = i;
        while (j < line.size() && !(line[j] == ' ' || line[j] == '\t' || line[j] == '\r' || line[j] == '\v' || line[j] == '\f')) ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

inline bool is_comment_or_blank(const std::vector<std::string_view>& fields) {
    return fields.empty() || fields.front().front() == '#';
}

inline std::optional<double> parse_double(std::string_view s) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

template <class Int>
std::optional<Int> parse_uint(std::string_view s) {
    Int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

/// Shortest round-trip decimal form.
inline std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "' for reading");
    return in;
}

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    return out;
}

}  // namespace detail

inline MultidimNetwork read_edgelist(std::istream& in, const ParseOptions& options = {}) {
    NetworkBuilder builder;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto fields = detail::split_ws(line);
        if (detail::is_comment_or_blank(fields)) continue;
        if (fields.size() != 3 && fields.size() != 4)
            throw ParseError("expected 'u v d [w]', got " + std::to_string(fields.size()) + " fields", lineno);
        double w = options.default_weight;
        if (fields.size() == 4) {
            auto parsed = detail::parse_double(fields[3]);
            if (!parsed) throw ParseError("non-numeric weight '" + std::string(fields[3]) + "'", lineno);
            w = *parsed;
        }
        try {
            builder.add_edge(fields[0], fields[1], fields[2], w);
        } catch (const ValidationError& e) {
            throw ValidationError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return std::move(builder).build();
}

inline MultidimNetwork load_edgelist(const std::string& path, const ParseOptions& options = {}) {
    auto in = detail::open_input(path);
    return read_edgelist(in, options);
}

inline void write_edgelist(std::ostream& out, const MultidimNetwork& net) {
    for (const Edge& e : net.edges()) {
        out << net.nodes().name(e.u) << ' ' << net.nodes().name(e.v) << ' ' << net.dimensions().name(e.dim) << ' '
            << detail::format_double(e.weight) << '\n';
    }
}

inline void save_edgelist(const std::string& path, const MultidimNetwork& net) {
    auto out = detail::open_output(path);
    write_edgelist(out, net);
}

// ---------------------------------------------------------------------------
// Monodimensional slices.
// ---------------------------------------------------------------------------

struct WeightedEdge {
    node_id u;
    node_id v;
    double weight;
};

/// One dimension of a multidimensional network, on a compact local index space.
///
/// Local index i corresponds to global node nodes()[i]; nodes() is ascending, and
/// every node has at least one incident edge.
class MonoNetwork {
public:
    /// Parallel edges between the same pair are merged by summing their weights.
    static MonoNetwork from_edges(dim_id dimension, std::vector<WeightedEdge> edges) {
        MonoNetwork g;
        g.dim_ = dimension;
        for (auto& e : edges) {
            if (e.u > e.v) std::swap(e.u, e.v);
        }
        std::sort(edges.begin(), edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) { return std::pair{a.u, a.v} < std::pair{b.u, b.v}; });
        std::vector<WeightedEdge> merged;
        merged.reserve(edges.size());
        for (const auto& e : edges) {
            if (!merged.empty() && merged.back().u == e.u && merged.back().v == e.v)
                merged.back().weight += e.weight;
            else
                merged.push_back(e);
        }

        g.nodes_.reserve(2 * merged.size());
        for (const auto& e : merged) {
            g.nodes_.push_back(e.u);
            g.nodes_.push_back(e.v);
        }
        std::sort(g.nodes_.begin(), g.nodes_.end());
        g.nodes_.erase(std::unique(g.nodes_.begin(), g.nodes_.end()), g.nodes_.end());

        const std::size_t n = g.nodes_.size();
        g.offsets_.assign(n + 1, 0);
        std::vector<std::pair<std::uint32_t, std::uint32_t>> local(merged.size());
        for (std::size_t i = 0; i < merged.size(); ++i) {
            local[i] = {*g.local_index(merged[i].u), *g.local_index(merged[i].v)};
            ++g.offsets_[local[i].first + 1];
            ++g.offsets_[local[i].second + 1];
        }
        std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
        g.targets_.resize(2 * merged.size());
        g.weights_.resize(2 * merged.size());
        std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
        // Edges are sorted by (u, v), so each adjacency list comes out sorted by neighbor.
        for (std::size_t i = 0; i < merged.size(); ++i) {
            auto [a, b] = local[i];
            g.targets_[fill[b]] = a;
            g.weights_[fill[b]++] = merged[i].weight;
        }
        for (std::size_t i = 0; i < merged.size(); ++i) {
            auto [a, b] = local[i];
            g.targets_[fill[a]] = b;
            g.weights_[fill[a]++] = merged[i].weight;
        }
        g.num_edges_ = merged.size();
        return g;
    }

    dim_id dimension() const noexcept { return dim_; }
    std::size_t num_nodes() const noexcept { return nodes_.size(); }
    std::size_t num_edges() const noexcept { return num_edges_; }
    bool empty() const noexcept { return nodes_.empty(); }

    /// Global ids of the slice's nodes, ascending.
    std::span<const node_id> nodes() const noexcept { return nodes_; }

    std::optional<std::uint32_t> local_index(node_id global) const {
        auto it = std::lower_bound(nodes_.begin(), nodes_.end(), global);
        if (it == nodes_.end() || *it != global) return std::nullopt;
        return static_cast<std::uint32_t>(it - nodes_.begin());
    }

    std::span<const std::uint32_t> neighbors(std::uint32_t local) const {
        return std::span<const std::uint32_t>(targets_).subspan(offsets_[local], offsets_[local + 1] - offsets_[local]);
    }
    std::span<const double> weights(std::uint32_t local) const {
        return std::span<const double>(weights_).subspan(offsets_[local], offsets_[local + 1] - offsets_[local]);
    }
    std::size_t degree(std::uint32_t local) const { return offsets_[local + 1] - offsets_[local]; }

    /// Edges in global ids with u < v, ordered by (u, v).
    std::vector<WeightedEdge> edges() const {
        std::vector<WeightedEdge> out;
        out.reserve(num_edges_);
        for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
            auto nb = neighbors(i);
            auto w = weights(i);
            for (std::size_t k = 0; k < nb.size(); ++k) {
                if (nb[k] > i) out.push_back(WeightedEdge{nodes_[i], nodes_[nb[k]], w[k]});
            }
        }
        return out;
    }

private:
    dim_id dim_ = 0;
    std::vector<node_id> nodes_;
    std::vector<std::size_t> offsets_;
    std::vector<std::uint32_t> targets_;
    std::vector<double> weights_;
    std::size_t num_edges_ = 0;
};

/// The d-labeled slice of net (possibly empty).
inline MonoNetwork slice_of(const MultidimNetwork& net, dim_id d) {
    std::vector<WeightedEdge> edges;
    const auto idx = net.slice(d);
    edges.reserve(idx.size());
    for (auto i : idx) {
        const Edge& e = net.edges()[i];
        edges.push_back(WeightedEdge{e.u, e.v, e.weight});
    }
    return MonoNetwork::from_edges(d, std::move(edges));
}

/// One MonoNetwork per dimension having at least one edge, in dimension-id order.
inline std::vector<MonoNetwork> split(const MultidimNetwork& net) {
    std::vector<MonoNetwork> out;
    for (dim_id d = 0; d < net.num_dimensions(); ++d) {
        if (net.slice(d).empty()) continue;
        out.push_back(slice_of(net, d));
    }
    return out;
}

namespace detail {

/// Sorted, deduplicated copy of ids; validates each against `check`.
template <class Check>
std::vector<std::uint32_t> normalize_ids(std::span<const std::uint32_t> ids, Check check) {
    std::vector<std::uint32_t> out(ids.begin(), ids.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    for (auto id : out) check(id);
    return out;
}

}  // namespace detail

/// Number of distinct edges (u, v, d) with u, v in `nodes` and d in `dims`.
inline std::size_t edges_among(const MultidimNetwork& net, std::span<const node_id> nodes, std::span<const dim_id> dims) {
    const auto members = detail::normalize_ids(nodes, [&](node_id n) { net.check_node(n); });
    const auto wanted = detail::normalize_ids(dims, [&](dim_id d) { net.check_dim(d); });
    std::size_t count = 0;
    for (node_id u : members) {
        for (const Incidence& inc : net.neighbors(u)) {
            if (inc.neighbor <= u) continue;
            if (!std::binary_search(wanted.begin(), wanted.end(), inc.dim)) continue;
            if (std::binary_search(members.begin(), members.end(), inc.neighbor)) ++count;
        }
    }
    return count;
}

}  // namespace abacus
