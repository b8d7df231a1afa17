#pragma once

// Test-only reference computations, written independently of the library's fast paths.

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "abacus/abacus.hpp"

namespace abacus::testing {

inline std::string sample(const std::string& name) { return std::string(ABACUS_SAMPLES_DIR) + "/" + name; }

/// Erdos-Renyi slice per dimension with random weights, built through the builder.
inline MultidimNetwork random_network(std::mt19937_64& rng, std::size_t nodes, std::size_t dims, double p) {
    NetworkBuilder b;
    for (std::size_t n = 0; n < nodes; ++n) b.add_node("v" + std::to_string(n));
    for (std::size_t d = 0; d < dims; ++d) b.add_dimension("L" + std::to_string(d));
    std::bernoulli_distribution coin(p);
    std::uniform_real_distribution<double> w(0.5, 5.0);
    for (dim_id d = 0; d < dims; ++d)
        for (node_id u = 0; u < nodes; ++u)
            for (node_id v = u + 1; v < nodes; ++v)
                if (coin(rng)) b.add_edge(u, v, d, w(rng));
    return std::move(b).build();
}

/// Edge count among nodes in dims by scanning the whole edge list.
inline std::size_t scan_edges_among(const MultidimNetwork& net, const std::vector<node_id>& nodes, const std::vector<dim_id>& dims) {
    const std::set<node_id> ns(nodes.begin(), nodes.end());
    const std::set<dim_id> ds(dims.begin(), dims.end());
    std::size_t count = 0;
    for (const Edge& e : net.edges()) count += ns.count(e.u) && ns.count(e.v) && ds.count(e.dim);
    return count;
}

/// #edges / (ndim * n(n-1)/2), evaluated literally.
inline double formula_mcd(const MultidimNetwork& net, const std::vector<node_id>& nodes, const std::vector<dim_id>& dims) {
    const std::set<node_id> ns(nodes.begin(), nodes.end());
    const std::set<dim_id> ds(dims.begin(), dims.end());
    const double n = static_cast<double>(ns.size());
    return static_cast<double>(scan_edges_among(net, nodes, dims)) / (static_cast<double>(ds.size()) * (n * (n - 1) / 2));
}

/// Partition of the slice by union-find over its edge list, as sets of global ids.
inline std::set<std::set<node_id>> union_find_partition(const MonoNetwork& g) {
    std::map<node_id, node_id> parent;
    for (auto n : g.nodes()) parent[n] = n;
    auto find = [&](node_id x) {
        while (parent[x] != x) x = parent[x];
        return x;
    };
    for (const auto& e : g.edges()) parent[find(e.u)] = find(e.v);
    std::map<node_id, std::set<node_id>> groups;
    for (auto n : g.nodes()) groups[find(n)].insert(n);
    std::set<std::set<node_id>> out;
    for (auto& [root, members] : groups) out.insert(members);
    return out;
}

inline std::set<std::set<node_id>> partition_of(const CommunityAssignment& a) {
    std::set<std::set<node_id>> out;
    for (const auto& m : a.members()) out.insert(std::set<node_id>(m.begin(), m.end()));
    return out;
}

inline TransactionDB random_db(std::mt19937_64& rng, std::size_t max_items, std::size_t max_transactions) {
    std::uniform_int_distribution<std::size_t> n_items(1, max_items);
    std::uniform_int_distribution<std::size_t> n_tx(1, max_transactions);
    const std::size_t items = n_items(rng);
    const std::size_t tx = n_tx(rng);
    std::uniform_real_distribution<double> density(0.15, 0.7);
    const double p = density(rng);
    std::bernoulli_distribution coin(p);
    std::vector<std::vector<item_id>> rows(tx);
    for (auto& r : rows)
        for (item_id x = 0; x < items; ++x)
            if (coin(rng)) r.push_back(x);
    return TransactionDB(std::move(rows), items);
}

/// Transactions given as letter strings, e.g. {"ABC", "BCE"}; letter 'A' + k is item k.
inline TransactionDB letters_db(const std::vector<std::string>& rows) {
    std::vector<std::vector<item_id>> tx;
    for (const auto& r : rows) {
        auto& t = tx.emplace_back();
        for (char c : r) t.push_back(static_cast<item_id>(c - 'A'));
    }
    return TransactionDB(std::move(tx));
}

inline std::string letters(const Itemset& s) {
    std::string out;
    for (auto x : s) out += static_cast<char>('A' + x);
    return out;
}

/// Node names of a community.
inline std::set<std::string> names(const MultidimNetwork& net, const std::vector<node_id>& nodes) {
    std::set<std::string> out;
    for (auto n : nodes) out.insert(net.nodes().name(n));
    return out;
}

inline std::set<std::pair<std::string, community_id>> named_memberships(const MultidimNetwork& net, const MultidimCommunity& c) {
    std::set<std::pair<std::string, community_id>> out;
    for (auto m : c.memberships) out.emplace(net.dimensions().name(m.dimension), m.community);
    return out;
}

}  // namespace abacus::testing
