#pragma once

// Nodes as transactions, (dimension, community) memberships as items.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "abacus/community.hpp"
#include "abacus/errors.hpp"
#include "abacus/graph.hpp"

namespace abacus {

using item_id = std::uint32_t;

struct Membership {
    dim_id dimension;
    community_id community;

    friend auto operator<=>(const Membership&, const Membership&) = default;
};

/// Bijection (dimension, community) <-> dense item code.
class ItemCatalog {
public:
    item_id add(Membership m) {
        auto [it, inserted] = index_.try_emplace(key(m), static_cast<item_id>(items_.size()));
        if (inserted) items_.push_back(m);
        return it->second;
    }

    item_id encode(Membership m) const {
        auto it = index_.find(key(m));
        if (it == index_.end())
            throw LookupError("no item for dimension " + std::to_string(m.dimension) + " community " + std::to_string(m.community));
        return it->second;
    }

    Membership decode(item_id code) const {
        if (code >= items_.size()) throw LookupError("unknown item code " + std::to_string(code));
        return items_[code];
    }

    std::size_t size() const noexcept { return items_.size(); }
    std::span<const Membership> items() const noexcept { return items_; }

private:
    static std::uint64_t key(Membership m) { return (std::uint64_t{m.dimension} << 32) | m.community; }

    std::vector<Membership> items_;
    std::unordered_map<std::uint64_t, item_id> index_;
};

/// One transaction per node (horizontal view) plus item -> tidset (vertical view).
class TransactionDB {
public:
    TransactionDB() = default;

    /// num_items is raised to cover every code present in the transactions.
    explicit TransactionDB(std::vector<std::vector<item_id>> transactions, std::size_t num_items = 0) {
        offsets_.reserve(transactions.size() + 1);
        offsets_.push_back(0);
        for (auto& t : transactions) {
            std::sort(t.begin(), t.end());
            t.erase(std::unique(t.begin(), t.end()), t.end());
            if (!t.empty()) num_items = std::max<std::size_t>(num_items, t.back() + std::size_t{1});
            items_.insert(items_.end(), t.begin(), t.end());
            offsets_.push_back(items_.size());
        }
        tidsets_.assign(num_items, {});
        for (std::size_t tid = 0; tid + 1 < offsets_.size(); ++tid) {
            for (auto item : transaction(tid)) tidsets_[item].push_back(static_cast<node_id>(tid));
        }
    }

    std::size_t num_transactions() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t num_items() const noexcept { return tidsets_.size(); }

    std::span<const item_id> transaction(std::size_t tid) const {
        return std::span<const item_id>(items_).subspan(offsets_[tid], offsets_[tid + 1] - offsets_[tid]);
    }

    /// Ascending ids of the transactions containing item.
    std::span<const node_id> tidset(item_id item) const {
        if (item >= tidsets_.size()) throw LookupError("unknown item code " + std::to_string(item));
        return tidsets_[item];
    }

private:
    std::vector<std::size_t> offsets_;
    std::vector<item_id> items_;
    std::vector<std::vector<node_id>> tidsets_;
};

struct MembershipTable {
    TransactionDB db;
    ItemCatalog catalog;
};

/// Transaction of node n = codes of every (dimension, community) that n belongs to.
/// Codes are assigned by ascending dimension id, then ascending community label.
/// Nodes in no slice keep an empty transaction.
inline MembershipTable build_memberships(std::span<const CommunityAssignment> assignments, std::size_t num_nodes) {
    std::vector<const CommunityAssignment*> ordered;
    ordered.reserve(assignments.size());
    for (const auto& a : assignments) ordered.push_back(&a);
    std::sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return a->dimension() < b->dimension(); });
    for (std::size_t i = 1; i < ordered.size(); ++i) {
        if (ordered[i]->dimension() == ordered[i - 1]->dimension())
            throw DuplicateDimensionError("two assignments for dimension " + std::to_string(ordered[i]->dimension()));
    }

    MembershipTable out;
    std::vector<std::vector<item_id>> transactions(num_nodes);
    for (const auto* a : ordered) {
        std::vector<item_id> code(a->num_communities());
        for (community_id c = 0; c < a->num_communities(); ++c) code[c] = out.catalog.add(Membership{a->dimension(), c});
        for (std::size_t row = 0; row < a->num_nodes(); ++row) {
            const node_id n = a->nodes()[row];
            if (n >= num_nodes) throw LookupError("assignment references node " + std::to_string(n) + " outside the network");
            for (auto c : a->labels_of(row)) transactions[n].push_back(code[c]);
        }
    }
    out.db = TransactionDB(std::move(transactions), out.catalog.size());
    return out;
}

inline std::vector<Membership> decode(const ItemCatalog& catalog, std::span<const item_id> itemset) {
    std::vector<Membership> out;
    out.reserve(itemset.size());
    for (auto code : itemset) out.push_back(catalog.decode(code));
    return out;
}

/// Decoded memberships with dimension names.
inline std::vector<std::pair<std::string, community_id>> decode_named(const ItemCatalog& catalog, const MultidimNetwork& net,
                                                                      std::span<const item_id> itemset) {
    std::vector<std::pair<std::string, community_id>> out;
    out.reserve(itemset.size());
    for (auto m : decode(catalog, itemset)) out.emplace_back(net.dimensions().name(m.dimension), m.community);
    return out;
}

// ---------------------------------------------------------------------------
// Transaction export: line i holds transaction i's item codes, `-` when empty.
// ---------------------------------------------------------------------------

inline void write_transactions(std::ostream& out, const TransactionDB& db) {
    for (std::size_t tid = 0; tid < db.num_transactions(); ++tid) {
        auto t = db.transaction(tid);
        if (t.empty()) {
            out << "-\n";
            continue;
        }
        for (std::size_t k = 0; k < t.size(); ++k) out << (k ? " " : "") << t[k];
        out << '\n';
    }
}

inline TransactionDB read_transactions(std::istream& in) {
    std::vector<std::vector<item_id>> transactions;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto fields = detail::split_ws(line);
        auto& t = transactions.emplace_back();
        if (fields.empty() || (fields.size() == 1 && fields[0] == "-")) continue;
        for (auto f : fields) {
            auto code = detail::parse_uint<item_id>(f);
            if (!code) throw ParseError("item code must be a non-negative integer, got '" + std::string(f) + "'", lineno);
            t.push_back(*code);
        }
    }
    return TransactionDB(std::move(transactions));
}

}  // namespace abacus
