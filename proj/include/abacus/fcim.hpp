#pragma once

// Frequent closed itemset mining over vertical tidsets.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "abacus/errors.hpp"
#include "abacus/membership.hpp"

namespace abacus {

using Itemset = std::vector<item_id>;
using TidSet = std::vector<node_id>;

struct ClosedPattern {
    Itemset itemset;
    TidSet tidset;

    std::size_t support() const noexcept { return tidset.size(); }

    friend bool operator==(const ClosedPattern&, const ClosedPattern&) = default;
    friend auto operator<=>(const ClosedPattern& a, const ClosedPattern& b) { return a.itemset <=> b.itemset; }
};

/// Sorts patterns into the canonical (lexicographic itemset) order used for all output.
inline void canonical_sort(std::vector<ClosedPattern>& patterns) {
    std::sort(patterns.begin(), patterns.end(), [](const ClosedPattern& a, const ClosedPattern& b) { return a.itemset < b.itemset; });
}

namespace detail {

inline TidSet intersect(std::span<const node_id> a, std::span<const node_id> b) {
    TidSet out;
    out.reserve(std::min(a.size(), b.size()));
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline std::uint64_t hash_tidset(std::span<const node_id> tids) {
    std::uint64_t h = 0xCBF29CE484222325ull ^ tids.size();
    for (auto t : tids) {
        h ^= t;
        h *= 0x100000001B3ull;
        h ^= h >> 31;
    }
    return h;
}

/// Depth-first closed-itemset search in the style of CHARM.
///
/// Each search node pairs an itemset with its tidset. Sibling extensions whose tidset
/// contains the node's tidset are absorbed into the node; siblings whose tidset is
/// contained in it are folded into the node's subtree. Every node reached is reported
/// through its closure (the items common to all its transactions), and the index of
/// emitted patterns keyed by (support, tidset hash) drops repeats.
class ClosedMiner {
public:
    ClosedMiner(const TransactionDB& db, std::size_t sigma) : db_(db), sigma_(sigma) {}

    std::vector<ClosedPattern> mine() {
        struct Root {
            item_id item;
            std::size_t support;
        };
        std::vector<Root> roots;
        for (item_id x = 0; x < db_.num_items(); ++x) {
            const auto s = db_.tidset(x).size();
            if (s >= sigma_) roots.push_back(Root{x, s});
        }
        std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) {
            return a.support != b.support ? a.support < b.support : a.item < b.item;
        });

        constexpr auto absent = static_cast<std::uint32_t>(-1);
        std::vector<std::uint32_t> pos(db_.num_items(), absent);
        for (std::uint32_t i = 0; i < roots.size(); ++i) pos[roots[i].item] = i;
        std::vector<char> removed(roots.size(), 0);

        // Per-sibling tid lists of the top level are filled from the horizontal view
        // instead of by pairwise intersection.
        std::vector<TidSet> joint(roots.size());
        std::vector<std::uint32_t> hit;
        for (std::uint32_t i = 0; i < roots.size(); ++i) {
            if (removed[i]) continue;
            const auto ti = db_.tidset(roots[i].item);
            hit.clear();
            for (auto tid : ti) {
                for (auto x : db_.transaction(tid)) {
                    const auto j = pos[x];
                    if (j == absent || j <= i || removed[j]) continue;
                    if (joint[j].empty()) hit.push_back(j);
                    joint[j].push_back(tid);
                }
            }
            std::sort(hit.begin(), hit.end());

            Itemset prefix{roots[i].item};
            std::vector<Member> next;
            for (auto j : hit) {
                TidSet t = std::move(joint[j]);
                joint[j].clear();
                if (t.size() < sigma_) continue;
                const bool covers_i = t.size() == ti.size();
                const bool covers_j = t.size() == roots[j].support;
                if (covers_i) {
                    prefix.push_back(roots[j].item);
                    if (covers_j) removed[j] = 1;
                } else {
                    if (covers_j) removed[j] = 1;
                    next.push_back(Member{{roots[j].item}, std::move(t)});
                }
            }
            std::sort(prefix.begin(), prefix.end());
            if (!next.empty()) extend(prefix, next);
            emit(prefix, ti);
        }

        std::vector<ClosedPattern> out = std::move(found_);
        canonical_sort(out);
        return out;
    }

private:
    struct Member {
        Itemset items;
        TidSet tids;
    };

    void extend(const Itemset& prefix, std::vector<Member>& cls) {
        std::stable_sort(cls.begin(), cls.end(), [](const Member& a, const Member& b) { return a.tids.size() < b.tids.size(); });
        std::vector<char> removed(cls.size(), 0);
        for (std::size_t i = 0; i < cls.size(); ++i) {
            if (removed[i]) continue;
            const TidSet& ti = cls[i].tids;
            Itemset p = prefix;
            p.insert(p.end(), cls[i].items.begin(), cls[i].items.end());
            std::vector<Member> next;
            for (std::size_t j = i + 1; j < cls.size(); ++j) {
                if (removed[j]) continue;
                TidSet t = intersect(ti, cls[j].tids);
                if (t.size() < sigma_) continue;
                const bool covers_i = t.size() == ti.size();
                const bool covers_j = t.size() == cls[j].tids.size();
                if (covers_i) {
                    p.insert(p.end(), cls[j].items.begin(), cls[j].items.end());
                    if (covers_j) removed[j] = 1;
                } else {
                    if (covers_j) removed[j] = 1;
                    next.push_back(Member{cls[j].items, std::move(t)});
                }
            }
            std::sort(p.begin(), p.end());
            p.erase(std::unique(p.begin(), p.end()), p.end());
            if (!next.empty()) extend(p, next);
            emit(p, ti);
        }
    }

    void emit(const Itemset& seed, std::span<const node_id> tids) {
        const std::uint64_t key = hash_tidset(tids);
        auto& bucket = index_[key];
        for (auto idx : bucket) {
            if (std::ranges::equal(found_[idx].tidset, tids)) return;
        }
        bucket.push_back(found_.size());
        found_.push_back(ClosedPattern{closure(seed, tids), TidSet(tids.begin(), tids.end())});
    }

    /// Items common to every transaction in tids.
    Itemset closure(const Itemset& seed, std::span<const node_id> tids) const {
        auto first = db_.transaction(tids.front());
        Itemset common(first.begin(), first.end());
        Itemset scratch;
        for (std::size_t k = 1; k < tids.size() && common.size() > seed.size(); ++k) {
            auto t = db_.transaction(tids[k]);
            scratch.clear();
            std::set_intersection(common.begin(), common.end(), t.begin(), t.end(), std::back_inserter(scratch));
            common.swap(scratch);
        }
        return common;
    }

    const TransactionDB& db_;
    std::size_t sigma_;
    std::vector<ClosedPattern> found_;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> index_;
};

}  // namespace detail

/// All frequent closed itemsets of db with support >= sigma, with their tidsets, in
/// canonical order. The empty itemset is never reported.
inline std::vector<ClosedPattern> mine_closed(const TransactionDB& db, std::size_t sigma) {
    if (sigma == 0) throw ValidationError("minimum support must be >= 1");
    return detail::ClosedMiner(db, sigma).mine();
}

/// Tidset of an itemset by intersecting per-item tidsets. The empty itemset maps to all tids.
inline TidSet tidset_of(const TransactionDB& db, std::span<const item_id> itemset) {
    TidSet out;
    if (itemset.empty()) {
        out.resize(db.num_transactions());
        for (std::size_t t = 0; t < out.size(); ++t) out[t] = static_cast<node_id>(t);
        return out;
    }
    auto first = db.tidset(itemset[0]);
    out.assign(first.begin(), first.end());
    for (std::size_t k = 1; k < itemset.size(); ++k) out = detail::intersect(out, db.tidset(itemset[k]));
    return out;
}

/// True iff adding any single item outside p.itemset strictly shrinks its tidset.
inline bool is_closed(const TransactionDB& db, const ClosedPattern& p) {
    const TidSet tids = tidset_of(db, p.itemset);
    std::vector<std::size_t> count(db.num_items(), 0);
    for (auto tid : tids) {
        for (auto x : db.transaction(tid)) ++count[x];
    }
    for (item_id x = 0; x < db.num_items(); ++x) {
        if (std::binary_search(p.itemset.begin(), p.itemset.end(), x)) continue;
        if (count[x] == tids.size()) return false;
    }
    return true;
}

inline constexpr std::size_t brute_force_item_limit = 20;

/// Exhaustive enumeration of every non-empty itemset; for testing only.
inline std::vector<ClosedPattern> brute_force_closed(const TransactionDB& db, std::size_t sigma) {
    const std::size_t n = db.num_items();
    if (n > brute_force_item_limit)
        throw RefusalError("brute force limited to " + std::to_string(brute_force_item_limit) + " items, got " + std::to_string(n));
    if (sigma == 0) throw ValidationError("minimum support must be >= 1");

    std::vector<std::uint32_t> rows(db.num_transactions(), 0);
    for (std::size_t t = 0; t < rows.size(); ++t) {
        for (auto x : db.transaction(t)) rows[t] |= 1u << x;
    }
    const std::uint32_t full = n == 0 ? 0 : static_cast<std::uint32_t>((std::uint64_t{1} << n) - 1);
    std::vector<std::uint32_t> support(std::size_t{full} + 1, 0);
    for (std::uint32_t mask = 1; mask != 0 && mask <= full; ++mask) {
        for (auto r : rows) support[mask] += (r & mask) == mask;
    }

    std::vector<ClosedPattern> out;
    for (std::uint32_t mask = 1; mask != 0 && mask <= full; ++mask) {
        if (support[mask] < sigma) continue;
        bool closed = true;
        for (std::uint32_t sup = (mask + 1) | mask; sup <= full; sup = (sup + 1) | mask) {
            if (support[sup] == support[mask]) {
                closed = false;
                break;
            }
            if (sup == full) break;
        }
        if (!closed) continue;
        ClosedPattern p;
        for (item_id x = 0; x < n; ++x) {
            if (mask & (1u << x)) p.itemset.push_back(x);
        }
        for (std::size_t t = 0; t < rows.size(); ++t) {
            if ((rows[t] & mask) == mask) p.tidset.push_back(static_cast<node_id>(t));
        }
        out.push_back(std::move(p));
    }
    canonical_sort(out);
    return out;
}

// ---------------------------------------------------------------------------
// Pattern lines: `codes<TAB>support<TAB>tids`, codes and tids space-separated.
// ---------------------------------------------------------------------------

inline void write_patterns(std::ostream& out, std::span<const ClosedPattern> patterns) {
    for (const auto& p : patterns) {
        for (std::size_t k = 0; k < p.itemset.size(); ++k) out << (k ? " " : "") << p.itemset[k];
        out << '\t' << p.support() << '\t';
        for (std::size_t k = 0; k < p.tidset.size(); ++k) out << (k ? " " : "") << p.tidset[k];
        out << '\n';
    }
}

inline std::vector<ClosedPattern> read_patterns(std::istream& in) {
    std::vector<ClosedPattern> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string_view> cols;
        std::string_view rest(line);
        for (std::size_t tab; (tab = rest.find('\t')) != std::string_view::npos; rest.remove_prefix(tab + 1)) cols.push_back(rest.substr(0, tab));
        cols.push_back(rest);
        if (cols.size() != 3) throw ParseError("expected 3 tab-separated columns", lineno);
        ClosedPattern p;
        for (auto f : detail::split_ws(cols[0])) {
            auto v = detail::parse_uint<item_id>(f);
            if (!v) throw ParseError("bad item code", lineno);
            p.itemset.push_back(*v);
        }
        for (auto f : detail::split_ws(cols[2])) {
            auto v = detail::parse_uint<node_id>(f);
            if (!v) throw ParseError("bad transaction id", lineno);
            p.tidset.push_back(*v);
        }
        auto s = detail::parse_uint<std::size_t>(detail::split_ws(cols[1]).empty() ? std::string_view{} : detail::split_ws(cols[1])[0]);
        if (!s || *s != p.tidset.size()) throw ParseError("support does not match tidset size", lineno);
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace abacus
