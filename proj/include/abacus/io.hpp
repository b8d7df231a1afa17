#pragma once

// Text records for communities, lattices and distributions.

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "abacus/errors.hpp"
#include "abacus/graph.hpp"
#include "abacus/pipeline.hpp"

namespace abacus {

/// Communities together with the name registries their ids refer to.
struct CommunitySet {
    Registry nodes;
    Registry dimensions;
    std::vector<MultidimCommunity> communities;
};

namespace detail {

inline std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> cols;
    for (std::size_t tab; (tab = line.find('\t')) != std::string_view::npos; line.remove_prefix(tab + 1)) cols.push_back(line.substr(0, tab));
    cols.push_back(line);
    return cols;
}

inline void write_memberships(std::ostream& out, const Registry& dims, std::span<const Membership> ms) {
    for (std::size_t k = 0; k < ms.size(); ++k) out << (k ? " " : "") << dims.name(ms[k].dimension) << ':' << ms[k].community;
}

}  // namespace detail

inline constexpr std::string_view community_header = "# id\tmemberships\tsupport\tsize\tmcd\tcomponents\tnodes";

/// One tab-separated record per community; record id = position.
inline void write_communities(std::ostream& out, const Registry& nodes, const Registry& dims, std::span<const MultidimCommunity> communities) {
    out << community_header << '\n';
    for (std::size_t i = 0; i < communities.size(); ++i) {
        const auto& c = communities[i];
        out << i << '\t';
        detail::write_memberships(out, dims, c.memberships);
        out << '\t' << c.support << '\t' << c.size << '\t' << (c.mcd ? detail::format_double(*c.mcd) : "NA") << '\t' << c.components << '\t';
        for (std::size_t k = 0; k < c.nodes.size(); ++k) out << (k ? " " : "") << nodes.name(c.nodes[k]);
        out << '\n';
    }
}

inline void write_communities(std::ostream& out, const MultidimNetwork& net, std::span<const MultidimCommunity> communities) {
    write_communities(out, net.nodes(), net.dimensions(), communities);
}

inline void write_communities(std::ostream& out, const CommunitySet& set) {
    write_communities(out, set.nodes, set.dimensions, set.communities);
}

inline CommunitySet read_communities(std::istream& in) {
    CommunitySet set;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line.front() == '#') continue;
        const auto cols = detail::split_tabs(line);
        if (cols.size() != 7) throw ParseError("expected 7 tab-separated columns", lineno);
        MultidimCommunity c;
        for (auto tok : detail::split_ws(cols[1])) {
            const auto colon = tok.rfind(':');
            if (colon == std::string_view::npos || colon == 0) throw ParseError("membership must be 'dimension:community'", lineno);
            auto community = detail::parse_uint<community_id>(tok.substr(colon + 1));
            if (!community) throw ParseError("bad community label in '" + std::string(tok) + "'", lineno);
            c.memberships.push_back(Membership{set.dimensions.intern(tok.substr(0, colon)), *community});
        }
        std::sort(c.memberships.begin(), c.memberships.end());
        for (auto tok : detail::split_ws(cols[6])) c.nodes.push_back(set.nodes.intern(tok));
        std::sort(c.nodes.begin(), c.nodes.end());

        auto support = detail::parse_uint<std::size_t>(cols[2]);
        auto size = detail::parse_uint<std::size_t>(cols[3]);
        auto components = detail::parse_uint<std::size_t>(cols[5]);
        if (!support || !size || !components) throw ParseError("bad numeric field", lineno);
        if (*support != c.nodes.size()) throw ParseError("support does not match node list", lineno);
        c.support = *support;
        c.size = *size;
        c.components = *components;
        if (cols[4] != "NA") {
            auto mcd = detail::parse_double(cols[4]);
            if (!mcd) throw ParseError("bad mcd value", lineno);
            c.mcd = *mcd;
        }
        set.communities.push_back(std::move(c));
    }
    return set;
}

inline CommunitySet load_communities(const std::string& path) {
    auto in = detail::open_input(path);
    return read_communities(in);
}

/// Vertex lines `v id support memberships`, then cover-edge lines `e from to`.
inline void write_lattice(std::ostream& out, const Registry& dims, std::span<const MultidimCommunity> communities, const Lattice& lattice) {
    out << "# v\tid\tsupport\tmemberships\n";
    for (std::size_t i = 0; i < communities.size(); ++i) {
        out << "v\t" << i << '\t' << communities[i].support << '\t';
        detail::write_memberships(out, dims, communities[i].memberships);
        out << '\n';
    }
    out << "# e\tfrom\tto\n";
    for (auto [p, q] : lattice.edges) out << "e\t" << p << '\t' << q << '\n';
}

/// Plain node sets, one per line, whitespace-separated node names.
inline std::vector<std::vector<std::string>> read_node_sets(std::istream& in) {
    std::vector<std::vector<std::string>> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto fields = detail::split_ws(line);
        if (detail::is_comment_or_blank(fields)) continue;
        out.emplace_back(fields.begin(), fields.end());
    }
    return out;
}

/// Node sets of a community file (by name) or of a plain node-set file.
inline std::vector<std::vector<std::string>> load_named_node_sets(const std::string& path) {
    std::string first;
    {
        auto in = detail::open_input(path);
        std::getline(in, first);
    }
    auto in = detail::open_input(path);
    if (first == community_header) {
        const auto set = read_communities(in);
        std::vector<std::vector<std::string>> out;
        for (const auto& c : set.communities) {
            auto& names = out.emplace_back();
            for (auto n : c.nodes) names.push_back(set.nodes.name(n));
        }
        return out;
    }
    return read_node_sets(in);
}

inline void write_distributions(std::ostream& out, std::span<const Distribution> dists) {
    out << "measure,threshold,fraction,count\n";
    for (const auto& d : dists) {
        for (const auto& p : d.points)
            out << d.measure << ',' << detail::format_double(p.threshold) << ',' << detail::format_double(p.fraction) << ',' << p.count << '\n';
    }
}

}  // namespace abacus
