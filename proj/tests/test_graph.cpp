#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "oracles.hpp"

using namespace abacus;
using namespace abacus::testing;

namespace {

MultidimNetwork parse(const std::string& text) {
    std::istringstream in(text);
    return read_edgelist(in);
}

}  // namespace

TEST(EdgeList, DuplicateTriplesSumWeights) {
    const auto net = parse("a b kdd 1\nb a kdd 2\n");
    EXPECT_EQ(net.num_nodes(), 2u);
    EXPECT_EQ(net.num_dimensions(), 1u);
    ASSERT_EQ(net.num_edges(), 1u);
    EXPECT_DOUBLE_EQ(net.edges()[0].weight, 3.0);
}

TEST(EdgeList, EmptyInput) {
    const auto net = parse("");
    EXPECT_EQ(net.num_nodes(), 0u);
    EXPECT_EQ(net.num_edges(), 0u);
    EXPECT_TRUE(split(net).empty());
}

TEST(EdgeList, CommentsAndDefaultWeight) {
    const auto net = parse("# header\n\nx y d\n   # indented comment\ny z d 2.5\n");
    ASSERT_EQ(net.num_edges(), 2u);
    EXPECT_DOUBLE_EQ(net.edges()[0].weight, 1.0);
    EXPECT_DOUBLE_EQ(net.edges()[1].weight, 2.5);
    EXPECT_EQ(net.nodes().names(), (std::vector<std::string>{"x", "y", "z"}));
}

TEST(EdgeList, MalformedLinesReportLineNumber) {
    try {
        parse("a b d 1\na b\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    try {
        parse("a b d 1\n\nc d e heavy\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
    EXPECT_THROW(parse("a b c d e\n"), ParseError);
}

TEST(EdgeList, RejectsBadWeightsAndSelfLoops) {
    EXPECT_THROW(parse("a b d 0\n"), ValidationError);
    EXPECT_THROW(parse("a b d -1\n"), ValidationError);
    EXPECT_THROW(parse("a b d nan\n"), ValidationError);
    EXPECT_THROW(parse("a a d 1\n"), ValidationError);
}

TEST(EdgeList, ToyFixtureCounts) {
    const auto net = load_edgelist(sample("toy.edges"));
    EXPECT_EQ(net.num_nodes(), 6u);
    ASSERT_EQ(net.num_dimensions(), 3u);
    EXPECT_EQ(net.slice(net.dimensions().at("VLDB")).size(), 6u);
    EXPECT_EQ(net.slice(net.dimensions().at("KDD")).size(), 5u);
    EXPECT_EQ(net.slice(net.dimensions().at("PKDD")).size(), 1u);
}

TEST(EdgeList, RoundTripPreservesRegistriesAndEdges) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto net = random_network(rng, 12, 3, 0.3);
        // Registries of a loaded network follow first appearance, so a loaded network
        // writes a fixed point while the generated one may order endpoints differently.
        std::ostringstream original;
        write_edgelist(original, net);
        const auto loaded = parse(original.str());
        std::set<std::tuple<std::string, std::string, std::string, double>> want, got;
        auto named = [](const MultidimNetwork& m, std::set<std::tuple<std::string, std::string, std::string, double>>& into) {
            for (const Edge& e : m.edges()) {
                auto a = m.nodes().name(e.u), b = m.nodes().name(e.v);
                if (b < a) std::swap(a, b);
                into.emplace(a, b, m.dimensions().name(e.dim), e.weight);
            }
        };
        named(net, want);
        named(loaded, got);
        EXPECT_EQ(got, want);
        std::ostringstream first;
        write_edgelist(first, loaded);
        const auto relo = parse(first.str());
        std::ostringstream second;
        write_edgelist(second, relo);
        const auto reloaded = parse(second.str());
        EXPECT_EQ(reloaded.nodes(), loaded.nodes());
        EXPECT_EQ(reloaded.dimensions(), loaded.dimensions());
        ASSERT_EQ(reloaded.num_edges(), loaded.num_edges());
        for (std::size_t i = 0; i < loaded.num_edges(); ++i) EXPECT_EQ(reloaded.edges()[i], loaded.edges()[i]);
        EXPECT_EQ(second.str(), first.str());
    }
}

TEST(Network, UndirectedCanonicalOrderAndLookup) {
    const auto net = parse("b a d1 2\nc b d2\n");
    const auto a = net.nodes().at("a"), b = net.nodes().at("b"), c = net.nodes().at("c");
    const auto d1 = net.dimensions().at("d1"), d2 = net.dimensions().at("d2");
    for (const Edge& e : net.edges()) EXPECT_LT(e.u, e.v);
    EXPECT_EQ(net.weight(a, b, d1), 2.0);
    EXPECT_EQ(net.weight(b, a, d1), 2.0);
    EXPECT_FALSE(net.weight(a, b, d2).has_value());
    EXPECT_TRUE(net.belongs_to(c, d2));
    EXPECT_FALSE(net.belongs_to(c, d1));
    EXPECT_THROW(net.neighbors(7), LookupError);
}

TEST(Split, SingleDimensionIsIdentitySlice) {
    const auto net = parse("a b x 1\nb c x 2\n");
    const auto slices = split(net);
    ASSERT_EQ(slices.size(), 1u);
    EXPECT_EQ(slices[0].num_nodes(), 3u);
    EXPECT_EQ(slices[0].num_edges(), 2u);
    const auto edges = slices[0].edges();
    ASSERT_EQ(edges.size(), 2u);
    EXPECT_DOUBLE_EQ(edges[0].weight, 1.0);
    EXPECT_DOUBLE_EQ(edges[1].weight, 2.0);
}

TEST(Split, ToyNodeSixOnlyInPkdd) {
    const auto net = load_edgelist(sample("toy.edges"));
    const auto slices = split(net);
    ASSERT_EQ(slices.size(), 3u);
    const auto six = net.nodes().at("6");
    for (const auto& g : slices) {
        const bool has = g.local_index(six).has_value();
        EXPECT_EQ(has, net.dimensions().name(g.dimension()) == "PKDD");
    }
}

TEST(Split, EmptyDimensionYieldsNoSlice) {
    NetworkBuilder b;
    b.add_dimension("unused");
    b.add_edge("a", "b", "used", 1.0);
    const auto net = std::move(b).build();
    const auto slices = split(net);
    ASSERT_EQ(slices.size(), 1u);
    EXPECT_EQ(net.dimensions().name(slices[0].dimension()), "used");
}

TEST(Split, SlicesPartitionEdgesAndMatchMembershipPredicate) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 25; ++trial) {
        const auto net = random_network(rng, 15, 4, 0.2);
        std::multiset<std::tuple<node_id, node_id, dim_id, double>> parent, merged;
        for (const Edge& e : net.edges()) parent.emplace(e.u, e.v, e.dim, e.weight);
        for (const auto& g : split(net)) {
            for (const auto& e : g.edges()) merged.emplace(e.u, e.v, g.dimension(), e.weight);
            for (node_id n = 0; n < net.num_nodes(); ++n)
                EXPECT_EQ(g.local_index(n).has_value(), net.belongs_to(n, g.dimension()));
            for (std::uint32_t i = 0; i < g.num_nodes(); ++i) EXPECT_GE(g.degree(i), 1u);
        }
        EXPECT_EQ(parent, merged);
    }
}

TEST(EdgesAmong, SmallCases) {
    const auto net = parse("u v x\nu v y\nw z x\n");
    const auto u = net.nodes().at("u"), v = net.nodes().at("v"), w = net.nodes().at("w");
    const auto x = net.dimensions().at("x"), y = net.dimensions().at("y");
    const std::vector<node_id> pair{u, v}, disjoint{u, w};
    const std::vector<dim_id> both{x, y};
    EXPECT_EQ(edges_among(net, pair, both), 2u);
    EXPECT_EQ(edges_among(net, disjoint, both), 0u);
    const std::vector<node_id> unknown{u, 99};
    EXPECT_THROW(edges_among(net, unknown, both), LookupError);
    const std::vector<dim_id> bad_dim{7};
    EXPECT_THROW(edges_among(net, pair, bad_dim), LookupError);
}

TEST(EdgesAmong, MatchesExhaustiveScan) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const auto net = random_network(rng, 14, 3, 0.3);
        std::vector<node_id> nodes;
        std::bernoulli_distribution pick(0.5);
        for (node_id n = 0; n < net.num_nodes(); ++n)
            if (pick(rng)) nodes.push_back(n);
        std::vector<dim_id> dims;
        for (dim_id d = 0; d < net.num_dimensions(); ++d)
            if (pick(rng)) dims.push_back(d);
        EXPECT_EQ(edges_among(net, nodes, dims), scan_edges_among(net, nodes, dims));
    }
}
