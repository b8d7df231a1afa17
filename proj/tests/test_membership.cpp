#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"

using namespace abacus;
using namespace abacus::testing;

namespace {

struct Toy {
    MultidimNetwork net = load_edgelist(sample("toy.edges"));
    AssignmentTable table = load_assignment_table(sample("toy.assign"), net);

    std::vector<CommunityAssignment> assignments() const {
        std::vector<CommunityAssignment> out;
        for (const auto& g : split(net)) out.push_back(fixed_assignment(g, table));
        return out;
    }

    item_id code(const MembershipTable& m, const char* dim, community_id c) const {
        return m.catalog.encode(Membership{net.dimensions().at(dim), c});
    }
};

std::vector<item_id> as_vector(std::span<const item_id> s) { return {s.begin(), s.end()}; }

}  // namespace

TEST(BuildMemberships, ToyTransactionsMatchTheHandBuiltTable) {
    const Toy toy;
    const auto m = build_memberships(toy.assignments(), toy.net.num_nodes());
    const item_id A = toy.code(m, "VLDB", 0), B = toy.code(m, "VLDB", 1);
    const item_id C = toy.code(m, "KDD", 0), E = toy.code(m, "KDD", 1);
    const item_id D = toy.code(m, "PKDD", 0);
    auto tx = [&](const char* node) { return as_vector(m.db.transaction(toy.net.nodes().at(node))); };
    auto sorted = [](std::vector<item_id> v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    EXPECT_EQ(tx("1"), sorted({A, B, C}));
    EXPECT_EQ(tx("2"), sorted({B, C, E}));
    EXPECT_EQ(tx("3"), sorted({A, B, C, E}));
    EXPECT_EQ(tx("5"), sorted({A, B, C, E}));
    EXPECT_EQ(tx("6"), (std::vector<item_id>{D}));
    // Node 4 also carries the singleton PKDD membership of its edge to node 6.
    EXPECT_EQ(tx("4"), sorted({B, E, toy.code(m, "PKDD", 1)}));
}

TEST(BuildMemberships, CatalogOrderIsDimensionThenCommunity) {
    const Toy toy;
    const auto m = build_memberships(toy.assignments(), toy.net.num_nodes());
    ASSERT_EQ(m.catalog.size(), 6u);
    for (item_id x = 1; x < m.catalog.size(); ++x) EXPECT_LT(m.catalog.decode(x - 1), m.catalog.decode(x));
}

TEST(BuildMemberships, EmptyAssignmentListGivesEmptyTransactions) {
    const auto m = build_memberships({}, 4);
    EXPECT_EQ(m.db.num_transactions(), 4u);
    for (std::size_t t = 0; t < 4; ++t) EXPECT_TRUE(m.db.transaction(t).empty());
    EXPECT_EQ(m.catalog.size(), 0u);
}

TEST(BuildMemberships, SingleCommunityGivesIdenticalSingletons) {
    std::istringstream in("a b x\nb c x\nc d x\n");
    const auto net = read_edgelist(in);
    const std::vector<CommunityAssignment> a{ConnectedComponents{}(split(net).front())};
    const auto m = build_memberships(a, net.num_nodes());
    for (std::size_t t = 0; t < net.num_nodes(); ++t) EXPECT_EQ(as_vector(m.db.transaction(t)), (std::vector<item_id>{0}));
}

TEST(BuildMemberships, DuplicateDimensionRejected) {
    std::istringstream in("a b x\n");
    const auto net = read_edgelist(in);
    const auto g = split(net).front();
    const std::vector<CommunityAssignment> twice{ConnectedComponents{}(g), ConnectedComponents{}(g)};
    EXPECT_THROW(build_memberships(twice, net.num_nodes()), DuplicateDimensionError);
}

TEST(BuildMemberships, NodesOutsideEverySliceKeepEmptyTransactions) {
    NetworkBuilder b;
    b.add_node("loner");
    b.add_edge("a", "b", "x", 1.0);
    const auto net = std::move(b).build();
    std::vector<CommunityAssignment> a{ConnectedComponents{}(split(net).front())};
    const auto m = build_memberships(a, net.num_nodes());
    EXPECT_TRUE(m.db.transaction(net.nodes().at("loner")).empty());
}

TEST(BuildMemberships, ViewsAgreeAndCountMatchesPresence) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const auto net = random_network(rng, 25, 4, 0.12);
        std::vector<CommunityAssignment> a;
        for (const auto& g : split(net)) a.push_back(LabelPropagation{7, 50}(g));
        const auto m = build_memberships(a, net.num_nodes());
        for (item_id x = 0; x < m.db.num_items(); ++x) {
            for (auto tid : m.db.tidset(x)) {
                auto t = m.db.transaction(tid);
                EXPECT_TRUE(std::binary_search(t.begin(), t.end(), x));
            }
        }
        for (node_id n = 0; n < net.num_nodes(); ++n) {
            auto t = m.db.transaction(n);
            EXPECT_TRUE(std::adjacent_find(t.begin(), t.end()) == t.end());
            std::size_t present = 0;
            for (dim_id d = 0; d < net.num_dimensions(); ++d) present += net.belongs_to(n, d);
            EXPECT_EQ(t.size(), present);
            for (auto x : t) {
                auto ts = m.db.tidset(x);
                EXPECT_TRUE(std::binary_search(ts.begin(), ts.end(), n));
            }
        }
    }
}

TEST(Decode, InvertsEncoding) {
    const Toy toy;
    const auto m = build_memberships(toy.assignments(), toy.net.num_nodes());
    for (item_id x = 0; x < m.catalog.size(); ++x) EXPECT_EQ(m.catalog.encode(m.catalog.decode(x)), x);
    for (auto membership : m.catalog.items()) EXPECT_EQ(m.catalog.decode(m.catalog.encode(membership)), membership);
    const std::vector<item_id> set{0, 3};
    const auto named = decode_named(m.catalog, toy.net, set);
    ASSERT_EQ(named.size(), 2u);
    EXPECT_EQ(named[0], (std::pair<std::string, community_id>{"VLDB", 0}));
    EXPECT_EQ(named[1], (std::pair<std::string, community_id>{"KDD", 1}));
    const std::vector<item_id> bad{42};
    EXPECT_THROW(decode(m.catalog, bad), LookupError);
}

TEST(TransactionExport, RoundTrip) {
    const Toy toy;
    const auto m = build_memberships(toy.assignments(), toy.net.num_nodes());
    std::ostringstream out;
    write_transactions(out, m.db);
    std::istringstream in(out.str());
    const auto back = read_transactions(in);
    ASSERT_EQ(back.num_transactions(), m.db.num_transactions());
    for (std::size_t t = 0; t < back.num_transactions(); ++t) EXPECT_EQ(as_vector(back.transaction(t)), as_vector(m.db.transaction(t)));

    std::istringstream with_empty("1 2\n-\n0\n");
    const auto db = read_transactions(with_empty);
    EXPECT_EQ(db.num_transactions(), 3u);
    EXPECT_TRUE(db.transaction(1).empty());
    std::istringstream junk("1 x\n");
    EXPECT_THROW(read_transactions(junk), ParseError);
}
