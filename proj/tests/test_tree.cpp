#include <doctest.h>

#include <sstream>

#include "uict/error.hpp"
#include "uict/tree.hpp"
#include "uict/tree_sampling.hpp"

using namespace uict;

TEST_SUITE("tree") {

TEST_CASE("single edge and short paths") {
    const auto t = PlanarTree::from_preorder_counts(std::vector<std::uint32_t>{0});
    CHECK(t.edge_count() == 1);
    CHECK(t.height() == 1);
    const auto st = tree_stats(t);
    CHECK(st.level_sizes[1] == 1);
    CHECK(st.ball_sizes[1] == 1);

    const auto path = PlanarTree::from_preorder_counts(std::vector<std::uint32_t>{1, 1, 0});
    CHECK(path.height() == 3);
    CHECK(tree_stats(path).ball_sizes[2] == 2);
    CHECK(tree_stats(path).ball_sizes[3] == 3);
}

TEST_CASE("level order and preorder agree") {
    // Root child a has children u (2 kids) and v (leaf).
    const auto t = PlanarTree::from_preorder_counts(std::vector<std::uint32_t>{2, 2, 0, 0, 0});
    CHECK(t.level_order_counts() == std::vector<std::uint32_t>{1, 2, 2, 0, 0, 0});
    CHECK(t.preorder_counts() == std::vector<std::uint32_t>{2, 2, 0, 0, 0});
    CHECK(t.level_size(2) == 2);
    CHECK(t.level_size(3) == 2);
    CHECK(t.depth(0) == 0);
    CHECK(t.depth(1) == 1);
    CHECK(t.depth(5) == 3);
    CHECK(t.parent(4) == 2);
    CHECK(t.first_child(2) == 4);
    CHECK(t.degree(1) == 3);
    CHECK(t.degree(0) == 1);
}

TEST_CASE("malformed child counts are rejected") {
    CHECK_THROWS_AS(PlanarTree::from_preorder_counts(std::vector<std::uint32_t>{}), FormatError);
    CHECK_THROWS_AS(PlanarTree::from_preorder_counts(std::vector<std::uint32_t>{1}), FormatError);
    CHECK_THROWS_AS(PlanarTree::from_preorder_counts(std::vector<std::uint32_t>{0, 0}), FormatError);
    CHECK_THROWS_AS(PlanarTree::from_level_order({2, 0, 0}), FormatError);
    CHECK_THROWS_AS(PlanarTree::from_level_order({1, 3, 0}), FormatError);
}

TEST_CASE("PTREE format") {
    const auto t = PlanarTree::from_preorder_counts(std::vector<std::uint32_t>{0});
    CHECK(serialize_tree(t) == "PTREE 1\n1\n0\n");
    const auto path = PlanarTree::from_preorder_counts(std::vector<std::uint32_t>{1, 0});
    CHECK(serialize_tree(path) == "PTREE 1\n2\n1 0\n");
    CHECK(deserialize_tree("# comment\nPTREE 1\n2\n1\n0\n") == path);

    CHECK_THROWS_AS(deserialize_tree(""), FormatError);
    CHECK_THROWS_AS(deserialize_tree("PTREE 2\n1\n0\n"), FormatError);
    CHECK_THROWS_AS(deserialize_tree("PTREE 1\n2\n0 0\n"), FormatError);
    CHECK_THROWS_AS(deserialize_tree("PTREE 1\n3\n1 0\n"), FormatError);
    CHECK_THROWS_AS(deserialize_tree("PTREE 1\n2\n1 x\n"), FormatError);
    CHECK_THROWS_AS(deserialize_tree("PTREE 1\n2\n1 -1\n"), FormatError);
}

TEST_CASE("random trees round trip") {
    Rng rng(5);
    const auto d = make_geometric();
    for (int i = 0; i < 20; ++i) {
        const auto t = sample_gw_tree_conditioned(d, 10000, rng);
        CHECK(deserialize_tree(serialize_tree(t)) == t);
        CHECK(PlanarTree::from_preorder_counts(t.preorder_counts()) == t);
        CHECK(PlanarTree::from_level_order(t.level_order_counts()) == t);
    }
    const OffspringSampler s(d);
    const auto k = sample_kesten_tree(s, 40, rng);
    const auto back = deserialize_tree(serialize_tree(k.tree));
    CHECK(back == k.tree);
    CHECK(back.truncation_height() == 40);
}

}
