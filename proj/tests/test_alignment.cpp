#include <gtest/gtest.h>

#include "sqaoa/alignment.hpp"
#include "sqaoa/error.hpp"

using namespace sqaoa;

namespace {

// Containment of sorted level sets, checked element by element.
bool subset(const std::vector<Bitstring>& a, const std::vector<Bitstring>& b) {
    for (auto x : a)
        if (std::find(b.begin(), b.end(), x) == b.end()) return false;
    return true;
}

int reference_prefix_alignment(const Graph& a, const Graph& b) {
    const auto sa = spectrum(a), sb = spectrum(b);
    int k = 0;
    while (k < static_cast<int>(std::min(sa.levels.size(), sb.levels.size()))) {
        const auto& x = sa.levels[static_cast<std::size_t>(k)].members;
        const auto& y = sb.levels[static_cast<std::size_t>(k)].members;
        if (!subset(x, y) && !subset(y, x)) break;
        ++k;
    }
    return k;
}

}  // namespace

TEST(Alignment, SelfAlignmentCountsEveryLevel) {
    auto rng = make_rng(0);
    for (int t = 0; t < 100; ++t) {
        const int n = 2 + static_cast<int>(uniform_below(rng, 4));
        const int m = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n * (n - 1) / 2) + 1));
        const auto g = generate_random_graph(n, m, rng());
        EXPECT_EQ(aligned_levels(g, g).aligned_levels, static_cast<int>(spectrum(g).levels.size()));
    }
}

TEST(Alignment, PathVersusSingleEdge) {
    const Graph p3{3, {{0, 1}, {1, 2}}};
    const Graph edge{3, {{0, 1}}};
    const auto r = aligned_levels(p3, edge);
    EXPECT_EQ(r.aligned_levels, 1);
    EXPECT_TRUE(r.ground_state_aligned);
    ASSERT_EQ(r.levels.size(), 2u);
    EXPECT_EQ(r.levels[0].containment, Containment::first_in_second);
    EXPECT_EQ(r.levels[1].containment, Containment::none);
}

TEST(Alignment, EmptySparsificationContainsGround) {
    const auto g = generate_random_graph(6, 10, 1);
    EXPECT_GE(aligned_levels(g, Graph{6, {}}).aligned_levels, 1);
}

TEST(Alignment, PrefixRuleMatchesReference) {
    auto rng = make_rng(2);
    for (int t = 0; t < 200; ++t) {
        const auto g = generate_random_graph(7, 12, rng());
        const auto s = g.filter_edges([&](std::size_t) { return uniform01(rng) < 0.6; });
        EXPECT_EQ(aligned_levels(g, s).aligned_levels, reference_prefix_alignment(g, s));
        EXPECT_GE(aligned_levels(g, s, AlignmentRule::largest_index).aligned_levels,
                  aligned_levels(g, s).aligned_levels);
    }
}

TEST(Alignment, VertexCountMismatch) {
    EXPECT_THROW(aligned_levels(Graph{3, {}}, Graph{4, {}}), InputError);
}

TEST(AlignmentStudy, Buckets) {
    EXPECT_TRUE(alignment_ratio_study(std::vector<AlignmentInstance>{}).rows.empty());
    const auto study = alignment_ratio_study(std::vector<AlignmentInstance>{
        {0, 0.70, 0.80}, {0, 0.75, 0.80}, {2, 0.85, 0.80}, {3, 0.90, 0.80}, {1, 0.80, 0.80}});
    ASSERT_EQ(study.buckets.size(), 4u);
    EXPECT_EQ(study.buckets[0].aligned_levels, 0);
    EXPECT_EQ(study.buckets[0].count, 2u);
    EXPECT_NEAR(study.buckets[0].mean_delta, -0.075, 1e-12);
    EXPECT_NEAR(*study.mean_delta(2), 0.075, 1e-12);
    EXPECT_NEAR(*study.mean_delta(0, 0), -0.075, 1e-12);
    EXPECT_FALSE(study.mean_delta(5).has_value());
    EXPECT_THROW(alignment_ratio_study(std::vector<AlignmentInstance>{{0, 1.2, 0.5}}), InputError);
}

TEST(AlignmentStudy, IdenticalRunsGiveZeroDelta) {
    const auto g = generate_random_graph(6, 9, 4);
    const auto study = alignment_ratio_study(std::vector<AlignmentCase>{{g, g, 0.83, 0.83}});
    ASSERT_EQ(study.rows.size(), 1u);
    EXPECT_EQ(study.rows[0].aligned_levels, static_cast<int>(spectrum(g).levels.size()));
    EXPECT_EQ(study.rows[0].ratio_delta, 0.0);
}
