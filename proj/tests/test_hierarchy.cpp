#include "doctest.h"

#include <algorithm>
#include <climits>
#include <vector>

#include "hieram/hierarchy.hpp"
#include "oracles.hpp"

using namespace hieram;

namespace {

std::vector<Site> collect(SiteRange r) { return {r.begin(), r.end()}; }

} // namespace

TEST_CASE("truncation sizes")
{
    CHECK(Truncation(HierarchySpec::homogeneous(2, 3)).sizes() == std::vector<std::size_t>{1, 2, 4, 8});
    CHECK(Truncation(HierarchySpec::homogeneous(3, 2)).sizes() == std::vector<std::size_t>{1, 3, 9});
    const Truncation mixed(HierarchySpec::with_branching({2, 3}, 2));
    CHECK(mixed.sizes() == std::vector<std::size_t>{1, 2, 6});
    CHECK(mixed.site_count() == 6);
    CHECK(build_truncation(HierarchySpec::homogeneous(2, 0)).site_count() == 1);
}

TEST_CASE("invalid hierarchies are rejected")
{
    CHECK_THROWS_AS(HierarchySpec::homogeneous(1, 3), std::invalid_argument);
    CHECK_THROWS_AS(HierarchySpec::homogeneous(2, -1), std::invalid_argument);
    CHECK_THROWS_AS(HierarchySpec::with_branching({2, 1}, 2), std::invalid_argument);
    CHECK_THROWS_AS(HierarchySpec::with_branching({2}, 2), std::invalid_argument);
    CHECK_THROWS(Truncation(HierarchySpec::homogeneous(2, 70)));
}

TEST_CASE("branching beyond an explicit list is unknown")
{
    const auto spec = HierarchySpec::with_branching({2, 3}, 1);
    CHECK(spec.branch(0) == 1);
    CHECK(spec.branch(2) == 3);
    CHECK(spec.known_ranks() == 2);
    CHECK_THROWS_AS(spec.branch(3), std::out_of_range);
    CHECK(HierarchySpec::homogeneous(4, 2).known_ranks() == INT_MAX);
    CHECK(HierarchySpec::homogeneous(4, 2).size(10) == doctest::Approx(1048576.0));
}

TEST_CASE("cluster addressing")
{
    const Truncation t(HierarchySpec::homogeneous(2, 3));
    const auto c = cluster_of(t, 5, 2);
    CHECK(c.rank == 2);
    CHECK(c.index == 1);
    CHECK(collect(cluster_members(t, c)) == std::vector<Site>{4, 5, 6, 7});
    for (Site x = 0; x < 8; ++x)
        CHECK(collect(t.members(t.cluster_of(x, 0))) == std::vector<Site>{x});
    CHECK(collect(t.members({3, 0})) == std::vector<Site>{0, 1, 2, 3, 4, 5, 6, 7});
    CHECK(collect(t.members({1, 2})) == std::vector<Site>{4, 5});
    CHECK(collect(t.members({0, 5})) == std::vector<Site>{5});

    const Truncation t3(HierarchySpec::homogeneous(3, 2));
    CHECK(collect(t3.members(t3.cluster_of(7, 1))) == std::vector<Site>{6, 7, 8});

    CHECK_THROWS_AS(t.cluster_of(8, 1), std::out_of_range);
    CHECK_THROWS_AS(t.cluster_of(0, 4), std::out_of_range);
    CHECK_THROWS_AS(t.members({1, 4}), std::out_of_range);
}

TEST_CASE("distance examples")
{
    const Truncation t(HierarchySpec::homogeneous(2, 3));
    CHECK(distance(t, 3, 3) == 0);
    CHECK(t.distance(0, 1) == 1);
    CHECK(t.distance(0, 2) == 2);
    CHECK(t.distance(0, 4) == 3);
    CHECK(t.distance(0, 7) == std::max(t.distance(0, 2), t.distance(2, 7)));
    CHECK_THROWS_AS(t.distance(0, 8), std::out_of_range);
}

TEST_CASE("distance matches the digit oracle and is an ultrametric")
{
    const std::vector<HierarchySpec> specs = {
        HierarchySpec::homogeneous(2, 3), HierarchySpec::homogeneous(3, 3),
        HierarchySpec::with_branching({3, 2, 2}, 3), HierarchySpec::with_branching({2, 3}, 2)};
    for (const auto& spec : specs) {
        const Truncation t(spec);
        const auto b = oracle::branching_of(spec);
        const std::size_t N = t.site_count();
        for (Site x = 0; x < N; ++x)
            for (Site y = 0; y < N; ++y) {
                const int dxy = t.distance(x, y);
                REQUIRE(dxy == oracle::distance(x, y, b));
                CHECK(dxy == t.distance(y, x));
                CHECK((dxy == 0) == (x == y));
                for (int r = dxy; r <= t.depth(); ++r)
                    CHECK(t.cluster_of(x, r) == t.cluster_of(y, r));
                for (Site z = 0; z < N; ++z)
                    CHECK(t.distance(x, z) <= std::max(dxy, t.distance(y, z)));
            }
    }
}

TEST_CASE("clusters partition the lattice and nest")
{
    const Truncation t(HierarchySpec::with_branching({2, 3, 2}, 3));
    for (int r = 0; r <= t.depth(); ++r) {
        std::vector<int> hits(t.site_count(), 0);
        for (std::size_t i = 0; i < t.cluster_count(r); ++i) {
            const auto q = t.members({r, i});
            CHECK(q.size() == t.size(r));
            for (Site x : q) {
                ++hits[x];
                CHECK(t.cluster_of(x, r).index == i);
            }
            if (r > 0) {
                std::vector<std::size_t> children;
                for (Site x : q)
                    children.push_back(t.cluster_of(x, r - 1).index);
                children.erase(std::unique(children.begin(), children.end()), children.end());
                CHECK(children.size() == static_cast<std::size_t>(t.spec().branch(r)));
            }
        }
        CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    }
}

TEST_CASE("prefix truncation")
{
    const Truncation t(HierarchySpec::with_branching({2, 3, 2}, 3));
    const auto p = t.prefix(2);
    CHECK(p.depth() == 2);
    CHECK(p.site_count() == 6);
    CHECK(p.distance(0, 5) == t.distance(0, 5));
}
