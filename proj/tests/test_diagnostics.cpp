#include "doctest.h"

#include <algorithm>
#include <numbers>
#include <random>

#include "hieram/diagnostics.hpp"
#include "hieram/greens.hpp"
#include "oracles.hpp"

using namespace hieram;
using doctest::Approx;

TEST_CASE("energy grid")
{
    const EnergyGrid g{-1.0, 1.0, 5};
    CHECK(g.spacing() == 0.5);
    CHECK(g.values() == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
    const auto c = EnergyGrid::covering(DistributionSpec(UniformDist{0.0, 1.0}));
    CHECK(c.min == -0.5);
    CHECK(c.max == 1.5);
    CHECK(c.points == 2001);
}

TEST_CASE("measure bound formula")
{
    CHECK(measure_bound(2, 1000.0) == Approx(0.2530).epsilon(1e-3));
}

TEST_CASE("response norm against a dense solve")
{
    const auto seq = make_coupling(Geometric{4.0});
    const Truncation t(HierarchySpec::homogeneous(2, 5));
    const auto omega = sample_potential(DistributionSpec(UniformDist{}), t, 4, 0).values;
    for (double e : {-0.7, 0.1, 0.55, 1.3}) {
        const GreenCascade c(t, seq, omega, Complex(e, 0.0), 5);
        const auto G = oracle::resolvent(oracle::hamiltonian(t.spec(), seq, omega, 5), e);
        const oracle::CVec v = G * oracle::CVec::Ones(t.site_count());
        CHECK(c.cluster_response_norm2({5, 0}) == Approx(v.squaredNorm()).epsilon(1e-9));
    }
}

TEST_CASE("measure bound check")
{
    const auto seq = make_coupling(Geometric{4.0});
    const Truncation t(HierarchySpec::homogeneous(2, 6));
    const EnergyGrid grid{-0.7, 1.7, 2001};
    for (std::uint64_t i = 0; i < 5; ++i) {
        const auto omega = sample_potential(DistributionSpec(UniformDist{}), t, 17, i).values;
        const double M = std::pow(36.0 * 64.0, 2);
        const auto rep = measure_bound_check(t, seq, omega, 6, M, grid);
        CHECK(rep.covers_spectrum);
        CHECK(rep.pass);
        CHECK(rep.bound == Approx(4.0 * 64.0 / std::sqrt(M)));
        CHECK(rep.empirical <= rep.bound + rep.allowance);
        // M -> infinity: only cells touching poles remain
        const auto huge = measure_bound_check(t, seq, omega, 6, 1e30, grid);
        CHECK(huge.empirical <= huge.allowance);
    }
    // a grid that misses the spectrum cannot certify the bound
    const auto omega = sample_potential(DistributionSpec(UniformDist{}), t, 17, 0).values;
    CHECK_FALSE(measure_bound_check(t, seq, omega, 6, 1e4, EnergyGrid{0.0, 1.0, 101}).pass);
    CHECK_THROWS_AS(measure_bound_check(t, seq, omega, 6, 1e4, EnergyGrid{0.0, 1.0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(measure_bound_check(t, seq, omega, 6, 1e4, EnergyGrid{1.0, 0.0, 11}), std::invalid_argument);
}

TEST_CASE("measure bound check on a sub-cluster")
{
    const auto seq = make_coupling(Geometric{4.0});
    const Truncation t(HierarchySpec::homogeneous(2, 6));
    const auto omega = sample_potential(DistributionSpec(UniformDist{}), t, 2, 0).values;
    const auto rep = measure_bound_check(t, seq, omega, 3, 1e4, EnergyGrid{-1.0, 2.0, 601}, 5);
    // the same check on the extracted block
    const std::vector<double> block(omega.begin() + 40, omega.begin() + 48);
    const auto ref = measure_bound_check(t.prefix(3), seq, block, 3, 1e4, EnergyGrid{-1.0, 2.0, 601});
    CHECK(rep.empirical == ref.empirical);
    CHECK(rep.sign_changes == ref.sign_changes);
}

TEST_CASE("borel-cantelli ledger")
{
    const PowerSequence u2{2.0};
    const auto rows = borel_cantelli_profile(make_coupling(Geometric{4.0}), HierarchySpec::homogeneous(2, 0), u2, 400);
    for (const auto& row : rows) {
        CHECK(row.ratio_sum == Approx(row.inverse_u_sum).epsilon(1e-14));
        CHECK(row.bound_term == Approx(4.0 * row.ratio_term).epsilon(1e-15));
        CHECK(row.M == Approx(std::pow(row.u * std::ldexp(1.0, row.r), 2)).epsilon(1e-14));
    }
    // partial sums of 1/r^2 approach pi^2/6 with remainder about 1/r
    CHECK(std::numbers::pi * std::numbers::pi / 6 - rows.back().inverse_u_sum == Approx(1.0 / 400.5).epsilon(1e-3));
    // second series: 3 * 4^{-r} 2^{r-1} (r-1)^2 r^2 sums to 156
    CHECK(rows.back().coupling_sum == Approx(156.0).epsilon(1e-12));

    const auto div = borel_cantelli_profile(make_coupling(Geometric{2.0}), HierarchySpec::homogeneous(2, 0), u2, 50);
    for (const auto& row : div)
        CHECK(row.coupling_term == Approx(0.5 * (row.r - 1.0) * (row.r - 1.0) * row.r * row.r).epsilon(1e-12));
    CHECK_THROWS_AS(borel_cantelli_profile(make_coupling(Geometric{2.0}), HierarchySpec::homogeneous(2, 0), u2, 0),
                    std::invalid_argument);
}

TEST_CASE("inverse participation ratio")
{
    std::vector<double> uniform(16, 0.25);
    CHECK(inverse_participation_ratio(uniform) == Approx(1.0 / 16));
    std::vector<double> delta(16, 0.0);
    delta[3] = 1.0;
    CHECK(inverse_participation_ratio(delta) == 1.0);

    const auto seq = make_coupling(Geometric{4.0});
    const Truncation t(HierarchySpec::homogeneous(2, 3));
    const auto free = ipr_profile(t, seq, std::vector<double>(8, 0.0), 3);
    REQUIRE(free.size() == 8);
    for (const auto& e : free) {
        CHECK(e.ipr >= 1.0 / 8 - 1e-12);
        CHECK(e.ipr <= 1.0 + 1e-12);
    }
    // the top eigenvector is uniform
    CHECK(free.back().ipr == Approx(1.0 / 8));

    // nondegenerate case: compare with Eigen's eigenvectors
    const Truncation big(HierarchySpec::homogeneous(2, 6));
    const auto omega = sample_potential(DistributionSpec(UniformDist{}), big, 8, 0).values;
    const auto prof = ipr_profile(big, seq, omega, 6);
    Eigen::SelfAdjointEigenSolver<oracle::Mat> es(oracle::hamiltonian(big.spec(), seq, omega, 6));
    for (std::size_t k = 0; k < prof.size(); ++k) {
        CHECK(prof[k].eigenvalue == Approx(es.eigenvalues()(k)).epsilon(1e-12));
        CHECK(prof[k].ipr == Approx(es.eigenvectors().col(k).array().pow(4).sum()).epsilon(1e-8));
    }
    CHECK_THROWS_AS(ipr_profile(big, seq, omega, 6, 0, 32), DenseCapExceeded);
}

TEST_CASE("median")
{
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
    CHECK(std::isnan(median({})));
}

TEST_CASE("localization sweep")
{
    SweepConfig cfg;
    cfg.hierarchy = HierarchySpec::homogeneous(2, 6);
    cfg.coupling = make_coupling(Geometric{4.0});
    cfg.disorder = DistributionSpec(UniformDist{0.0, 1.0});
    cfg.grid = EnergyGrid{-0.5, 1.5, 41};
    cfg.ranks = {0, 3, 5, 6};
    cfg.realizations = 4;
    cfg.seed = 99;
    cfg.site = 9;

    const auto rep = localization_sweep(cfg);
    CHECK(rep.cells.size() == 4 * 41 * 4);
    CHECK(rep.ratios.size() == 3);
    CHECK(rep.ipr.size() == 4 * 64);
    CHECK(rep.ipr_floor == Approx(1.0 / 64));
    REQUIRE(rep.median_mid_ipr);
    CHECK(*rep.median_mid_ipr >= rep.ipr_floor);

    // depth-0 rung: S_0(e) = (omega(x) - e)^{-2}
    const Truncation t(cfg.hierarchy);
    const auto omega = sample_potential(cfg.disorder, t, 99, 2).values;
    for (const auto& c : rep.cells)
        if (c.index == 2 && c.r == 0 && !c.skipped)
            CHECK(c.moment == Approx(1.0 / std::pow(omega[9] - c.energy, 2)).epsilon(1e-14));

    // order-independent reduction
    std::vector<RealizationResult> parts;
    for (std::uint64_t i = 0; i < 4; ++i)
        parts.push_back(sweep_realization(cfg, i));
    std::reverse(parts.begin(), parts.end());
    std::swap(parts[0], parts[2]);
    const auto again = reduce_sweep(cfg, parts);
    REQUIRE(again.cells.size() == rep.cells.size());
    for (std::size_t k = 0; k < rep.cells.size(); ++k) {
        CHECK(again.cells[k].index == rep.cells[k].index);
        CHECK(again.cells[k].moment == rep.cells[k].moment);
    }
    for (std::size_t k = 0; k < rep.ratios.size(); ++k)
        CHECK(again.ratios[k].median == rep.ratios[k].median);
    CHECK(again.median_mid_ipr == rep.median_mid_ipr);

    cfg.ranks = {0, 7};
    CHECK_THROWS_AS(sweep_realization(cfg, 0), std::out_of_range);
    cfg.ranks = {3, 2};
    CHECK_THROWS_AS(sweep_realization(cfg, 0), std::invalid_argument);
}

TEST_CASE("sweep reports pole hits as skipped cells")
{
    SweepConfig cfg;
    cfg.hierarchy = HierarchySpec::homogeneous(2, 2);
    cfg.coupling = make_coupling(Geometric{4.0});
    cfg.disorder = DistributionSpec(BernoulliDist{0.0, 0.5, 0.5});
    cfg.grid = EnergyGrid{0.0, 0.5, 3}; // hits both potential values exactly
    cfg.ranks = {0, 1, 2};
    cfg.realizations = 2;
    cfg.compute_ipr = false;
    const auto rep = localization_sweep(cfg);
    CHECK(rep.skipped_points >= 2);
    for (const auto& c : rep.cells)
        if (c.skipped)
            CHECK(c.moment == 0.0);
}
