#include "doctest.h"

#include <cmath>

#include "hieram/operators.hpp"
#include "hieram/spectral.hpp"
#include "oracles.hpp"

using namespace hieram;
using doctest::Approx;

namespace {

std::vector<std::size_t> multiplicities(const std::vector<SpectralLine>& lines)
{
    std::vector<std::size_t> m;
    for (const auto& l : lines)
        m.push_back(l.multiplicity);
    return m;
}

} // namespace

TEST_CASE("exact cut-off multiplicities")
{
    const auto g = make_coupling(Geometric{2.0});
    const Truncation t2(HierarchySpec::homogeneous(2, 3));
    CHECK(multiplicities(exact_cutoff_spectrum(t2, g, 3)) == std::vector<std::size_t>{4, 2, 1, 1});
    const Truncation t3(HierarchySpec::homogeneous(3, 2));
    CHECK(multiplicities(exact_cutoff_spectrum(t3, g, 2)) == std::vector<std::size_t>{6, 2, 1});
    const auto zero = exact_cutoff_spectrum(t3, g, 0);
    REQUIRE(zero.size() == 1);
    CHECK(zero[0].location == 0.0);
    CHECK(zero[0].multiplicity == 1);
    CHECK_THROWS_AS(exact_cutoff_spectrum(t3, g, 3), std::out_of_range);

    const Truncation mixed(HierarchySpec::with_branching({3, 2, 4}, 3));
    for (int r = 0; r <= 3; ++r) {
        const auto lines = exact_cutoff_spectrum(mixed, g, r);
        std::size_t total = 0;
        for (std::size_t s = 0; s < lines.size(); ++s) {
            total += lines[s].multiplicity;
            CHECK(lines[s].location == Approx(g.lambda(static_cast<int>(s))));
        }
        CHECK(total == mixed.size(r));
    }
}

TEST_CASE("dense cut-off spectrum reproduces the exact one")
{
    for (const auto& spec : {HierarchySpec::homogeneous(2, 5), HierarchySpec::with_branching({3, 2, 2, 3}, 4)}) {
        const Truncation t(spec);
        const auto seq = make_coupling(Geometric{3.0});
        for (int r = 0; r <= t.depth(); ++r) {
            const auto exact = exact_cutoff_spectrum(t.prefix(r), seq, r);
            const auto ev = oracle::sorted_eigenvalues(oracle::cutoff_laplacian(t.prefix(r).spec(), seq, r));
            std::vector<double> sorted(ev.data(), ev.data() + ev.size());
            const auto lines = cluster_eigenvalues(sorted, 1e-9);
            REQUIRE(lines.size() == exact.size());
            for (std::size_t k = 0; k < lines.size(); ++k) {
                CHECK(lines[k].location == Approx(exact[k].location).epsilon(1e-9).scale(1.0));
                CHECK(lines[k].multiplicity == exact[k].multiplicity);
            }
        }
    }
}

TEST_CASE("restricted full spectrum")
{
    const auto seq = make_coupling(Geometric{4.0});
    const auto spec = HierarchySpec::homogeneous(2, 2);
    const Truncation t(spec);
    const auto lines = restricted_full_spectrum(t, seq, 2);
    REQUIRE(lines.size() == 3);
    double shift = 0.0;
    for (int s = 3; s < 80; ++s)
        shift += 3.0 * std::pow(4.0, -s) / std::pow(2.0, s);
    CHECK(lines[0].location == 0.0);
    CHECK(lines[0].multiplicity == 2);
    CHECK(lines[1].location == Approx(0.75));
    CHECK(lines[2].location == Approx(0.9375 + 4.0 * shift).epsilon(1e-14));

    const auto ev = oracle::sorted_eigenvalues(oracle::restricted_full(spec, seq));
    CHECK(ev(3) == Approx(lines[2].location).epsilon(1e-13));
    // the shifted top stays within sum_{j>R} p_j of lambda_R
    CHECK(lines[2].location - seq.lambda(2) <= seq.tail(2));

    const auto no_tail = make_coupling(Explicit{{0.5, 0.5}, 0.0});
    const auto a = restricted_full_spectrum(t, no_tail, 2);
    const auto b = exact_cutoff_spectrum(t, no_tail, 2);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k)
        CHECK(a[k].location == b[k].location);
}

TEST_CASE("limiting spectral measure")
{
    const auto seq = make_coupling(Geometric{4.0});
    const auto mu2 = limiting_spectral_measure(HierarchySpec::homogeneous(2, 0), seq, 10);
    for (int r = 0; r <= 10; ++r) {
        CHECK(mu2.atoms[r].weight == Approx(std::ldexp(1.0, -r - 1)).epsilon(1e-15));
        CHECK(mu2.atoms[r].location == Approx(seq.lambda(r)).epsilon(1e-15));
    }
    const auto mu3 = limiting_spectral_measure(HierarchySpec::homogeneous(3, 0), seq, 2);
    CHECK(mu3.atoms[0].weight == Approx(2.0 / 3));
    CHECK(mu3.atoms[1].weight == Approx(2.0 / 9));
    CHECK(mu3.atoms[2].weight == Approx(2.0 / 27));
    CHECK(mu3.declared_mass == Approx(1.0 - 1.0 / 27));
    CHECK(mu3.atom_mass() + mu3.upper_remainder == Approx(1.0).epsilon(1e-15));

    // mu([1 - tail(r), 1]) = 1 / N_r
    const auto mu = limiting_spectral_measure(HierarchySpec::homogeneous(3, 0), seq, 12);
    for (int r = 0; r <= 12; ++r) {
        double mass = mu.upper_remainder;
        for (const auto& a : mu.atoms)
            if (a.location >= seq.lambda(r) - 1e-15)
                mass += a.weight;
        CHECK(mass == Approx(std::pow(3.0, -r)).epsilon(1e-12));
    }
}

TEST_CASE("finite volume density of states")
{
    const auto seq = make_coupling(Geometric{4.0});
    const Truncation t(HierarchySpec::homogeneous(2, 3));
    const auto nu = finite_volume_dos(t, seq, 3);
    REQUIRE(nu.atoms.size() == 4);
    CHECK(nu.atoms[0].weight == Approx(4.0 / 8));
    CHECK(nu.atoms[1].weight == Approx(2.0 / 8));
    CHECK(nu.atoms[2].weight == Approx(1.0 / 8));
    CHECK(nu.atoms[3].weight == Approx(1.0 / 8));
    CHECK(nu.atoms[1].location == Approx(0.75));
    CHECK(nu.atoms[2].location == Approx(0.9375));
    CHECK(nu.atoms[3].location == Approx(restricted_full_spectrum(t, seq, 3)[3].location).epsilon(1e-12));
    CHECK(nu.atom_mass() == Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(finite_volume_dos(Truncation(HierarchySpec::homogeneous(2, 13)), seq, 13), DenseCapExceeded);
}

TEST_CASE("spectral dimension")
{
    CHECK(spectral_dimension(2, 4.0) == Approx(1.0));
    CHECK(spectral_dimension(2, 2.0) == Approx(2.0));
    CHECK(spectral_dimension(4, 2.0) == Approx(4.0));
    CHECK_FALSE(spectral_dimension(HierarchySpec::with_branching({2, 3}, 2), make_coupling(Geometric{2.0})));
    // the polynomial factor drops out of log mu / log t
    CHECK(spectral_dimension(HierarchySpec::homogeneous(2, 2), make_coupling(PolyGeometric{2, 0.3})) == 2.0);

    for (auto [n, rho] : {std::pair{2, 4.0}, {2, 2.0}, {4, 2.0}, {3, 5.0}}) {
        const auto seq = make_coupling(Geometric{rho});
        const auto mu = limiting_spectral_measure(HierarchySpec::homogeneous(n, 0), seq, 20);
        const double d = fit_spectral_dimension(mu, seq.tail(20), seq.tail(5));
        CHECK(d == Approx(spectral_dimension(n, rho)).epsilon(0.05));
    }
    const auto seq = make_coupling(Geometric{2.0});
    const auto mu = limiting_spectral_measure(HierarchySpec::homogeneous(2, 0), seq, 20);
    CHECK_THROWS_AS(fit_spectral_dimension(mu, seq.tail(6), seq.tail(5)), std::invalid_argument);
}

TEST_CASE("random walk classification")
{
    const auto t4 = walk_classification(HierarchySpec::homogeneous(4, 0), make_coupling(Geometric{2.0}), 60);
    CHECK(t4.classification == WalkClass::Transient);
    CHECK(t4.analytic);
    REQUIRE(t4.value);
    CHECK(*t4.value == Approx(1.5).epsilon(1e-12));
    CHECK(std::abs(t4.partial_sums.back() - 1.5) < 1e-6);
    for (std::size_t r = 1; r < t4.partial_sums.size(); ++r)
        CHECK(t4.partial_sums[r] >= t4.partial_sums[r - 1]);

    const auto r4 = walk_classification(HierarchySpec::homogeneous(2, 0), make_coupling(Geometric{4.0}), 30);
    CHECK(r4.classification == WalkClass::Recurrent);
    for (int s = 1; s <= 30; ++s)
        CHECK(r4.terms[s] == Approx(std::ldexp(1.0, s - 1)).epsilon(1e-12));

    const auto r2 = walk_classification(HierarchySpec::homogeneous(2, 0), make_coupling(Geometric{2.0}), 3000);
    CHECK(r2.classification == WalkClass::Recurrent);
    for (int s = 0; s <= 30; ++s)
        CHECK(r2.terms[s] == Approx(0.5).epsilon(1e-12));
    CHECK(r2.partial_sums.back() > 1000.0);

    // R = sum_r (1/N_r - 1/N_{r+1}) / tail(r), evaluated directly
    const auto seq = make_coupling(PolyGeometric{3, 0.5});
    const auto rep = walk_classification(HierarchySpec::homogeneous(3, 0), seq, 12);
    double direct = 0.0;
    for (int r = 0; r <= 12; ++r)
        direct += (std::pow(3.0, -r) - std::pow(3.0, -r - 1)) / seq.tail(r);
    CHECK(rep.partial_sums.back() == Approx(direct).epsilon(1e-12));
    CHECK_THROWS_AS(walk_classification(HierarchySpec::homogeneous(3, 0), seq, 0), std::invalid_argument);
}
