#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hieram/coupling.hpp"
#include "hieram/disorder.hpp"
#include "hieram/errors.hpp"
#include "hieram/hierarchy.hpp"

namespace hieram {

// Uniform grid of `points` energies from min to max inclusive.
struct EnergyGrid
{
    double min = 0.0;
    double max = 1.0;
    std::size_t points = 2001;

    double spacing() const;
    double at(std::size_t i) const;
    std::vector<double> values() const;

    // [lo, 1 + hi] for potential values in [lo, hi]: contains sigma(H_omega).
    static EnergyGrid covering(const DistributionSpec& dist, std::size_t points = 2001);
};

// ---------------------------------------------------------------------------
// Measure of the set where the cluster response exceeds M.

struct BoundCheckReport
{
    int rank = 0;
    ClusterId cluster;
    double threshold = 0.0; // M
    EnergyGrid grid;
    double empirical = 0.0; // grid estimate of m({e : ||(H_r - e)^{-1} 1_Q||^2 >= M})
    double bound = 0.0;     // 4 N_r / sqrt(M)
    double allowance = 0.0; // spacing * sign changes
    std::size_t sign_changes = 0;
    std::size_t pole_points = 0;
    bool covers_spectrum = false;
    bool pass = false;
};

double measure_bound(std::size_t cluster_size, double threshold);

BoundCheckReport measure_bound_check(const Truncation& t, const CouplingSequence& seq,
                                     std::span<const double> potential, int r, double threshold,
                                     const EnergyGrid& grid, std::size_t cluster_index = 0);

// ---------------------------------------------------------------------------
// Summability ledger for M_r = (u_r N_r)^2.

struct BorelCantelliRow
{
    int r = 0;
    double u = 0.0;
    double M = 0.0;
    double bound_term = 0.0;       // 4 N_r / sqrt(M_r)
    double ratio_term = 0.0;       // N_r / sqrt(M_r)
    double ratio_sum = 0.0;        // running sum of ratio_term
    double inverse_u_sum = 0.0;    // running sum of 1 / u_r
    double coupling_term = 0.0;    // p_r sqrt(M_r M_{r-1}) / N_r
    double coupling_sum = 0.0;
};

std::vector<BorelCantelliRow> borel_cantelli_profile(const CouplingSequence& seq,
                                                     const HierarchySpec& spec,
                                                     const PowerSequence& u, int r_max);

// ---------------------------------------------------------------------------
// Inverse participation ratios of the eigenvectors of H_{omega,r} on one
// rank-r cluster.

struct IprEntry
{
    double eigenvalue = 0.0;
    double ipr = 0.0;
};

double inverse_participation_ratio(std::span<const double> normalized);

std::vector<IprEntry> ipr_profile(const Truncation& t, const CouplingSequence& seq,
                                  std::span<const double> potential, int r,
                                  std::size_t cluster_index = 0,
                                  std::size_t cap = kDefaultDenseCap);

// ---------------------------------------------------------------------------
// Localization sweep: S_r(e) ladders over an energy grid and disorder
// realizations, growth ratios, and IPR at the top rank.

struct SweepConfig
{
    HierarchySpec hierarchy = HierarchySpec::homogeneous(2, 1);
    CouplingSequence coupling = CouplingSequence(Geometric{4.0});
    DistributionSpec disorder = DistributionSpec(UniformDist{});
    EnergyGrid grid;
    std::vector<int> ranks;
    std::size_t realizations = 1;
    std::uint64_t seed = 0;
    Site site = 0;
    bool compute_ipr = true;
    double mid_fraction = 0.5; // central share of eigenvalues counted as mid-spectrum
};

struct MomentCell
{
    std::uint64_t seed = 0;
    std::uint64_t index = 0;
    double energy = 0.0;
    int r = 0;
    double moment = 0.0;
    bool skipped = false;
};

struct IprRow
{
    std::uint64_t index = 0;
    int r = 0;
    double eigenvalue = 0.0;
    double ipr = 0.0;
};

struct RealizationResult
{
    std::uint64_t index = 0;
    std::vector<MomentCell> cells; // energy-major, rank-minor
    std::vector<IprRow> ipr;
};

struct RatioSummary
{
    int r_from = 0;
    int r_to = 0;
    double median = 0.0;
    std::size_t samples = 0;
};

struct LocalizationReport
{
    std::vector<MomentCell> cells;
    std::vector<IprRow> ipr;
    std::vector<RatioSummary> ratios;
    std::size_t skipped_points = 0;
    std::optional<double> median_mid_ipr;
    double ipr_floor = 0.0; // 1 / N of the IPR block
};

double median(std::vector<double> values);

RealizationResult sweep_realization(const SweepConfig& cfg, std::uint64_t index);

// Reduction is by realization index, independent of the order of `parts`.
LocalizationReport reduce_sweep(const SweepConfig& cfg, std::vector<RealizationResult> parts);

LocalizationReport localization_sweep(const SweepConfig& cfg);

} // namespace hieram
