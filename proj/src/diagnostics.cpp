#include "hieram/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "hieram/dense.hpp"
#include "hieram/greens.hpp"
#include "hieram/operators.hpp"

namespace hieram {

double EnergyGrid::spacing() const
{
    return points > 1 ? (max - min) / static_cast<double>(points - 1) : 0.0;
}

double EnergyGrid::at(std::size_t i) const
{
    if (i + 1 == points)
        return max;
    return min + static_cast<double>(i) * spacing();
}

std::vector<double> EnergyGrid::values() const
{
    std::vector<double> out(points);
    for (std::size_t i = 0; i < points; ++i)
        out[i] = at(i);
    return out;
}

EnergyGrid EnergyGrid::covering(const DistributionSpec& dist, std::size_t points)
{
    const auto [lo, hi] = dist.typical_range();
    return {lo, 1.0 + hi, points};
}

namespace {

void check_grid(const EnergyGrid& grid)
{
    if (grid.points < 2 || !(grid.max > grid.min) || !std::isfinite(grid.min) ||
        !std::isfinite(grid.max))
        throw std::invalid_argument("energy grid is degenerate");
}

// Q_r as a lattice of its own, with the potential restricted to it.
std::vector<double> cluster_potential(const Truncation& t, std::span<const double> potential, int r,
                                      std::size_t cluster_index)
{
    if (potential.size() != t.site_count())
        throw std::invalid_argument("potential length does not match the truncation");
    const auto q = t.members({r, cluster_index});
    return {potential.begin() + q.front(), potential.begin() + q.front() + q.size()};
}

} // namespace

double measure_bound(std::size_t cluster_size, double threshold)
{
    return 4.0 * static_cast<double>(cluster_size) / std::sqrt(threshold);
}

BoundCheckReport measure_bound_check(const Truncation& t, const CouplingSequence& seq,
                                     std::span<const double> potential, int r, double threshold,
                                     const EnergyGrid& grid, std::size_t cluster_index)
{
    check_grid(grid);
    if (!(threshold > 0.0))
        throw std::invalid_argument("threshold M must be positive");
    const Truncation block = t.prefix(r);
    const auto local = cluster_potential(t, potential, r, cluster_index);
    const std::size_t Nr = block.site_count();

    BoundCheckReport rep;
    rep.rank = r;
    rep.cluster = {r, cluster_index};
    rep.threshold = threshold;
    rep.grid = grid;
    rep.bound = measure_bound(Nr, threshold);

    // midpoint rule: each grid point stands for the cell of width h around it
    const double h = grid.spacing();
    bool previous = false;
    for (std::size_t i = 0; i < grid.points; ++i) {
        const double e = grid.at(i);
        bool exceeds = true;
        try {
            const GreenCascade c(block, seq, local, Complex(e, 0.0), r);
            exceeds = c.cluster_response_norm2({r, 0}) >= threshold;
        } catch (const PoleProximity&) {
            ++rep.pole_points;
        }
        const double cell = (i == 0 || i + 1 == grid.points) ? 0.5 * h : h;
        if (exceeds)
            rep.empirical += cell;
        if (i > 0 && exceeds != previous)
            ++rep.sign_changes;
        previous = exceeds;
    }
    rep.allowance = h * static_cast<double>(rep.sign_changes);

    // ||(H - e)^{-1} 1_Q||^2 <= N_r / dist(e, sigma)^2 and sigma lies in
    // [min omega, max omega + lambda_r], so exceedance is confined to that
    // interval widened by sqrt(N_r / M).
    const auto [lo, hi] = std::minmax_element(local.begin(), local.end());
    const double reach = std::sqrt(static_cast<double>(Nr) / threshold);
    rep.covers_spectrum = grid.min <= *lo - reach && grid.max >= *hi + seq.lambda(r) + reach;
    rep.pass = rep.covers_spectrum && rep.empirical <= rep.bound + rep.allowance;
    return rep;
}

std::vector<BorelCantelliRow> borel_cantelli_profile(const CouplingSequence& seq,
                                                     const HierarchySpec& spec,
                                                     const PowerSequence& u, int r_max)
{
    if (r_max < 1)
        throw std::invalid_argument("r_max must be >= 1");
    std::vector<BorelCantelliRow> rows;
    rows.reserve(r_max);
    double ratio_sum = 0.0, inv_sum = 0.0, coupling_sum = 0.0;
    for (int r = 1; r <= r_max; ++r) {
        BorelCantelliRow row;
        const double Nr = spec.size(r);
        row.r = r;
        row.u = u(r);
        // sqrt(M_r) = u_r N_r is formed directly; M_r itself may overflow
        const double root_M = row.u * Nr;
        row.M = root_M * root_M;
        row.bound_term = 4.0 * Nr / root_M;
        row.ratio_term = Nr / root_M;
        ratio_sum += row.ratio_term;
        inv_sum += 1.0 / row.u;
        row.ratio_sum = ratio_sum;
        row.inverse_u_sum = inv_sum;
        // p_r sqrt(M_r M_{r-1}) / N_r = p_r N_{r-1} u_{r-1} u_r, zero at r = 1 since u_0 = 0
        row.coupling_term =
            r == 1 ? 0.0 : std::exp(seq.log_p(r) + spec.log_size(r - 1) + u.log_at(r - 1) + u.log_at(r));
        coupling_sum += row.coupling_term;
        row.coupling_sum = coupling_sum;
        rows.push_back(row);
    }
    return rows;
}

double inverse_participation_ratio(std::span<const double> normalized)
{
    double acc = 0.0;
    for (double v : normalized) {
        const double p = v * v;
        acc += p * p;
    }
    return acc;
}

std::vector<IprEntry> ipr_profile(const Truncation& t, const CouplingSequence& seq,
                                  std::span<const double> potential, int r,
                                  std::size_t cluster_index, std::size_t cap)
{
    const Truncation block = t.prefix(r);
    if (block.site_count() > cap)
        throw DenseCapExceeded(block.site_count(), cap);
    auto local = cluster_potential(t, potential, r, cluster_index);
    const auto op = Operator::hamiltonian(block, seq, std::move(local), r);
    const auto spec = dense_symmetric_eigensolve(op.assemble_dense(cap));
    std::vector<IprEntry> out(spec.dimension());
    for (std::size_t k = 0; k < spec.dimension(); ++k)
        out[k] = {spec.eigenvalues()[k], inverse_participation_ratio(spec.vector(k))};
    return out;
}

double median(std::vector<double> values)
{
    if (values.empty())
        return std::numeric_limits<double>::quiet_NaN();
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1)
        return upper;
    const double lower = *std::max_element(values.begin(), values.begin() + mid);
    return 0.5 * (lower + upper);
}

namespace {

void check_sweep(const SweepConfig& cfg, const Truncation& t)
{
    check_grid(cfg.grid);
    if (cfg.ranks.empty())
        throw std::invalid_argument("rank ladder is empty");
    for (int r : cfg.ranks)
        if (r < 0 || r > t.depth())
            throw std::out_of_range("ladder rank " + std::to_string(r) + " outside the truncation");
    if (!std::is_sorted(cfg.ranks.begin(), cfg.ranks.end()) ||
        std::adjacent_find(cfg.ranks.begin(), cfg.ranks.end()) != cfg.ranks.end())
        throw std::invalid_argument("rank ladder must be strictly increasing");
    if (cfg.site >= t.site_count())
        throw std::out_of_range("sweep site outside the truncation");
    if (!(cfg.mid_fraction > 0.0 && cfg.mid_fraction <= 1.0))
        throw std::invalid_argument("mid_fraction must lie in (0, 1]");
}

} // namespace

RealizationResult sweep_realization(const SweepConfig& cfg, std::uint64_t index)
{
    const Truncation t(cfg.hierarchy);
    check_sweep(cfg, t);
    const auto omega = sample_potential(cfg.disorder, t, cfg.seed, index);

    RealizationResult res;
    res.index = index;
    res.cells.reserve(cfg.grid.points * cfg.ranks.size());
    for (std::size_t i = 0; i < cfg.grid.points; ++i) {
        const double e = cfg.grid.at(i);
        const auto ladder = simon_wolff_moments(t, cfg.coupling, omega.values, e, cfg.site, cfg.ranks);
        for (std::size_t k = 0; k < cfg.ranks.size(); ++k) {
            MomentCell cell{cfg.seed, index, e, cfg.ranks[k], 0.0, ladder.skipped()};
            if (!cell.skipped)
                cell.moment = ladder.values[k];
            res.cells.push_back(cell);
        }
    }

    if (cfg.compute_ipr) {
        const int top = cfg.ranks.back();
        const auto cluster = t.cluster_of(cfg.site, top).index;
        for (const auto& entry : ipr_profile(t, cfg.coupling, omega.values, top, cluster))
            res.ipr.push_back({index, top, entry.eigenvalue, entry.ipr});
    }
    return res;
}

LocalizationReport reduce_sweep(const SweepConfig& cfg, std::vector<RealizationResult> parts)
{
    std::sort(parts.begin(), parts.end(),
              [](const auto& a, const auto& b) { return a.index < b.index; });
    const std::size_t K = cfg.ranks.size();

    LocalizationReport rep;
    std::vector<std::vector<double>> ratios(K > 0 ? K - 1 : 0);
    std::vector<double> mid_ipr;
    for (const auto& part : parts) {
        rep.cells.insert(rep.cells.end(), part.cells.begin(), part.cells.end());
        rep.ipr.insert(rep.ipr.end(), part.ipr.begin(), part.ipr.end());
        for (std::size_t base = 0; base + K <= part.cells.size(); base += K) {
            if (part.cells[base].skipped) {
                ++rep.skipped_points;
                continue;
            }
            for (std::size_t k = 0; k + 1 < K; ++k)
                ratios[k].push_back(part.cells[base + k + 1].moment / part.cells[base + k].moment);
        }
        // eigenvalues arrive sorted; keep the central mid_fraction of them
        const std::size_t n = part.ipr.size();
        if (n > 0) {
            const auto skip = static_cast<std::size_t>(std::floor(0.5 * (1.0 - cfg.mid_fraction) * n));
            for (std::size_t k = skip; k < n - skip; ++k)
                mid_ipr.push_back(part.ipr[k].ipr);
            rep.ipr_floor = 1.0 / static_cast<double>(n);
        }
    }
    for (std::size_t k = 0; k + 1 < K; ++k)
        rep.ratios.push_back({cfg.ranks[k], cfg.ranks[k + 1], median(ratios[k]), ratios[k].size()});
    if (!mid_ipr.empty())
        rep.median_mid_ipr = median(std::move(mid_ipr));
    return rep;
}

LocalizationReport localization_sweep(const SweepConfig& cfg)
{
    std::vector<RealizationResult> parts;
    parts.reserve(cfg.realizations);
    for (std::uint64_t i = 0; i < cfg.realizations; ++i)
        parts.push_back(sweep_realization(cfg, i));
    return reduce_sweep(cfg, std::move(parts));
}

} // namespace hieram
