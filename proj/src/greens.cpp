#include "hieram/greens.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hieram {

GreenCascade::GreenCascade(const Truncation& t, const CouplingSequence& seq,
                           std::span<const double> potential, Complex z, int depth,
                           double pole_tol)
    : truncation_(t), potential_(potential.begin(), potential.end()), z_(z), depth_(depth)
{
    if (depth < 0 || depth > t.depth())
        throw std::out_of_range("cascade depth " + std::to_string(depth) + " outside [0, " +
                                std::to_string(t.depth()) + "]");
    const std::size_t N = t.site_count();
    if (potential.size() != N)
        throw std::invalid_argument("potential length does not match the truncation");

    weights_.resize(depth + 1);
    for (int s = 0; s <= depth; ++s)
        weights_[s] = seq.p(s);

    levels_.resize(depth + 1);
    alphas_.resize(depth + 1);

    auto& v0 = levels_[0];
    v0.resize(N);
    for (std::size_t x = 0; x < N; ++x) {
        const Complex d = potential_[x] - z;
        if (std::abs(d) < pole_tol)
            throw PoleProximity(0, std::abs(d));
        v0[x] = 1.0 / d;
    }
    alphas_[0] = v0;

    for (int s = 1; s <= depth; ++s) {
        const std::size_t n = t.size(s) / t.size(s - 1);
        const std::size_t Ns = t.size(s);
        const std::size_t blocks = N / Ns;
        const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
        const auto& prev_v = levels_[s - 1];
        const auto& prev_a = alphas_[s - 1];
        auto& v = levels_[s];
        auto& a = alphas_[s];
        v.resize(N);
        a.resize(blocks);
        for (std::size_t b = 0; b < blocks; ++b) {
            Complex beta = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                beta += prev_a[b * n + j];
            beta /= static_cast<double>(n);
            const Complex den = 1.0 + weights_[s] * beta;
            if (std::abs(den) < pole_tol)
                throw PoleProximity(s, std::abs(den));
            a[b] = beta / den;
            const Complex scale = inv_sqrt_n / den;
            for (std::size_t x = b * Ns; x < (b + 1) * Ns; ++x)
                v[x] = prev_v[x] * scale;
        }
    }
}

void GreenCascade::check_level(int s) const
{
    if (s < 0 || s > depth_)
        throw std::out_of_range("level " + std::to_string(s) + " exceeds cascade depth " +
                                std::to_string(depth_));
}

Complex GreenCascade::g(int s, Site t) const
{
    check_level(s);
    return levels_[s].at(t) / std::sqrt(static_cast<double>(truncation_.size(s)));
}

double GreenCascade::cluster_response_norm2(const ClusterId& c) const
{
    check_level(c.rank);
    double acc = 0.0;
    for (Site x : truncation_.members(c))
        acc += std::norm(levels_[c.rank][x]);
    return static_cast<double>(truncation_.size(c.rank)) * acc;
}

GreenCascade build_cascade(const Truncation& t, const CouplingSequence& seq,
                           const PotentialSample& omega, Complex z, int depth)
{
    return GreenCascade(t, seq, omega.values, z, depth);
}

GreenQueryResult green_entry(const GreenCascade& c, Site x, Site y, int r)
{
    if (r < 0 || r > c.depth())
        throw std::out_of_range("rank exceeds cascade depth");
    const Truncation& t = c.truncation();
    const int d = t.distance(x, y);

    GreenQueryResult res;
    res.base = (x == y) ? c.level(0)[x] : Complex(0.0);
    res.value = res.base;
    for (int s = std::max(1, d); s <= r; ++s) {
        const Complex term = c.weight(s) * static_cast<double>(t.size(s - 1)) * c.g(s - 1, x) * c.g(s, y);
        res.terms.push_back({s, term});
        res.value -= term;
    }
    return res;
}

Complex GreenColumn::at(Site y) const
{
    if (y < support.front() || y - support.front() >= values.size())
        return 0.0;
    return values[y - support.front()];
}

namespace {

// Applies the level updates 1 .. r to a column over Q_r(x); calls visit(s)
// after each level with the column complete for H_{omega,s}.
template <class Visit>
void accumulate_column(const GreenCascade& c, Site x, int r, std::vector<Complex>& col,
                       Site first, Visit&& visit)
{
    const Truncation& t = c.truncation();
    col[x - first] = c.level(0)[x];
    visit(0);
    for (int s = 1; s <= r; ++s) {
        // p_s N_{s-1} g_s(x) g_{s-1}(y) = p_s v_s(x) v_{s-1}(y) / sqrt(n_s)
        const double n = static_cast<double>(t.size(s) / t.size(s - 1));
        const Complex coef = c.weight(s) * c.level(s)[x] / std::sqrt(n);
        const auto prev = c.level(s - 1);
        const auto q = t.members(t.cluster_of(x, s));
        for (Site y : q)
            col[y - first] -= coef * prev[y];
        visit(s);
    }
}

} // namespace

GreenColumn green_column(const GreenCascade& c, Site x, int r)
{
    if (r < 0 || r > c.depth())
        throw std::out_of_range("rank exceeds cascade depth");
    const Truncation& t = c.truncation();
    GreenColumn out{t.members(t.cluster_of(x, r)), {}, 0.0};
    const Site first = out.support.front();
    out.values.assign(t.size(r), Complex(0.0));
    accumulate_column(c, x, r, out.values, first, [](int) {});
    for (const auto& v : out.values)
        out.moment += std::norm(v);
    return out;
}

std::vector<double> moment_ladder(const GreenCascade& c, Site x, int r_max)
{
    if (r_max < 0 || r_max > c.depth())
        throw std::out_of_range("rank exceeds cascade depth");
    const Truncation& t = c.truncation();
    const Site first = t.members(t.cluster_of(x, r_max)).front();
    std::vector<Complex> col(t.size(r_max), Complex(0.0));
    std::vector<double> out;
    out.reserve(r_max + 1);
    accumulate_column(c, x, r_max, col, first, [&](int s) {
        // outside Q_s(x) the column is still zero
        const auto q = t.members(t.cluster_of(x, s));
        double acc = 0.0;
        for (Site y : q)
            acc += std::norm(col[y - first]);
        out.push_back(acc);
    });
    return out;
}

MomentLadder simon_wolff_moments(const Truncation& t, const CouplingSequence& seq,
                                 std::span<const double> potential, double e, Site x,
                                 std::span<const int> ranks)
{
    MomentLadder out;
    out.ranks.assign(ranks.begin(), ranks.end());
    if (ranks.empty())
        return out;
    const int top = *std::max_element(ranks.begin(), ranks.end());
    try {
        const GreenCascade c(t, seq, potential, Complex(e, 0.0), top);
        const auto ladder = moment_ladder(c, x, top);
        out.values.reserve(ranks.size());
        for (int r : ranks)
            out.values.push_back(ladder.at(r));
    } catch (const PoleProximity& p) {
        out.pole_level = p.level();
        out.values.clear();
    }
    return out;
}

} // namespace hieram
