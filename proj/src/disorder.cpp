#include "hieram/disorder.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace hieram {

namespace {

template <class... Ts>
struct Overloaded : Ts...
{
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// [0, 1) with 53 random bits
double unit_closed_open(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

// (0, 1)
double unit_open(std::uint64_t bits) { return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53; }

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

} // namespace

DistributionSpec::DistributionSpec(Variant v) : v_(std::move(v))
{
    std::visit(Overloaded{
                   [](const UniformDist& d) {
                       if (!positive_finite(d.width) || !std::isfinite(d.center))
                           throw std::invalid_argument("uniform disorder needs width > 0");
                   },
                   [](const GaussianDist& d) {
                       if (!positive_finite(d.sigma) || !std::isfinite(d.mean))
                           throw std::invalid_argument("gaussian disorder needs sigma > 0");
                   },
                   [](const CauchyDist& d) {
                       if (!positive_finite(d.scale) || !std::isfinite(d.location))
                           throw std::invalid_argument("cauchy disorder needs scale > 0");
                   },
                   [](const BernoulliDist& d) {
                       if (!(d.q > 0.0 && d.q < 1.0) || !std::isfinite(d.a) || !std::isfinite(d.b))
                           throw std::invalid_argument("bernoulli disorder needs 0 < q < 1");
                   },
               },
               v_);
}

std::string DistributionSpec::name() const
{
    return std::visit(Overloaded{
                          [](const UniformDist&) { return std::string("uniform"); },
                          [](const GaussianDist&) { return std::string("gaussian"); },
                          [](const CauchyDist&) { return std::string("cauchy"); },
                          [](const BernoulliDist&) { return std::string("bernoulli"); },
                      },
                      v_);
}

std::pair<double, double> DistributionSpec::typical_range() const
{
    return std::visit(
        Overloaded{
            [](const UniformDist& d) {
                return std::pair{d.center - 0.5 * d.width, d.center + 0.5 * d.width};
            },
            [](const GaussianDist& d) { return std::pair{d.mean - 4 * d.sigma, d.mean + 4 * d.sigma}; },
            [](const CauchyDist& d) {
                return std::pair{d.location - 10 * d.scale, d.location + 10 * d.scale};
            },
            [](const BernoulliDist& d) { return std::pair{std::min(d.a, d.b), std::max(d.a, d.b)}; },
        },
        v_);
}

template <class Engine>
double DistributionSpec::draw(Engine& g) const
{
    return std::visit(
        Overloaded{
            [&](const UniformDist& d) { return d.center + d.width * (unit_closed_open(g()) - 0.5); },
            [&](const GaussianDist& d) {
                // Box-Muller, cosine branch only
                const double u1 = unit_open(g());
                const double u2 = unit_closed_open(g());
                return d.mean + d.sigma * std::sqrt(-2.0 * std::log(u1)) *
                                    std::cos(2.0 * std::numbers::pi * u2);
            },
            [&](const CauchyDist& d) {
                return d.location + d.scale * std::tan(std::numbers::pi * (unit_open(g()) - 0.5));
            },
            [&](const BernoulliDist& d) { return unit_closed_open(g()) < d.q ? d.a : d.b; },
        },
        v_);
}

PotentialSample sample_potential(const DistributionSpec& dist, const Truncation& t,
                                 std::uint64_t seed, std::uint64_t index)
{
    // sites are drawn in order from one engine keyed by (seed, index)
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::mt19937_64 engine(seq);

    PotentialSample s{{}, dist, seed, index};
    s.values.resize(t.site_count());
    for (auto& v : s.values)
        v = dist.draw(engine);
    return s;
}

Operator hamiltonian(const Truncation& t, const CouplingSequence& seq, const PotentialSample& omega,
                     int r, bool include_tail)
{
    return Operator::hamiltonian(t, seq, omega.values, r, include_tail);
}

} // namespace hieram
