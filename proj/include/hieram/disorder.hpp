#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hieram/coupling.hpp"
#include "hieram/hierarchy.hpp"
#include "hieram/operators.hpp"

namespace hieram {

// values uniform on [center - width/2, center + width/2]
struct UniformDist
{
    double center = 0.0;
    double width = 1.0;
};

struct GaussianDist
{
    double mean = 0.0;
    double sigma = 1.0;
};

struct CauchyDist
{
    double location = 0.0;
    double scale = 1.0;
};

// value a with probability q, b otherwise; not absolutely continuous
struct BernoulliDist
{
    double a = 0.0;
    double b = 1.0;
    double q = 0.5;
};

class DistributionSpec
{
  public:
    using Variant = std::variant<UniformDist, GaussianDist, CauchyDist, BernoulliDist>;

    DistributionSpec(Variant v);

    const Variant& variant() const { return v_; }
    std::string name() const;
    bool absolutely_continuous() const { return !std::holds_alternative<BernoulliDist>(v_); }

    // Interval carrying the potential values: the support when bounded,
    // otherwise mean +- 4 sigma (Gaussian) or location +- 10 scale (Cauchy).
    std::pair<double, double> typical_range() const;

    // Maps one 64-bit draw (and a second one when needed) to a value.
    template <class Engine>
    double draw(Engine& g) const;

  private:
    Variant v_;
};

struct PotentialSample
{
    std::vector<double> values;
    DistributionSpec distribution;
    std::uint64_t seed = 0;
    std::uint64_t index = 0;
};

// N_R i.i.d. values from a stream determined by (seed, index) alone.
PotentialSample sample_potential(const DistributionSpec& dist, const Truncation& t,
                                 std::uint64_t seed, std::uint64_t index);

// H_{omega,r} = V_omega + Delta_r as a matrix-free operator.
Operator hamiltonian(const Truncation& t, const CouplingSequence& seq, const PotentialSample& omega,
                     int r, bool include_tail = false);

} // namespace hieram
