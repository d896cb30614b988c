#include "hieram/hierarchy.hpp"

#include <climits>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hieram {

HierarchySpec::HierarchySpec(std::vector<int> branching, int depth, bool homogeneous)
    : branching_(std::move(branching)), depth_(depth), homogeneous_(homogeneous)
{
    if (depth_ < 0)
        throw std::invalid_argument("hierarchy depth must be >= 0");
    for (int n : branching_)
        if (n < 2)
            throw std::invalid_argument("branching factors must be >= 2, got " +
                                        std::to_string(n));
    if (!homogeneous_ && static_cast<int>(branching_.size()) < depth_)
        throw std::invalid_argument("branching sequence shorter than depth");
}

HierarchySpec HierarchySpec::homogeneous(int degree, int depth)
{
    return HierarchySpec({degree}, depth, true);
}

HierarchySpec HierarchySpec::with_branching(std::vector<int> branching, int depth)
{
    return HierarchySpec(std::move(branching), depth, false);
}

int HierarchySpec::degree() const
{
    if (!homogeneous_)
        throw std::logic_error("hierarchy is not homogeneous");
    return branching_.front();
}

int HierarchySpec::known_ranks() const
{
    return homogeneous_ ? INT_MAX : static_cast<int>(branching_.size());
}

int HierarchySpec::branch(int r) const
{
    if (r < 0)
        throw std::out_of_range("negative rank");
    if (r == 0)
        return 1;
    if (homogeneous_)
        return branching_.front();
    if (r > static_cast<int>(branching_.size()))
        throw std::out_of_range("branching factor n_" + std::to_string(r) + " is not defined");
    return branching_[r - 1];
}

double HierarchySpec::size(int r) const
{
    if (homogeneous_)
        return std::pow(static_cast<double>(branching_.front()), r);
    double n = 1.0;
    for (int s = 1; s <= r; ++s)
        n *= branch(s);
    return n;
}

double HierarchySpec::log_size(int r) const
{
    if (homogeneous_)
        return r * std::log(static_cast<double>(branching_.front()));
    double acc = 0.0;
    for (int s = 1; s <= r; ++s)
        acc += std::log(static_cast<double>(branch(s)));
    return acc;
}

Truncation::Truncation(HierarchySpec spec) : spec_(std::move(spec))
{
    sizes_.reserve(spec_.depth() + 1);
    sizes_.push_back(1);
    for (int r = 1; r <= spec_.depth(); ++r) {
        auto n = static_cast<std::size_t>(spec_.branch(r));
        if (sizes_.back() > std::numeric_limits<std::size_t>::max() / n)
            throw std::overflow_error("site count overflows at rank " + std::to_string(r));
        sizes_.push_back(sizes_.back() * n);
    }
}

std::size_t Truncation::size(int r) const
{
    check_rank(r);
    return sizes_[r];
}

void Truncation::check_site(Site x) const
{
    if (x >= site_count())
        throw std::out_of_range("site " + std::to_string(x) + " outside truncation of " +
                                std::to_string(site_count()) + " sites");
}

void Truncation::check_rank(int r) const
{
    if (r < 0 || r > depth())
        throw std::out_of_range("rank " + std::to_string(r) + " outside [0, " +
                                std::to_string(depth()) + "]");
}

ClusterId Truncation::cluster_of(Site x, int r) const
{
    check_site(x);
    check_rank(r);
    return {r, x / sizes_[r]};
}

SiteRange Truncation::members(const ClusterId& c) const
{
    check_rank(c.rank);
    if (c.index >= cluster_count(c.rank))
        throw std::out_of_range("cluster index " + std::to_string(c.index) + " at rank " +
                                std::to_string(c.rank) + " out of range");
    const std::size_t n = sizes_[c.rank];
    return SiteRange(c.index * n, (c.index + 1) * n);
}

int Truncation::distance(Site x, Site y) const
{
    check_site(x);
    check_site(y);
    int r = 0;
    while (x / sizes_[r] != y / sizes_[r])
        ++r;
    return r;
}

Truncation Truncation::prefix(int r) const
{
    check_rank(r);
    if (spec_.is_homogeneous())
        return Truncation(HierarchySpec::homogeneous(spec_.degree(), r));
    return Truncation(HierarchySpec::with_branching(spec_.branching(), r));
}

Truncation build_truncation(const HierarchySpec& spec) { return Truncation(spec); }

ClusterId cluster_of(const Truncation& t, Site x, int r) { return t.cluster_of(x, r); }

int distance(const Truncation& t, Site x, Site y) { return t.distance(x, y); }

SiteRange cluster_members(const Truncation& t, const ClusterId& c) { return t.members(c); }

} // namespace hieram
