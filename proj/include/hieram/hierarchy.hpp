#pragma once

#include <cstddef>
#include <ranges>
#include <vector>

namespace hieram {

using Site = std::size_t;
using SiteRange = std::ranges::iota_view<Site, Site>;

// Branching data of a hierarchical structure: n_r for r >= 1 (n_0 = 1), plus
// the depth R used when truncating. A homogeneous structure of degree n has
// n_r = n for every r and can be queried at any rank; an explicit sequence is
// only known up to its length.
class HierarchySpec
{
  public:
    static HierarchySpec homogeneous(int degree, int depth);
    static HierarchySpec with_branching(std::vector<int> branching, int depth);

    int depth() const { return depth_; }
    bool is_homogeneous() const { return homogeneous_; }
    int degree() const;
    const std::vector<int>& branching() const { return branching_; }

    // Largest rank whose branching factor is known.
    int known_ranks() const;

    // n_r; n_0 = 1.
    int branch(int r) const;

    // N_r as a floating-point value, valid far beyond the truncation depth.
    double size(int r) const;
    double log_size(int r) const;

  private:
    HierarchySpec(std::vector<int> branching, int depth, bool homogeneous);

    std::vector<int> branching_;
    int depth_ = 0;
    bool homogeneous_ = false;
};

struct ClusterId
{
    int rank = 0;
    std::size_t index = 0;

    friend bool operator==(const ClusterId&, const ClusterId&) = default;
};

// Finite truncation Q_R(x_0) of a hierarchical structure. Sites are numbered
// 0 .. N_R-1 in little-endian mixed radix, so every rank-r cluster is the
// contiguous range [index * N_r, (index + 1) * N_r).
class Truncation
{
  public:
    explicit Truncation(HierarchySpec spec);

    const HierarchySpec& spec() const { return spec_; }
    int depth() const { return spec_.depth(); }
    std::size_t site_count() const { return sizes_.back(); }

    // N_r for 0 <= r <= R.
    std::size_t size(int r) const;
    const std::vector<std::size_t>& sizes() const { return sizes_; }

    // Number of rank-r clusters, N_R / N_r.
    std::size_t cluster_count(int r) const { return site_count() / size(r); }

    ClusterId cluster_of(Site x, int r) const;
    SiteRange members(const ClusterId& c) const;
    int distance(Site x, Site y) const;

    // The truncation of the same structure at a smaller depth (the cluster
    // Q_r(x_0) seen as a lattice of its own).
    Truncation prefix(int r) const;

  private:
    void check_site(Site x) const;
    void check_rank(int r) const;

    HierarchySpec spec_;
    std::vector<std::size_t> sizes_;
};

Truncation build_truncation(const HierarchySpec& spec);
ClusterId cluster_of(const Truncation& t, Site x, int r);
int distance(const Truncation& t, Site x, Site y);
SiteRange cluster_members(const Truncation& t, const ClusterId& c);

} // namespace hieram
