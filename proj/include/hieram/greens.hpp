#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "hieram/coupling.hpp"
#include "hieram/disorder.hpp"
#include "hieram/errors.hpp"
#include "hieram/hierarchy.hpp"

namespace hieram {

using Complex = std::complex<double>;

// Cluster-averaged resolvent data of H_{omega,s} - z for s = 0 .. depth.
//
// For every rank-s cluster Q with phi_Q = 1_Q / sqrt(N_s):
//   v_s(Q)     = (H_{omega,s} - z)^{-1} phi_Q, stored in level(s) on the sites of Q
//   alpha_s(Q) = <phi_Q, v_s(Q)>
//
// Because E_s acts on Q as the rank-one projection phi_Q phi_Q^T and
// H_{omega,s-1} is block diagonal over the children Q_1 .. Q_n of Q,
// Sherman-Morrison gives
//   beta       = (1/n) sum_j alpha_{s-1}(Q_j)
//   v_s(Q)     = [(1/sqrt n) sum_j v_{s-1}(Q_j)] / (1 + p_s beta)
//   alpha_s(Q) = beta / (1 + p_s beta)
// so the whole cascade costs O(N_R R).
class GreenCascade
{
  public:
    GreenCascade(const Truncation& t, const CouplingSequence& seq, std::span<const double> potential,
                 Complex z, int depth, double pole_tol = kPoleTolerance);

    const Truncation& truncation() const { return truncation_; }
    Complex energy() const { return z_; }
    int depth() const { return depth_; }
    double weight(int s) const { return weights_[s]; }
    double potential(Site x) const { return potential_[x]; }

    std::span<const Complex> level(int s) const { return levels_[s]; }
    Complex alpha(int s, std::size_t cluster) const { return alphas_[s][cluster]; }

    // g_{omega,s}(t; z): the mean of G_{omega,s}(., t; z) over Q_s(t).
    Complex g(int s, Site t) const;

    // ||(H_{omega,s} - z)^{-1} 1_Q||^2 for a rank-s cluster Q.
    double cluster_response_norm2(const ClusterId& c) const;

  private:
    void check_level(int s) const;

    Truncation truncation_;
    std::vector<double> potential_;
    std::vector<double> weights_; // p_0 .. p_depth
    Complex z_;
    int depth_;
    std::vector<std::vector<Complex>> levels_;
    std::vector<std::vector<Complex>> alphas_;
};

GreenCascade build_cascade(const Truncation& t, const CouplingSequence& seq,
                           const PotentialSample& omega, Complex z, int depth);

struct LevelTerm
{
    int level = 0;
    Complex term; // p_s N_{s-1} g_{s-1}(x) g_s(y)
};

struct GreenQueryResult
{
    Complex value;
    Complex base; // G_{omega,0}(x, y; z)
    std::vector<LevelTerm> terms;
};

// G_{omega,r}(x, y; z) from the level expansion
//   G_r(x,y) = G_0(x,y) - sum_{s = max(1, d(x,y))}^{r} p_s N_{s-1} g_{s-1}(x) g_s(y).
GreenQueryResult green_entry(const GreenCascade& c, Site x, Site y, int r);

struct GreenColumn
{
    SiteRange support; // Q_r(x); the column vanishes outside it
    std::vector<Complex> values;
    double moment = 0.0; // sum_y |G_r(x, y; z)|^2

    Complex at(Site y) const;
};

// The column G_{omega,r}(x, . ; z) in O(N_r): by symmetry of G the level-s
// term is a multiple of v_{s-1} on Q_s(x).
GreenColumn green_column(const GreenCascade& c, Site x, int r);

// S_0 .. S_{r_max} with S_r = ||(H_{omega,r} - z)^{-1} delta_x||^2, in one pass.
std::vector<double> moment_ladder(const GreenCascade& c, Site x, int r_max);

struct MomentLadder
{
    std::vector<int> ranks;
    std::vector<double> values; // empty when skipped
    std::optional<int> pole_level;

    bool skipped() const { return pole_level.has_value(); }
};

// S_r(e) for each requested rank from a single cascade at real energy e.
// A pole-proximity guard trip is reported in the result rather than thrown.
MomentLadder simon_wolff_moments(const Truncation& t, const CouplingSequence& seq,
                                 std::span<const double> potential, double e, Site x,
                                 std::span<const int> ranks);

} // namespace hieram
