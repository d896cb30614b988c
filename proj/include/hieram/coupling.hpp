#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hieram/hierarchy.hpp"

namespace hieram {

// p_r = (rho - 1) rho^{-r}
struct Geometric
{
    double rho = 2.0;
};

// p_r = C r^{-3-epsilon} base^{-r}, C normalizing the total to 1
struct PolyGeometric
{
    int base = 2;
    double epsilon = 0.1;
};

// p_1 .. p_L listed, with the remaining mass sum_{r > L} p_r declared
struct Explicit
{
    std::vector<double> weights;
    double tail_mass = 0.0;
};

using CouplingParams = std::variant<Geometric, PolyGeometric, Explicit>;

// The weights p_r (r >= 1, p_0 = 0) of the hierarchical Laplacian, their
// partial sums lambda_r and tails 1 - lambda_r.
class CouplingSequence
{
  public:
    explicit CouplingSequence(CouplingParams params);

    const CouplingParams& params() const { return params_; }
    bool is_analytic() const { return !std::holds_alternative<Explicit>(params_); }
    std::string describe() const;

    // C for PolyGeometric, rho - 1 for Geometric, 1 for Explicit.
    double normalizer() const { return normalizer_; }

    // Largest rank with a known weight (INT_MAX for analytic families).
    int defined_ranks() const;

    double p(int r) const;
    double log_p(int r) const;
    double lambda(int r) const;
    // sum_{s > r} p_s, evaluated without cancellation.
    double tail(int r) const;
    double log_tail(int r) const;

    // Exponential decay rate of p_r (rho, or the PolyGeometric base), if any.
    std::optional<double> decay_rate() const;

  private:
    double poly_tail_factor(int r) const;
    void check_rank(int r) const;

    CouplingParams params_;
    double normalizer_ = 1.0;
};

CouplingSequence make_coupling(CouplingParams params);

// u_r = r^exponent. The exponent must exceed 1 so that sum 1/u_r converges.
struct PowerSequence
{
    double exponent = 1.1;

    double operator()(int r) const;
    double log_at(int r) const;
    std::string describe() const;
};

enum class Verdict
{
    ConvergesAnalytic,
    DivergesAnalytic,
    ConvergesHeuristic,
    DivergesHeuristic,
    Inconclusive,
};

std::string_view to_string(Verdict v);
bool converges(Verdict v);
bool diverges(Verdict v);

struct HypothesisReport
{
    std::string condition;
    std::string test_sequence;
    std::vector<double> terms;        // terms[r - 1] for r = 1 .. r_max
    std::vector<double> partial_sums; // same indexing
    double last_term = 0.0;
    Verdict verdict = Verdict::Inconclusive;
    // Limit of consecutive term ratios when known in closed form.
    std::optional<double> limiting_ratio;
};

// Heuristic classification of a positive series from its leading terms:
// the terms' power-law decay exponent estimated between r_max/2 and r_max.
Verdict classify_series_heuristic(const std::vector<double>& terms);

// sum_r p_r N_{r-1} u_{r-1} u_r
HypothesisReport check_main_hypothesis(const CouplingSequence& seq, const HierarchySpec& spec,
                                       const PowerSequence& u, int r_max);

// sum_r p_r u_r
HypothesisReport check_molchanov_condition(const CouplingSequence& seq, const PowerSequence& u,
                                           int r_max);

struct SeriesEstimate
{
    double value = 0.0;              // +inf when divergent
    std::optional<bool> converges;   // unknown for non-analytic inputs
    std::optional<double> term_ratio;
    bool tail_included = false;
};

struct AizenmanMolchanovBounds
{
    double s = 0.5;
    SeriesEstimate lower; // sum p_r N_r^{1-s}
    SeriesEstimate upper; // sum p_r^s N_r^{1-s}
};

AizenmanMolchanovBounds aizenman_molchanov_bounds(const CouplingSequence& seq,
                                                  const HierarchySpec& spec, double s,
                                                  int r_max = 200);

} // namespace hieram
