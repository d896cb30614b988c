#include "hieram/coupling.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace hieram {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts...
{
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// sum_{k >= 1} (r + k)^{-kappa} base^{-k}; consecutive ratios are below 1/base,
// so the remainder after a term t is at most t / (base - 1).
double poly_geometric_series(int r, double kappa, int base)
{
    const double q = 1.0 / base;
    double sum = 0.0;
    double weight = 1.0;
    for (int k = 1;; ++k) {
        weight *= q;
        const double term = std::pow(static_cast<double>(r + k), -kappa) * weight;
        sum += term;
        if (term / (base - 1) < 1e-17 * sum)
            break;
    }
    return sum;
}

} // namespace

CouplingSequence::CouplingSequence(CouplingParams params) : params_(std::move(params))
{
    std::visit(Overloaded{
                   [&](const Geometric& g) {
                       if (!(g.rho > 1.0) || !std::isfinite(g.rho))
                           throw std::invalid_argument("geometric coupling needs rho > 1");
                       normalizer_ = g.rho - 1.0;
                   },
                   [&](const PolyGeometric& pg) {
                       if (pg.base < 2)
                           throw std::invalid_argument("polygeometric coupling needs base >= 2");
                       if (!(pg.epsilon > 0.0) || !std::isfinite(pg.epsilon))
                           throw std::invalid_argument("polygeometric coupling needs epsilon > 0");
                       normalizer_ = 1.0 / poly_geometric_series(0, 3.0 + pg.epsilon, pg.base);
                   },
                   [&](const Explicit& e) {
                       if (e.weights.empty())
                           throw std::invalid_argument("explicit coupling needs at least one weight");
                       for (double w : e.weights)
                           if (!(w > 0.0) || !std::isfinite(w))
                               throw std::invalid_argument("explicit coupling weights must be positive");
                       if (!(e.tail_mass >= 0.0))
                           throw std::invalid_argument("declared tail mass must be non-negative");
                       const double total =
                           std::accumulate(e.weights.begin(), e.weights.end(), 0.0) + e.tail_mass;
                       if (std::abs(total - 1.0) > 1e-12)
                           throw std::invalid_argument("explicit coupling weights plus tail must sum to 1");
                       normalizer_ = 1.0;
                   },
               },
               params_);
}

CouplingSequence make_coupling(CouplingParams params) { return CouplingSequence(std::move(params)); }

std::string CouplingSequence::describe() const
{
    std::ostringstream os;
    os.precision(17);
    std::visit(Overloaded{
                   [&](const Geometric& g) { os << "geometric(rho=" << g.rho << ")"; },
                   [&](const PolyGeometric& pg) {
                       os << "polygeometric(base=" << pg.base << ", epsilon=" << pg.epsilon << ")";
                   },
                   [&](const Explicit& e) {
                       os << "explicit(" << e.weights.size() << " weights, tail=" << e.tail_mass << ")";
                   },
               },
               params_);
    return os.str();
}

int CouplingSequence::defined_ranks() const
{
    if (const auto* e = std::get_if<Explicit>(&params_))
        return static_cast<int>(e->weights.size());
    return INT_MAX;
}

void CouplingSequence::check_rank(int r) const
{
    if (r < 0)
        throw std::out_of_range("negative rank");
    if (r > defined_ranks())
        throw std::out_of_range("coupling weight p_" + std::to_string(r) + " is not defined");
}

double CouplingSequence::p(int r) const
{
    check_rank(r);
    if (r == 0)
        return 0.0;
    if (const auto* e = std::get_if<Explicit>(&params_))
        return e->weights[r - 1];
    return std::exp(log_p(r));
}

double CouplingSequence::log_p(int r) const
{
    check_rank(r);
    if (r == 0)
        return -kInf;
    return std::visit(Overloaded{
                          [&](const Geometric& g) { return std::log(g.rho - 1.0) - r * std::log(g.rho); },
                          [&](const PolyGeometric& pg) {
                              return std::log(normalizer_) - (3.0 + pg.epsilon) * std::log(double(r)) -
                                     r * std::log(double(pg.base));
                          },
                          [&](const Explicit& e) { return std::log(e.weights[r - 1]); },
                      },
                      params_);
}

double CouplingSequence::lambda(int r) const
{
    check_rank(r);
    if (r == 0)
        return 0.0;
    if (!std::holds_alternative<Explicit>(params_))
        return -std::expm1(log_tail(r));
    double acc = 0.0;
    for (int s = 1; s <= r; ++s)
        acc += p(s);
    return acc;
}

double CouplingSequence::poly_tail_factor(int r) const
{
    const auto& pg = std::get<PolyGeometric>(params_);
    return poly_geometric_series(r, 3.0 + pg.epsilon, pg.base);
}

double CouplingSequence::tail(int r) const
{
    if (r < 0)
        throw std::out_of_range("negative rank");
    if (r == 0)
        return 1.0;
    if (const auto* e = std::get_if<Explicit>(&params_)) {
        const int L = static_cast<int>(e->weights.size());
        if (r > L) {
            if (e->tail_mass == 0.0)
                return 0.0;
            throw std::out_of_range("tail beyond the explicit weights is only known in total");
        }
        double acc = e->tail_mass;
        for (int s = L; s > r; --s)
            acc += e->weights[s - 1];
        return acc;
    }
    return std::exp(log_tail(r));
}

double CouplingSequence::log_tail(int r) const
{
    if (r < 0)
        throw std::out_of_range("negative rank");
    if (r == 0)
        return 0.0;
    return std::visit(Overloaded{
                          [&](const Geometric& g) { return -r * std::log(g.rho); },
                          [&](const PolyGeometric& pg) {
                              return std::log(normalizer_) - r * std::log(double(pg.base)) +
                                     std::log(poly_tail_factor(r));
                          },
                          [&](const Explicit&) { return std::log(tail(r)); },
                      },
                      params_);
}

std::optional<double> CouplingSequence::decay_rate() const
{
    if (const auto* g = std::get_if<Geometric>(&params_))
        return g->rho;
    if (const auto* pg = std::get_if<PolyGeometric>(&params_))
        return static_cast<double>(pg->base);
    return std::nullopt;
}

double PowerSequence::operator()(int r) const { return std::pow(static_cast<double>(r), exponent); }

double PowerSequence::log_at(int r) const
{
    return r == 0 ? -kInf : exponent * std::log(static_cast<double>(r));
}

std::string PowerSequence::describe() const
{
    std::ostringstream os;
    os.precision(17);
    os << "r^" << exponent;
    return os.str();
}

std::string_view to_string(Verdict v)
{
    switch (v) {
    case Verdict::ConvergesAnalytic: return "converges (analytic)";
    case Verdict::DivergesAnalytic: return "diverges (analytic)";
    case Verdict::ConvergesHeuristic: return "converges (numeric heuristic)";
    case Verdict::DivergesHeuristic: return "diverges (numeric heuristic)";
    case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

bool converges(Verdict v) { return v == Verdict::ConvergesAnalytic || v == Verdict::ConvergesHeuristic; }

bool diverges(Verdict v) { return v == Verdict::DivergesAnalytic || v == Verdict::DivergesHeuristic; }

Verdict classify_series_heuristic(const std::vector<double>& terms)
{
    const std::size_t K = terms.size();
    if (K < 2)
        return Verdict::Inconclusive;
    const std::size_t h = std::max<std::size_t>(1, K / 2);
    const double last = terms[K - 1];
    const double mid = terms[h - 1];
    if (!std::isfinite(last))
        return Verdict::DivergesHeuristic;
    if (last == 0.0)
        return Verdict::ConvergesHeuristic;
    if (mid == 0.0)
        return Verdict::Inconclusive;
    // power-law decay exponent between ranks h and K
    const double beta = -std::log(last / mid) / std::log(static_cast<double>(K) / h);
    if (beta >= 1.5)
        return Verdict::ConvergesHeuristic;
    if (beta <= 1.0)
        return Verdict::DivergesHeuristic;
    return Verdict::Inconclusive;
}

namespace {

void check_test_sequence(const PowerSequence& u, int r_max)
{
    if (r_max < 2)
        throw std::invalid_argument("r_max must be >= 2");
    if (!(u.exponent > 1.0))
        throw std::invalid_argument("test sequence r^a needs a > 1 for sum 1/u_r to converge");
}

void fill_sums(HypothesisReport& rep)
{
    rep.partial_sums.resize(rep.terms.size());
    std::partial_sum(rep.terms.begin(), rep.terms.end(), rep.partial_sums.begin());
    rep.last_term = rep.terms.back();
}

} // namespace

HypothesisReport check_main_hypothesis(const CouplingSequence& seq, const HierarchySpec& spec,
                                       const PowerSequence& u, int r_max)
{
    check_test_sequence(u, r_max);
    HypothesisReport rep;
    rep.condition = "main";
    rep.test_sequence = u.describe();
    rep.terms.reserve(r_max);
    for (int r = 1; r <= r_max; ++r) {
        const double log_term = seq.log_p(r) + spec.log_size(r - 1) + u.log_at(r - 1) + u.log_at(r);
        rep.terms.push_back(std::exp(log_term));
    }
    fill_sums(rep);

    if (spec.is_homogeneous() && seq.is_analytic()) {
        const double n = spec.degree();
        const double q = n / *seq.decay_rate();
        rep.limiting_ratio = q;
        if (q < 1.0) {
            rep.verdict = Verdict::ConvergesAnalytic;
        } else if (q > 1.0 || std::holds_alternative<Geometric>(seq.params())) {
            // at q == 1 the geometric terms grow like u_{r-1} u_r
            rep.verdict = Verdict::DivergesAnalytic;
        } else {
            // q == 1, PolyGeometric: terms ~ r^{2a - 3 - epsilon}
            const double eps = std::get<PolyGeometric>(seq.params()).epsilon;
            rep.verdict = (2.0 * u.exponent - 3.0 - eps < -1.0) ? Verdict::ConvergesAnalytic
                                                                 : Verdict::DivergesAnalytic;
        }
    } else {
        rep.verdict = classify_series_heuristic(rep.terms);
    }
    return rep;
}

HypothesisReport check_molchanov_condition(const CouplingSequence& seq, const PowerSequence& u,
                                           int r_max)
{
    check_test_sequence(u, r_max);
    HypothesisReport rep;
    rep.condition = "molchanov";
    rep.test_sequence = u.describe();
    rep.terms.reserve(r_max);
    for (int r = 1; r <= r_max; ++r)
        rep.terms.push_back(std::exp(seq.log_p(r) + u.log_at(r)));
    fill_sums(rep);

    if (seq.is_analytic()) {
        // geometric factor 1/rho (or 1/base) dominates any power of r
        rep.limiting_ratio = 1.0 / *seq.decay_rate();
        rep.verdict = Verdict::ConvergesAnalytic;
    } else {
        rep.verdict = classify_series_heuristic(rep.terms);
    }
    return rep;
}

namespace {

// sum_{r >= 1} A r^{-k} q^r with k > 0.
SeriesEstimate sum_power_geometric(double A, double k, double q, int r_max)
{
    SeriesEstimate est;
    est.term_ratio = q;
    est.tail_included = true;
    constexpr double kRatioTol = 1e-14;
    if (q > 1.0 + kRatioTol || (std::abs(q - 1.0) <= kRatioTol && k <= 1.0)) {
        est.value = kInf;
        est.converges = false;
        return est;
    }
    est.converges = true;
    double sum = 0.0;
    if (q < 1.0 - kRatioTol) {
        // consecutive ratios are at most q
        for (int r = 1;; ++r) {
            const double term = A * std::pow(double(r), -k) * std::pow(q, r);
            sum += term;
            if (term * q / (1.0 - q) < 1e-17 * sum)
                break;
        }
    } else {
        const int K = std::max(r_max, 100000);
        for (int r = 1; r <= K; ++r)
            sum += A * std::pow(double(r), -k);
        sum += A * std::pow(double(K), 1.0 - k) / (k - 1.0);
    }
    est.value = sum;
    return est;
}

} // namespace

AizenmanMolchanovBounds aizenman_molchanov_bounds(const CouplingSequence& seq,
                                                  const HierarchySpec& spec, double s, int r_max)
{
    if (!(s > 0.0 && s < 1.0))
        throw std::invalid_argument("fractional moment exponent s must lie in (0, 1)");
    if (r_max < 1)
        throw std::invalid_argument("r_max must be >= 1");

    AizenmanMolchanovBounds out;
    out.s = s;

    if (spec.is_homogeneous() && seq.is_analytic()) {
        const double n = spec.degree();
        const double growth = std::pow(n, 1.0 - s);
        if (const auto* g = std::get_if<Geometric>(&seq.params())) {
            auto closed = [&](double coef, double q) {
                SeriesEstimate e;
                e.term_ratio = q;
                e.tail_included = true;
                e.converges = q < 1.0;
                e.value = q < 1.0 ? coef * q / (1.0 - q) : kInf;
                return e;
            };
            out.lower = closed(g->rho - 1.0, growth / g->rho);
            out.upper = closed(std::pow(g->rho - 1.0, s), growth / std::pow(g->rho, s));
        } else {
            const auto& pg = std::get<PolyGeometric>(seq.params());
            const double kappa = 3.0 + pg.epsilon;
            const double C = seq.normalizer();
            out.lower = sum_power_geometric(C, kappa, growth / pg.base, r_max);
            out.upper = sum_power_geometric(std::pow(C, s), s * kappa,
                                            growth / std::pow(double(pg.base), s), r_max);
        }
        return out;
    }

    const int last = std::min({r_max, seq.defined_ranks(), spec.known_ranks()});
    for (int r = 1; r <= last; ++r) {
        const double log_growth = (1.0 - s) * spec.log_size(r);
        out.lower.value += std::exp(seq.log_p(r) + log_growth);
        out.upper.value += std::exp(s * seq.log_p(r) + log_growth);
    }
    return out;
}

} // namespace hieram
