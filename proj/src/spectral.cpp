#include "hieram/spectral.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <variant>

#include "hieram/dense.hpp"
#include "hieram/operators.hpp"

namespace hieram {

double SpectralMeasure::atom_mass() const
{
    double acc = 0.0;
    for (const auto& a : atoms)
        acc += a.weight;
    return acc;
}

std::vector<SpectralLine> cluster_eigenvalues(std::span<const double> sorted, double tol)
{
    std::vector<SpectralLine> out;
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (count > 0 && sorted[i] - sorted[i - 1] >= tol) {
            out.push_back({sum / count, count});
            sum = 0.0;
            count = 0;
        }
        sum += sorted[i];
        ++count;
    }
    if (count > 0)
        out.push_back({sum / count, count});
    return out;
}

std::vector<SpectralLine> exact_cutoff_spectrum(const Truncation& t, const CouplingSequence& seq,
                                                int r)
{
    if (r < 0 || r > t.depth())
        throw std::out_of_range("rank outside the truncation");
    std::vector<SpectralLine> lines;
    lines.reserve(r + 1);
    const std::size_t Nr = t.size(r);
    for (int s = 0; s < r; ++s)
        lines.push_back({seq.lambda(s), Nr / t.size(s) - Nr / t.size(s + 1)});
    lines.push_back({seq.lambda(r), 1});
    return lines;
}

std::vector<SpectralLine> restricted_full_spectrum(const Truncation& t, const CouplingSequence& seq,
                                                   int R)
{
    auto lines = exact_cutoff_spectrum(t, seq, R);
    const double shift = static_cast<double>(t.size(R)) * compression_shift(seq, t.spec(), R);
    lines.back().location += shift;
    return lines;
}

SpectralMeasure limiting_spectral_measure(const HierarchySpec& spec, const CouplingSequence& seq,
                                          int r_max)
{
    if (r_max < 0)
        throw std::out_of_range("r_max must be >= 0");
    SpectralMeasure mu;
    mu.atoms.reserve(r_max + 1);
    for (int r = 0; r <= r_max; ++r) {
        // 1/N_r - 1/N_{r+1} = (1 - 1/n_{r+1}) / N_r
        const double w = std::exp(-spec.log_size(r) + std::log1p(-1.0 / spec.branch(r + 1)));
        mu.atoms.push_back({seq.lambda(r), w});
    }
    mu.upper_remainder = std::exp(-spec.log_size(r_max + 1));
    mu.declared_mass = 1.0 - mu.upper_remainder;
    return mu;
}

SpectralMeasure finite_volume_dos(const Truncation& t, const CouplingSequence& seq, int r,
                                  std::size_t cap)
{
    const Truncation block = t.prefix(r);
    if (block.site_count() > cap)
        throw DenseCapExceeded(block.site_count(), cap);
    const auto op = Operator::restricted_full_laplacian(block, seq);
    const auto values = dense_symmetric_eigenvalues(op.assemble_dense(cap));
    const double Nr = static_cast<double>(block.site_count());

    SpectralMeasure nu;
    for (const auto& line : cluster_eigenvalues(values, 1e-9))
        nu.atoms.push_back({line.location, line.multiplicity / Nr});
    nu.declared_mass = 1.0;
    return nu;
}

double spectral_dimension(int degree, double rho)
{
    if (degree < 2 || !(rho > 1.0))
        throw std::invalid_argument("spectral dimension needs degree >= 2 and rho > 1");
    return 2.0 * std::log(static_cast<double>(degree)) / std::log(rho);
}

std::optional<double> spectral_dimension(const HierarchySpec& spec, const CouplingSequence& seq)
{
    const auto rate = seq.decay_rate();
    if (!spec.is_homogeneous() || !rate)
        return std::nullopt;
    return spectral_dimension(spec.degree(), *rate);
}

double fit_spectral_dimension(const SpectralMeasure& mu, double t_min, double t_max)
{
    // mu([1 - t, 1]) at the atom locations, accumulated from the top
    std::vector<double> xs, ys;
    double upper = mu.upper_remainder;
    for (auto it = mu.atoms.rbegin(); it != mu.atoms.rend(); ++it) {
        upper += it->weight;
        const double t = 1.0 - it->location;
        if (t > 0.0 && t >= t_min * (1 - 1e-9) && t <= t_max * (1 + 1e-9) && upper > 0.0) {
            xs.push_back(std::log(t));
            ys.push_back(std::log(upper));
        }
    }
    if (xs.size() < 3)
        throw std::invalid_argument("spectral dimension fit needs at least 3 atoms in range");
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return 2.0 * sxy / sxx;
}

std::string_view to_string(WalkClass c)
{
    switch (c) {
    case WalkClass::Transient: return "transient";
    case WalkClass::Recurrent: return "recurrent";
    case WalkClass::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

WalkReport walk_classification(const HierarchySpec& spec, const CouplingSequence& seq, int r_max)
{
    if (r_max < 1)
        throw std::invalid_argument("r_max must be >= 1");
    auto term = [&](int r) {
        return std::exp(-spec.log_size(r) + std::log1p(-1.0 / spec.branch(r + 1)) -
                        seq.log_tail(r));
    };

    WalkReport rep;
    rep.terms.reserve(r_max + 1);
    for (int r = 0; r <= r_max; ++r)
        rep.terms.push_back(term(r));
    rep.partial_sums.resize(rep.terms.size());
    std::partial_sum(rep.terms.begin(), rep.terms.end(), rep.partial_sums.begin());
    rep.spectral_dimension = spectral_dimension(spec, seq);

    if (spec.is_homogeneous() && seq.is_analytic()) {
        rep.analytic = true;
        const double n = spec.degree();
        const double rate = *seq.decay_rate();
        if (rate < n) {
            rep.classification = WalkClass::Transient;
            if (std::holds_alternative<Geometric>(seq.params())) {
                rep.value = (1.0 - 1.0 / n) / (1.0 - rate / n);
            } else {
                double acc = rep.partial_sums.back();
                for (int r = r_max + 1;; ++r) {
                    const double t = term(r);
                    acc += t;
                    if (t < 1e-17 * acc)
                        break;
                }
                rep.value = acc;
            }
        } else {
            rep.classification = WalkClass::Recurrent;
        }
        return rep;
    }

    const Verdict v = classify_series_heuristic(rep.terms);
    if (converges(v)) {
        rep.classification = WalkClass::Transient;
        rep.value = rep.partial_sums.back();
    } else if (diverges(v)) {
        rep.classification = WalkClass::Recurrent;
    }
    return rep;
}

} // namespace hieram
