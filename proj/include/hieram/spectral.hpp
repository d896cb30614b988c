#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hieram/coupling.hpp"
#include "hieram/errors.hpp"
#include "hieram/hierarchy.hpp"

namespace hieram {

struct SpectralLine
{
    double location = 0.0;
    std::size_t multiplicity = 0;
};

struct Atom
{
    double location = 0.0;
    double weight = 0.0;
};

// Finite list of atoms with strictly increasing locations. Mass not carried
// by the atoms (upper_remainder) is understood to sit above the last atom, as
// it does for the truncated limiting measure.
struct SpectralMeasure
{
    std::vector<Atom> atoms;
    double declared_mass = 0.0;
    double upper_remainder = 0.0;

    double atom_mass() const;
};

// Groups ascending values into clusters whose consecutive members differ by
// less than tol; the location is the cluster mean.
std::vector<SpectralLine> cluster_eigenvalues(std::span<const double> sorted, double tol);

// Spectrum of Delta_r on l^2(Q_r(x_0)): lambda_s with multiplicity
// D_s = N_r (1/N_s - 1/N_{s+1}) for s < r and D_r = 1.
std::vector<SpectralLine> exact_cutoff_spectrum(const Truncation& t, const CouplingSequence& seq,
                                                int r);

// Spectrum of P_R Delta P_R: the cut-off spectrum with the top eigenvalue
// moved up by N_R sum_{s > R} p_s / N_s.
std::vector<SpectralLine> restricted_full_spectrum(const Truncation& t, const CouplingSequence& seq,
                                                   int R);

// mu truncated after rank r_max: atoms (lambda_r, 1/N_r - 1/N_{r+1}).
SpectralMeasure limiting_spectral_measure(const HierarchySpec& spec, const CouplingSequence& seq,
                                          int r_max);

// nu_r: counting measure of the dense spectrum of P_r Delta P_r.
SpectralMeasure finite_volume_dos(const Truncation& t, const CouplingSequence& seq, int r,
                                  std::size_t cap = kDefaultDenseCap);

double spectral_dimension(int degree, double rho);
std::optional<double> spectral_dimension(const HierarchySpec& spec, const CouplingSequence& seq);

// Twice the least-squares slope of log mu([1-t, 1]) against log t, sampled at
// the atom locations t = 1 - lambda_r inside [t_min, t_max].
double fit_spectral_dimension(const SpectralMeasure& mu, double t_min, double t_max);

enum class WalkClass
{
    Transient,
    Recurrent,
    Inconclusive,
};

std::string_view to_string(WalkClass c);

struct WalkReport
{
    std::vector<double> terms;        // r = 0 .. r_max
    std::vector<double> partial_sums; // R_0 .. R_{r_max}
    WalkClass classification = WalkClass::Inconclusive;
    bool analytic = false;
    std::optional<double> value;      // R when transient
    std::optional<double> spectral_dimension;
};

// Return sum R = sum_r (1/N_r - 1/N_{r+1}) / (1 - lambda_r), evaluated in log
// space so very deep partial sums stay finite.
WalkReport walk_classification(const HierarchySpec& spec, const CouplingSequence& seq, int r_max);

} // namespace hieram
