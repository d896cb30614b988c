#pragma once

#include <complex>
#include <span>
#include <vector>

#include "hieram/coupling.hpp"
#include "hieram/dense.hpp"
#include "hieram/errors.hpp"
#include "hieram/hierarchy.hpp"

namespace hieram {

using Complex = std::complex<double>;

enum class OperatorKind
{
    Averaging,
    CutoffLaplacian,
    RestrictedFullLaplacian,
    Hamiltonian,
};

// sum_{s > R} p_s / N_s: the coefficient of the rank-one term 1 1^T that the
// levels above the truncation contribute to P_R Delta P_R.
double compression_shift(const CouplingSequence& seq, const HierarchySpec& spec, int depth);

// Matrix-free operator on l^2 of a truncation, of the form
//
//   psi -> diag * psi + sum_{s <= r} w_s E_s psi + c (sum psi) 1
//
// which covers E_r, Delta_r, P_R Delta P_R and H_{omega,r}. Applying it costs
// O(N_R): block sums are formed bottom-up once and the weighted means pushed
// back down the tree.
class Operator
{
  public:
    static Operator averaging(const Truncation& t, int r);
    static Operator cutoff_laplacian(const Truncation& t, const CouplingSequence& seq, int r);
    static Operator restricted_full_laplacian(const Truncation& t, const CouplingSequence& seq);
    // V_omega + Delta_r. With include_tail (only meaningful at r = R) the
    // compression term of the untruncated Laplacian is added as well.
    static Operator hamiltonian(const Truncation& t, const CouplingSequence& seq,
                                std::vector<double> potential, int r, bool include_tail = false);

    OperatorKind kind() const { return kind_; }
    int rank() const { return rank_; }
    std::size_t dimension() const { return truncation_.site_count(); }
    const Truncation& truncation() const { return truncation_; }
    const std::vector<double>& level_weights() const { return level_weights_; }
    double uniform_shift() const { return uniform_shift_; }
    const std::vector<double>& diagonal() const { return diagonal_; }

    void apply(std::span<const double> in, std::span<double> out) const;
    void apply(std::span<const Complex> in, std::span<Complex> out) const;
    std::vector<double> apply(std::span<const double> in) const;
    std::vector<Complex> apply(std::span<const Complex> in) const;

    DenseMatrix assemble_dense(std::size_t cap = kDefaultDenseCap) const;

  private:
    Operator(OperatorKind kind, Truncation t, int r);

    template <class T>
    void apply_impl(std::span<const T> in, std::span<T> out) const;

    OperatorKind kind_;
    Truncation truncation_;
    int rank_ = 0;
    std::vector<double> level_weights_; // w_0 .. w_r
    double uniform_shift_ = 0.0;
    std::vector<double> diagonal_;      // empty when no potential
};

// Spec-named free function.
inline DenseMatrix assemble_dense(const Operator& op, std::size_t cap = kDefaultDenseCap)
{
    return op.assemble_dense(cap);
}

} // namespace hieram
