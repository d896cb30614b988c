#include "hieram/operators.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hieram {

double compression_shift(const CouplingSequence& seq, const HierarchySpec& spec, int depth)
{
    if (depth < 0)
        throw std::out_of_range("negative depth");
    const int known = seq.defined_ranks();
    if (known != INT_MAX) {
        // Explicit weights: only the listed ranks can be resolved per level.
        double acc = 0.0;
        for (int s = depth + 1; s <= known; ++s)
            acc += seq.p(s) / spec.size(s);
        if (seq.tail(std::max(depth, known)) > 0.0)
            throw std::domain_error("compression term needs p_s beyond the explicit weights "
                                    "(declared tail mass is not resolved per rank)");
        return acc;
    }
    // sum_{s' > s} p_{s'} / N_{s'} <= tail(s) / N_{s+1}
    double acc = 0.0;
    for (int s = depth + 1;; ++s) {
        acc += std::exp(seq.log_p(s) - spec.log_size(s));
        const double remainder = std::exp(seq.log_tail(s) - spec.log_size(s + 1));
        if (remainder <= 1e-18 * acc || remainder == 0.0)
            break;
    }
    return acc;
}

Operator::Operator(OperatorKind kind, Truncation t, int r)
    : kind_(kind), truncation_(std::move(t)), rank_(r), level_weights_(r + 1, 0.0)
{
    if (r < 0 || r > truncation_.depth())
        throw std::out_of_range("operator rank " + std::to_string(r) + " outside [0, " +
                                std::to_string(truncation_.depth()) + "]");
}

Operator Operator::averaging(const Truncation& t, int r)
{
    Operator op(OperatorKind::Averaging, t, r);
    op.level_weights_[r] = 1.0;
    return op;
}

Operator Operator::cutoff_laplacian(const Truncation& t, const CouplingSequence& seq, int r)
{
    Operator op(OperatorKind::CutoffLaplacian, t, r);
    for (int s = 1; s <= r; ++s)
        op.level_weights_[s] = seq.p(s);
    return op;
}

Operator Operator::restricted_full_laplacian(const Truncation& t, const CouplingSequence& seq)
{
    Operator op(OperatorKind::RestrictedFullLaplacian, t, t.depth());
    for (int s = 1; s <= t.depth(); ++s)
        op.level_weights_[s] = seq.p(s);
    op.uniform_shift_ = compression_shift(seq, t.spec(), t.depth());
    return op;
}

Operator Operator::hamiltonian(const Truncation& t, const CouplingSequence& seq,
                               std::vector<double> potential, int r, bool include_tail)
{
    if (potential.size() != t.site_count())
        throw std::invalid_argument("potential has " + std::to_string(potential.size()) +
                                    " values for " + std::to_string(t.site_count()) + " sites");
    Operator op(OperatorKind::Hamiltonian, t, r);
    for (int s = 1; s <= r; ++s)
        op.level_weights_[s] = seq.p(s);
    if (include_tail && r == t.depth())
        op.uniform_shift_ = compression_shift(seq, t.spec(), t.depth());
    op.diagonal_ = std::move(potential);
    return op;
}

template <class T>
void Operator::apply_impl(std::span<const T> in, std::span<T> out) const
{
    const std::size_t N = dimension();
    if (in.size() != N || out.size() != N)
        throw std::invalid_argument("vector length " + std::to_string(in.size()) +
                                    " does not match operator dimension " + std::to_string(N));
    const int top = (uniform_shift_ != 0.0) ? truncation_.depth() : rank_;
    const auto& sizes = truncation_.sizes();

    // sums[s][b]: sum of psi over the b-th rank-s cluster, s = 1 .. top
    std::vector<std::vector<T>> sums(top + 1);
    for (int s = 1; s <= top; ++s) {
        const std::vector<T>& below = (s == 1) ? sums[0] : sums[s - 1];
        const std::size_t blocks = N / sizes[s];
        const std::size_t n = sizes[s] / sizes[s - 1];
        sums[s].assign(blocks, T{});
        for (std::size_t b = 0; b < blocks; ++b) {
            T acc{};
            for (std::size_t j = 0; j < n; ++j)
                acc += (s == 1) ? in[b * n + j] : below[b * n + j];
            sums[s][b] = acc;
        }
    }

    // push weighted means back down: acc[s][b] = sum_{s' >= s} w_s' mean_s'
    std::vector<T> acc_above;
    if (top >= 1) {
        acc_above.assign(N / sizes[top], T{});
        for (std::size_t b = 0; b < acc_above.size(); ++b) {
            T v{};
            if (top <= rank_ && level_weights_[top] != 0.0)
                v += level_weights_[top] * sums[top][b] / static_cast<double>(sizes[top]);
            if (uniform_shift_ != 0.0)
                v += uniform_shift_ * sums[top][b];
            acc_above[b] = v;
        }
        for (int s = top - 1; s >= 1; --s) {
            const std::size_t n = sizes[s + 1] / sizes[s];
            std::vector<T> acc(N / sizes[s]);
            const double w = (s <= rank_) ? level_weights_[s] / static_cast<double>(sizes[s]) : 0.0;
            for (std::size_t b = 0; b < acc.size(); ++b)
                acc[b] = acc_above[b / n] + w * sums[s][b];
            acc_above = std::move(acc);
        }
    }

    const double w0 = level_weights_[0];
    const std::size_t n1 = top >= 1 ? sizes[1] : 1;
    for (std::size_t x = 0; x < N; ++x) {
        T v = w0 * in[x];
        if (top >= 1)
            v += acc_above[x / n1];
        if (!diagonal_.empty())
            v += diagonal_[x] * in[x];
        out[x] = v;
    }
}

void Operator::apply(std::span<const double> in, std::span<double> out) const
{
    apply_impl<double>(in, out);
}

void Operator::apply(std::span<const Complex> in, std::span<Complex> out) const
{
    apply_impl<Complex>(in, out);
}

std::vector<double> Operator::apply(std::span<const double> in) const
{
    std::vector<double> out(in.size());
    apply(in, std::span<double>(out));
    return out;
}

std::vector<Complex> Operator::apply(std::span<const Complex> in) const
{
    std::vector<Complex> out(in.size());
    apply(in, std::span<Complex>(out));
    return out;
}

DenseMatrix Operator::assemble_dense(std::size_t cap) const
{
    const std::size_t N = dimension();
    if (N > cap)
        throw DenseCapExceeded(N, cap);
    DenseMatrix m(N, N);
    std::vector<double> basis(N, 0.0), column(N);
    for (std::size_t j = 0; j < N; ++j) {
        basis[j] = 1.0;
        apply(std::span<const double>(basis), std::span<double>(column));
        basis[j] = 0.0;
        for (std::size_t i = 0; i < N; ++i)
            m(i, j) = column[i];
    }
    return m;
}

} // namespace hieram
