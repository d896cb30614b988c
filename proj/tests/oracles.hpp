#pragma once

// Reference computations used by the tests. They work from the defining
// formulas with Eigen and share no code paths with the library kernels.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "hieram/coupling.hpp"
#include "hieram/hierarchy.hpp"

namespace oracle {

using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;

// Mixed-radix digits of x, least significant first.
inline std::vector<int> digits(std::size_t x, const std::vector<int>& branching)
{
    std::vector<int> d;
    for (int n : branching) {
        d.push_back(static_cast<int>(x % n));
        x /= n;
    }
    return d;
}

// Highest digit position (1-based) where x and y differ; 0 when equal.
inline int distance(std::size_t x, std::size_t y, const std::vector<int>& branching)
{
    const auto a = digits(x, branching), b = digits(y, branching);
    int d = 0;
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k] != b[k])
            d = static_cast<int>(k) + 1;
    return d;
}

inline std::vector<int> branching_of(const hieram::HierarchySpec& spec)
{
    std::vector<int> b;
    for (int r = 1; r <= spec.depth(); ++r)
        b.push_back(spec.branch(r));
    return b;
}

// <delta_x, sum_{s<=r} p_s E_s delta_y> = sum_{s = max(1,d)}^{r} p_s / N_s
inline Mat cutoff_laplacian(const hieram::HierarchySpec& spec, const hieram::CouplingSequence& seq,
                            int r)
{
    const auto b = branching_of(spec);
    std::size_t N = 1;
    for (int n : b)
        N *= n;
    std::vector<double> Ns(spec.depth() + 1, 1.0);
    for (int s = 1; s <= spec.depth(); ++s)
        Ns[s] = Ns[s - 1] * b[s - 1];
    Mat a = Mat::Zero(N, N);
    for (std::size_t x = 0; x < N; ++x)
        for (std::size_t y = 0; y < N; ++y) {
            const int d = distance(x, y, b);
            for (int s = std::max(1, d); s <= r; ++s)
                a(x, y) += seq.p(s) / Ns[s];
        }
    return a;
}

// P_R Delta P_R with the tail sum truncated once the terms drop below 1e-300.
inline Mat restricted_full(const hieram::HierarchySpec& spec, const hieram::CouplingSequence& seq)
{
    Mat a = cutoff_laplacian(spec, seq, spec.depth());
    double c = 0.0;
    double Ns = spec.size(spec.depth());
    for (int s = spec.depth() + 1; s < 400; ++s) {
        Ns *= spec.branch(s);
        const double term = seq.p(s) / Ns;
        c += term;
        if (term < 1e-300)
            break;
    }
    return a.array() + c;
}

inline Mat hamiltonian(const hieram::HierarchySpec& spec, const hieram::CouplingSequence& seq,
                       const std::vector<double>& omega, int r)
{
    Mat a = cutoff_laplacian(spec, seq, r);
    for (std::size_t x = 0; x < omega.size(); ++x)
        a(x, x) += omega[x];
    return a;
}

inline CMat resolvent(const Mat& h, std::complex<double> z)
{
    const auto n = h.rows();
    CMat m = h.cast<std::complex<double>>();
    m -= z * CMat::Identity(n, n);
    return m.partialPivLu().inverse();
}

inline Vec sorted_eigenvalues(const Mat& a)
{
    Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

inline std::vector<double> random_vector(std::size_t n, std::mt19937_64& g)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v)
        x = u(g);
    return v;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

} // namespace oracle
