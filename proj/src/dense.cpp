#include "hieram/dense.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace hieram {

std::vector<double> DenseMatrix::multiply(std::span<const double> v) const
{
    if (v.size() != cols_)
        throw std::invalid_argument("matrix-vector size mismatch");
    std::vector<double> out(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        const auto r = row(i);
        out[i] = std::inner_product(r.begin(), r.end(), v.begin(), 0.0);
    }
    return out;
}

DenseSpectrum::DenseSpectrum(std::vector<double> eigenvalues, std::vector<double> vectors)
    : eigenvalues_(std::move(eigenvalues)), vectors_(std::move(vectors))
{
    if (vectors_.size() != eigenvalues_.size() * eigenvalues_.size())
        throw std::invalid_argument("eigenvector storage does not match dimension");
}

namespace {

void check_symmetric(const DenseMatrix& a, double tol)
{
    if (a.rows() == 0)
        throw std::invalid_argument("eigensolve of an empty matrix");
    if (a.rows() != a.cols())
        throw std::invalid_argument("eigensolve of a non-square matrix");
    double scale = 1.0;
    for (double v : a.data())
        scale = std::max(scale, std::abs(v));
    const std::size_t n = a.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (std::abs(a(i, j) - a(j, i)) > tol * scale)
                throw std::invalid_argument("eigensolve of a non-symmetric matrix");
}

// Column-major work array: col(k)[i] is entry (i, k). For the symmetric input
// this is the same memory image as the row-major matrix, and every inner loop
// below runs down a column.
class Work
{
  public:
    Work(const DenseMatrix& a) : n_(a.rows()), v_(a.data()) {}

    double& operator()(std::size_t i, std::size_t k) { return v_[k * n_ + i]; }
    double* col(std::size_t k) { return v_.data() + k * n_; }
    std::vector<double> release() { return std::move(v_); }

  private:
    std::size_t n_;
    std::vector<double> v_;
};

// Householder reduction to tridiagonal form (EISPACK tred2 ordering).
// On return d holds the diagonal, e the subdiagonal in e[1..n-1]; with
// vectors the work array holds the orthogonal transformation.
void tridiagonalize(Work& V, std::size_t n, std::vector<double>& d, std::vector<double>& e,
                    bool vectors)
{
    for (std::size_t j = 0; j < n; ++j)
        d[j] = V(n - 1, j);

    for (std::size_t i = n - 1; i > 0; --i) {
        double scale = 0.0;
        double h = 0.0;
        for (std::size_t k = 0; k < i; ++k)
            scale += std::abs(d[k]);
        if (scale == 0.0) {
            e[i] = d[i - 1];
            for (std::size_t j = 0; j < i; ++j) {
                d[j] = V(i - 1, j);
                V(i, j) = 0.0;
                V(j, i) = 0.0;
            }
        } else {
            for (std::size_t k = 0; k < i; ++k) {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            double f = d[i - 1];
            double g = std::sqrt(h);
            if (f > 0)
                g = -g;
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            std::fill(e.begin(), e.begin() + i, 0.0);

            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                V(j, i) = f;
                double* cj = V.col(j);
                g = e[j] + cj[j] * f;
                for (std::size_t k = j + 1; k < i; ++k) {
                    g += cj[k] * d[k];
                    e[k] += cj[k] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for (std::size_t j = 0; j < i; ++j) {
                e[j] /= h;
                f += e[j] * d[j];
            }
            const double hh = f / (h + h);
            for (std::size_t j = 0; j < i; ++j)
                e[j] -= hh * d[j];
            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                g = e[j];
                double* cj = V.col(j);
                for (std::size_t k = j; k < i; ++k)
                    cj[k] -= (f * e[k] + g * d[k]);
                d[j] = V(i - 1, j);
                V(i, j) = 0.0;
            }
        }
        d[i] = h;
    }

    if (!vectors) {
        for (std::size_t j = 0; j < n; ++j)
            d[j] = V(j, j);
        e[0] = 0.0;
        return;
    }

    // Accumulate transformations.
    for (std::size_t i = 0; i + 1 < n; ++i) {
        V(n - 1, i) = V(i, i);
        V(i, i) = 1.0;
        const double h = d[i + 1];
        double* next = V.col(i + 1);
        if (h != 0.0) {
            for (std::size_t k = 0; k <= i; ++k)
                d[k] = next[k] / h;
            for (std::size_t j = 0; j <= i; ++j) {
                double* cj = V.col(j);
                double g = 0.0;
                for (std::size_t k = 0; k <= i; ++k)
                    g += next[k] * cj[k];
                for (std::size_t k = 0; k <= i; ++k)
                    cj[k] -= g * d[k];
            }
        }
        for (std::size_t k = 0; k <= i; ++k)
            next[k] = 0.0;
    }
    for (std::size_t j = 0; j < n; ++j) {
        d[j] = V(n - 1, j);
        V(n - 1, j) = 0.0;
    }
    V(n - 1, n - 1) = 1.0;
    e[0] = 0.0;
}

// Implicit-shift QL on the tridiagonal (d, e) (EISPACK tql2 ordering).
void tridiagonal_ql(Work& V, std::size_t n, std::vector<double>& d, std::vector<double>& e,
                    bool vectors)
{
    for (std::size_t i = 1; i < n; ++i)
        e[i - 1] = e[i];
    e[n - 1] = 0.0;

    double f = 0.0;
    double tst1 = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();
    const std::size_t max_iter = 60 * n + 100;
    std::size_t total_iter = 0;

    for (std::size_t l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
        std::size_t m = l;
        while (m < n) {
            if (std::abs(e[m]) <= eps * tst1)
                break;
            ++m;
        }
        if (m > l) {
            do {
                if (++total_iter > max_iter)
                    throw std::runtime_error("tridiagonal QL failed to converge");
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0)
                    r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (std::size_t i = l + 2; i < n; ++i)
                    d[i] -= h;
                f += h;

                p = d[m];
                double c = 1.0, c2 = 1.0, c3 = 1.0;
                const double el1 = e[l + 1];
                double s = 0.0, s2 = 0.0;
                for (std::size_t ii = m; ii-- > l;) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[ii];
                    h = c * p;
                    r = std::hypot(p, e[ii]);
                    e[ii + 1] = s * r;
                    s = e[ii] / r;
                    c = p / r;
                    p = c * d[ii] - s * g;
                    d[ii + 1] = h + s * (c * g + s * d[ii]);
                    if (vectors) {
                        double* a = V.col(ii);
                        double* b = V.col(ii + 1);
                        for (std::size_t k = 0; k < n; ++k) {
                            const double t = b[k];
                            b[k] = s * a[k] + c * t;
                            a[k] = c * a[k] - s * t;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::abs(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

} // namespace

DenseSpectrum dense_symmetric_eigensolve(const DenseMatrix& a, double symmetry_tol)
{
    check_symmetric(a, symmetry_tol);
    const std::size_t n = a.rows();
    Work V(a);
    std::vector<double> d(n), e(n);
    tridiagonalize(V, n, d, e, true);
    tridiagonal_ql(V, n, d, e, true);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return d[i] < d[j]; });

    std::vector<double> work = V.release();
    std::vector<double> values(n);
    std::vector<double> vectors(n * n);
    for (std::size_t k = 0; k < n; ++k) {
        values[k] = d[order[k]];
        std::copy_n(work.begin() + order[k] * n, n, vectors.begin() + k * n);
    }
    return DenseSpectrum(std::move(values), std::move(vectors));
}

std::vector<double> dense_symmetric_eigenvalues(const DenseMatrix& a, double symmetry_tol)
{
    check_symmetric(a, symmetry_tol);
    const std::size_t n = a.rows();
    Work V(a);
    std::vector<double> d(n), e(n);
    tridiagonalize(V, n, d, e, false);
    tridiagonal_ql(V, n, d, e, false);
    std::sort(d.begin(), d.end());
    return d;
}

double spectral_norm_symmetric(const DenseMatrix& a)
{
    const auto ev = dense_symmetric_eigenvalues(a);
    return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

} // namespace hieram
