#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hieram {

// Row-major real matrix.
class DenseMatrix
{
  public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill)
    {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    const std::vector<double>& data() const { return data_; }

    std::vector<double> multiply(std::span<const double> v) const;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Full spectrum of a real symmetric matrix: ascending eigenvalues and an
// orthonormal set of eigenvectors. vector(k) is the k-th eigenvector,
// stored contiguously; component(x, k) is its x-th entry.
class DenseSpectrum
{
  public:
    DenseSpectrum(std::vector<double> eigenvalues, std::vector<double> vectors);

    std::size_t dimension() const { return eigenvalues_.size(); }
    const std::vector<double>& eigenvalues() const { return eigenvalues_; }
    std::span<const double> vector(std::size_t k) const
    {
        return {vectors_.data() + k * dimension(), dimension()};
    }
    double component(std::size_t x, std::size_t k) const { return vectors_[k * dimension() + x]; }

  private:
    std::vector<double> eigenvalues_;
    std::vector<double> vectors_;
};

// Householder tridiagonalization followed by implicit-shift QL.
// Throws std::invalid_argument for empty or non-symmetric input.
DenseSpectrum dense_symmetric_eigensolve(const DenseMatrix& a, double symmetry_tol = 1e-12);

// Eigenvalues only (same reduction, no vector accumulation).
std::vector<double> dense_symmetric_eigenvalues(const DenseMatrix& a, double symmetry_tol = 1e-12);

// Largest absolute eigenvalue of a symmetric matrix.
double spectral_norm_symmetric(const DenseMatrix& a);

} // namespace hieram
