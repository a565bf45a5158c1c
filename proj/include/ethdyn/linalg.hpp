#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace ethdyn::linalg {

using Complex = std::complex<double>;

/// Dense row-major square matrix of dimension 2 or 3.
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n);
    /// Rows must all have length rows.size(); throws DomainError otherwise.
    static SquareMatrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * 3 + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * 3 + j]; }

    double trace() const;
    double determinant() const;
    /// Max absolute row sum.
    double norm_inf() const;
    bool all_finite() const;
    std::vector<std::vector<double>> rows() const;

    /// Packed row-major n*n coefficients, for the batch kernels.
    std::vector<double> packed() const;

    friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::array<double, 9> data_{};
};

/// Eigenvalue with a unit-length eigenvector. The phase is fixed so the
/// largest-magnitude component is real and positive.
struct EigenPair {
    Complex value;
    std::vector<Complex> vector;
};

/// All eigenpairs, sorted by descending real part then descending imaginary
/// part. 2x2 uses the quadratic formula; 3x3 with a last row of the form
/// [0, 0, g] takes g as an exact eigenvalue and solves the leading 2x2 block;
/// any other 3x3 goes through the cubic.
std::vector<EigenPair> eigenpairs(const SquareMatrix& m);

/// Roots of x^2 - trace*x + det = 0, larger real part first.
std::array<Complex, 2> quadratic_eigenvalues(double trace, double det);

/// ||A v - lambda v||_2
double residual(const SquareMatrix& m, const EigenPair& pair);

/// Matrix-vector product for real states.
std::vector<double> multiply(const SquareMatrix& m, const std::vector<double>& x);

} // namespace ethdyn::linalg
