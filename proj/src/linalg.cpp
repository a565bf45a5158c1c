#include "ethdyn/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "ethdyn/errors.hpp"

namespace ethdyn::linalg {

namespace {

using CVec = std::vector<Complex>;

constexpr double kRootClusterTol = 1e-9;

double cnorm(const CVec& v) {
    double sum = 0.0;
    for (const auto& c : v) {
        sum += std::norm(c);
    }
    return std::sqrt(sum);
}

CVec cross(const CVec& a, const CVec& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

void normalize(CVec& v) {
    const double len = cnorm(v);
    if (len == 0.0) {
        return;
    }
    std::size_t pivot = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (std::abs(v[i]) > std::abs(v[pivot])) {
            pivot = i;
        }
    }
    const Complex phase = std::conj(v[pivot]) / std::abs(v[pivot]);
    for (auto& c : v) {
        c = c * phase / len;
    }
    // the rotation leaves a rounding-level imaginary part on the pivot
    v[pivot] = Complex(v[pivot].real(), 0.0);
}

// Null vector of B = A - lambda I for a 2x2 matrix. `slot` picks the basis
// vector when B vanishes (lambda I == A, both eigenvalues equal).
CVec eigvec2(const SquareMatrix& m, Complex lambda, std::size_t slot, double scale) {
    const Complex a = m(0, 0) - lambda;
    const Complex b = m(0, 1);
    const Complex c = m(1, 0);
    const Complex d = m(1, 1) - lambda;
    CVec from_row0{b, -a};
    CVec from_row1{-d, c};
    const double n0 = cnorm(from_row0);
    const double n1 = cnorm(from_row1);
    if (std::max(n0, n1) <= kRootClusterTol * scale) {
        return slot % 2 == 0 ? CVec{1.0, 0.0} : CVec{0.0, 1.0};
    }
    return n0 >= n1 ? from_row0 : from_row1;
}

CVec eigvec3(const SquareMatrix& m, Complex lambda, std::size_t slot, double scale) {
    std::array<CVec, 3> rows;
    for (std::size_t i = 0; i < 3; ++i) {
        rows[i] = CVec{m(i, 0), m(i, 1), m(i, 2)};
        rows[i][i] -= lambda;
    }
    // rank 2: the null direction is the cross product of two independent rows
    CVec best;
    double best_norm = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = i + 1; j < 3; ++j) {
            CVec c = cross(rows[i], rows[j]);
            const double n = cnorm(c);
            if (n > best_norm) {
                best_norm = n;
                best = std::move(c);
            }
        }
    }
    if (best_norm > kRootClusterTol * scale * scale) {
        return best;
    }

    // rank <= 1
    std::size_t big = 0;
    for (std::size_t i = 1; i < 3; ++i) {
        if (cnorm(rows[i]) > cnorm(rows[big])) {
            big = i;
        }
    }
    const CVec& r = rows[big];
    if (cnorm(r) <= kRootClusterTol * scale) {
        CVec e(3, 0.0);
        e[slot % 3] = 1.0;
        return e;
    }
    std::size_t axis = 0;
    for (std::size_t k = 1; k < 3; ++k) {
        if (std::abs(r[k]) < std::abs(r[axis])) {
            axis = k;
        }
    }
    CVec e(3, 0.0);
    e[axis] = 1.0;
    CVec first = cross(r, e);
    if (slot % 2 == 0) {
        return first;
    }
    return cross(r, first);
}

// One real root of x^3 + a x^2 + b x + c, polished by Newton.
double real_cubic_root(double a, double b, double c) {
    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    const double disc = q * q / 4.0 + p * p * p / 27.0;
    double t;
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        t = std::cbrt(-q / 2.0 + s) + std::cbrt(-q / 2.0 - s);
    } else {
        const double r = std::sqrt(-p / 3.0);
        const double phi = std::acos(std::clamp(-q / (2.0 * r * r * r), -1.0, 1.0));
        t = 2.0 * r * std::cos(phi / 3.0);
    }
    double x = t - a / 3.0;
    for (int it = 0; it < 3; ++it) {
        const double f = ((x + a) * x + b) * x + c;
        const double df = (3.0 * x + 2.0 * a) * x + b;
        if (df == 0.0) {
            break;
        }
        const double step = f / df;
        x -= step;
        if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) {
            break;
        }
    }
    return x;
}

std::vector<Complex> eigenvalues(const SquareMatrix& m) {
    if (m.size() == 2) {
        auto roots = quadratic_eigenvalues(m.trace(), m.determinant());
        return {roots[0], roots[1]};
    }
    if (m(2, 0) == 0.0 && m(2, 1) == 0.0) {
        const double tr = m(0, 0) + m(1, 1);
        const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        auto roots = quadratic_eigenvalues(tr, det);
        return {roots[0], roots[1], Complex(m(2, 2), 0.0)};
    }
    // characteristic polynomial x^3 + a x^2 + b x + c
    const double a = -m.trace();
    const double b = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) -
                     m(0, 2) * m(2, 0) + m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
    const double c = -m.determinant();
    const double r = real_cubic_root(a, b, c);
    // deflate: (x - r)(x^2 + p x + q)
    const double p = a + r;
    const double q = b + p * r;
    auto roots = quadratic_eigenvalues(-p, q);
    return {roots[0], roots[1], Complex(r, 0.0)};
}

} // namespace

SquareMatrix::SquareMatrix(std::size_t n) : n_(n) {
    if (n != 2 && n != 3) {
        throw DomainError("matrix dimension must be 2 or 3");
    }
}

SquareMatrix SquareMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    SquareMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size()) {
            throw DomainError("matrix must be square");
        }
        for (std::size_t j = 0; j < rows.size(); ++j) {
            m(i, j) = rows[i][j];
        }
    }
    return m;
}

double SquareMatrix::trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        t += (*this)(i, i);
    }
    return t;
}

double SquareMatrix::determinant() const {
    const auto& m = *this;
    if (n_ == 2) {
        return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    }
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

double SquareMatrix::norm_inf() const {
    double best = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n_; ++j) {
            row += std::abs((*this)(i, j));
        }
        best = std::max(best, row);
    }
    return best;
}

bool SquareMatrix::all_finite() const {
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
            if (!std::isfinite((*this)(i, j))) {
                return false;
            }
        }
    }
    return true;
}

std::vector<std::vector<double>> SquareMatrix::rows() const {
    std::vector<std::vector<double>> out(n_, std::vector<double>(n_));
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
            out[i][j] = (*this)(i, j);
        }
    }
    return out;
}

std::vector<double> SquareMatrix::packed() const {
    std::vector<double> out;
    out.reserve(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
            out.push_back((*this)(i, j));
        }
    }
    return out;
}

std::array<Complex, 2> quadratic_eigenvalues(double trace, double det) {
    const double disc = trace * trace - 4.0 * det;
    if (disc < 0.0) {
        const double re = trace / 2.0;
        const double im = std::sqrt(-disc) / 2.0;
        return {Complex(re, im), Complex(re, -im)};
    }
    const double s = std::sqrt(disc);
    if (trace == 0.0) {
        return {Complex(s / 2.0, 0.0), Complex(-s / 2.0, 0.0)};
    }
    // cancellation-free pair: q carries the sign of the trace
    const double q = 0.5 * (trace + std::copysign(s, trace));
    const double other = det / q;
    const double hi = std::max(q, other);
    const double lo = std::min(q, other);
    return {Complex(hi, 0.0), Complex(lo, 0.0)};
}

std::vector<EigenPair> eigenpairs(const SquareMatrix& m) {
    const std::size_t n = m.size();
    if (n != 2 && n != 3) {
        throw DomainError("eigenpairs: dimension must be 2 or 3");
    }
    auto values = eigenvalues(m);
    std::sort(values.begin(), values.end(), [](const Complex& x, const Complex& y) {
        if (x.real() != y.real()) {
            return x.real() > y.real();
        }
        return x.imag() > y.imag();
    });

    const double scale = std::max(1.0, m.norm_inf());
    std::vector<EigenPair> pairs;
    pairs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        // equal eigenvalues get successive basis slots
        std::size_t slot = 0;
        for (std::size_t j = 0; j < i; ++j) {
            if (std::abs(values[j] - values[i]) <= kRootClusterTol * scale) {
                ++slot;
            }
        }
        CVec v = n == 2 ? eigvec2(m, values[i], slot, scale) : eigvec3(m, values[i], slot, scale);
        normalize(v);
        pairs.push_back(EigenPair{values[i], std::move(v)});
    }
    return pairs;
}

double residual(const SquareMatrix& m, const EigenPair& pair) {
    const std::size_t n = m.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        Complex acc = -pair.value * pair.vector[i];
        for (std::size_t j = 0; j < n; ++j) {
            acc += m(i, j) * pair.vector[j];
        }
        sum += std::norm(acc);
    }
    return std::sqrt(sum);
}

std::vector<double> multiply(const SquareMatrix& m, const std::vector<double>& x) {
    std::vector<double> out(m.size(), 0.0);
    for (std::size_t i = 0; i < m.size(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m.size(); ++j) {
            acc += m(i, j) * x[j];
        }
        out[i] = acc;
    }
    return out;
}

} // namespace ethdyn::linalg
