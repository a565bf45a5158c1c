#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ethdyn/errors.hpp"
#include "ethdyn/linalg.hpp"
#include "support.hpp"

using namespace ethdyn;
using linalg::Complex;
using linalg::SquareMatrix;

namespace {

SquareMatrix random_matrix(std::size_t n) {
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = support::uniform(-3.0, 3.0);
        }
    }
    return m;
}

void check_normalized(const linalg::EigenPair& p) {
    double norm = 0.0;
    std::size_t big = 0;
    for (std::size_t i = 0; i < p.vector.size(); ++i) {
        norm += std::norm(p.vector[i]);
        if (std::abs(p.vector[i]) > std::abs(p.vector[big]) + 1e-12) {
            big = i;
        }
    }
    CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(p.vector[big].imag()) <= 1e-12);
    CHECK(p.vector[big].real() > 0.0);
}

} // namespace

TEST_CASE("symmetric stochastic matrices") {
    auto e = linalg::eigenpairs(SquareMatrix::from_rows({{0.8, 0.2}, {0.2, 0.8}}));
    CHECK(e[0].value.real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(e[1].value.real() == doctest::Approx(0.6).epsilon(1e-15));
    e = linalg::eigenpairs(SquareMatrix::from_rows({{0.5, 0.5}, {0.5, 0.5}}));
    CHECK(e[0].value.real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(e[1].value) <= 1e-15);
}

TEST_CASE("trace-free quadratic gives exact opposite roots") {
    const auto r = linalg::quadratic_eigenvalues(0.0, -3.0);
    CHECK(r[0] == -r[1]);
    CHECK(r[0].real() == doctest::Approx(std::sqrt(3.0)));
    const auto c = linalg::quadratic_eigenvalues(0.0, 3.0);
    CHECK(c[0].real() == 0.0);
    CHECK(c[0].imag() == doctest::Approx(std::sqrt(3.0)));
    CHECK(c[1] == std::conj(c[0]));
}

TEST_CASE("block triangular 3x3 keeps the corner eigenvalue exactly") {
    const auto m = SquareMatrix::from_rows({{1, 2, 0.3}, {2, 1, -3}, {0, 0, 0.7}});
    const auto e = linalg::eigenpairs(m);
    REQUIRE(e.size() == 3);
    CHECK(std::any_of(e.begin(), e.end(), [](const auto& p) { return p.value == Complex(0.7, 0.0); }));
    for (const auto& p : e) {
        CHECK(linalg::residual(m, p) < 1e-10);
    }
}

TEST_CASE("repeated eigenvalues still give independent unit vectors") {
    const auto e = linalg::eigenpairs(SquareMatrix::from_rows({{2, 0}, {0, 2}}));
    REQUIRE(e.size() == 2);
    const Complex dot = std::conj(e[0].vector[0]) * e[1].vector[0] + std::conj(e[0].vector[1]) * e[1].vector[1];
    CHECK(std::abs(dot) < 1e-12);
}

TEST_CASE("property: residuals, normalization and ordering for random matrices") {
    for (std::size_t n : {2u, 3u}) {
        for (int trial = 0; trial < 300; ++trial) {
            const auto m = random_matrix(n);
            const auto e = linalg::eigenpairs(m);
            REQUIRE(e.size() == n);
            Complex sum = 0.0;
            Complex prod = 1.0;
            for (std::size_t i = 0; i < n; ++i) {
                CHECK(linalg::residual(m, e[i]) < 1e-8 * std::max(1.0, m.norm_inf()));
                check_normalized(e[i]);
                sum += e[i].value;
                prod *= e[i].value;
                if (i > 0) {
                    const bool ordered = e[i - 1].value.real() > e[i].value.real() ||
                                         (e[i - 1].value.real() == e[i].value.real() &&
                                          e[i - 1].value.imag() >= e[i].value.imag());
                    CHECK(ordered);
                }
            }
            CHECK(std::abs(sum - m.trace()) < 1e-9 * std::max(1.0, m.norm_inf()));
            CHECK(std::abs(prod - m.determinant()) < 1e-8 * std::max(1.0, std::pow(m.norm_inf(), double(n))));
        }
    }
}

TEST_CASE("construction errors") {
    CHECK_THROWS_AS(SquareMatrix::from_rows({{1, 2}, {3}}), DomainError);
    CHECK_THROWS_AS(SquareMatrix::from_rows({{1}}), DomainError);
    CHECK_THROWS_AS(SquareMatrix::from_rows({{1, 2, 3, 4}, {1, 2, 3, 4}, {1, 2, 3, 4}, {1, 2, 3, 4}}), DomainError);
}

TEST_CASE("multiply") {
    const auto m = SquareMatrix::from_rows({{1, 2}, {-2, -1}});
    const auto y = linalg::multiply(m, {1.0, 0.0});
    CHECK(y[0] == 1.0);
    CHECK(y[1] == -2.0);
}
