#include <doctest.h>

#include <cstring>

#include "ethdyn/errors.hpp"
#include "ethdyn/kernels.hpp"
#include "support.hpp"

using namespace ethdyn;
using namespace ethdyn::kernels;

namespace {

struct Batch {
    std::size_t dim;
    std::size_t count;
    std::size_t stride;
    std::vector<double> m;
    std::vector<double> state;
};

Batch random_batch(std::size_t dim, std::size_t count) {
    Batch b{dim, count, (count + 3) / 4 * 4, {}, {}};
    for (std::size_t i = 0; i < dim * dim; ++i) {
        b.m.push_back(support::uniform(-2, 2));
    }
    b.state.assign(dim * b.stride, 0.0);
    for (std::size_t k = 0; k < dim; ++k) {
        for (std::size_t j = 0; j < count; ++j) {
            b.state[k * b.stride + j] = support::uniform(-5, 5);
        }
    }
    return b;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

// Straight-line reference for one lane.
std::vector<double> matvec(const std::vector<double>& m, std::size_t dim, const std::vector<double>& x) {
    std::vector<double> y(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            y[i] += m[i * dim + j] * x[j];
        }
    }
    return y;
}

} // namespace

TEST_CASE("scalar apply_matrix matches a per-lane product") {
    for (std::size_t dim : {2u, 3u}) {
        const auto b = random_batch(dim, 7);
        std::vector<double> out(b.state.size());
        scalar_kernels().apply_matrix(b.m.data(), dim, b.state.data(), out.data(), b.stride, b.count);
        for (std::size_t j = 0; j < b.count; ++j) {
            std::vector<double> x(dim);
            for (std::size_t k = 0; k < dim; ++k) {
                x[k] = b.state[k * b.stride + j];
            }
            const auto y = matvec(b.m, dim, x);
            for (std::size_t k = 0; k < dim; ++k) {
                CHECK(out[k * b.stride + j] == doctest::Approx(y[k]).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("every available variant is bitwise equal to the scalar reference") {
    const auto& ref = scalar_kernels();
    for (Isa isa : available_isas()) {
        const auto& k = kernels_for(isa);
        CAPTURE(k.name);
        for (std::size_t dim : {2u, 3u}) {
            for (std::size_t count : {1u, 3u, 4u, 5u, 8u, 13u, 64u}) {
                const auto b = random_batch(dim, count);

                std::vector<double> out_ref(b.state.size()), out_k(b.state.size());
                ref.apply_matrix(b.m.data(), dim, b.state.data(), out_ref.data(), b.stride, count);
                k.apply_matrix(b.m.data(), dim, b.state.data(), out_k.data(), b.stride, count);
                CHECK(bitwise_equal(out_ref, out_k));

                auto s_ref = b.state;
                auto s_k = b.state;
                std::vector<double> scratch(euler_scratch_size(dim, b.stride));
                for (int step = 0; step < 50; ++step) {
                    ref.euler_step(b.m.data(), dim, s_ref.data(), scratch.data(), b.stride, count);
                    k.euler_step(b.m.data(), dim, s_k.data(), scratch.data(), b.stride, count);
                }
                CHECK(bitwise_equal(s_ref, s_k));

                s_ref = b.state;
                s_k = b.state;
                std::vector<double> rk(rk4_scratch_size(dim, b.stride));
                for (int step = 0; step < 50; ++step) {
                    ref.rk4_step(b.m.data(), dim, 0.01, s_ref.data(), rk.data(), b.stride, count);
                    k.rk4_step(b.m.data(), dim, 0.01, s_k.data(), rk.data(), b.stride, count);
                }
                CHECK(bitwise_equal(s_ref, s_k));
            }
        }
    }
}

TEST_CASE("lanes beyond count are left alone") {
    for (Isa isa : available_isas()) {
        const auto& k = kernels_for(isa);
        auto b = random_batch(2, 5);
        b.state[6] = 123.0;
        b.state[b.stride + 7] = -7.0;
        std::vector<double> scratch(rk4_scratch_size(2, b.stride));
        k.rk4_step(b.m.data(), 2, 0.1, b.state.data(), scratch.data(), b.stride, 5);
        CHECK(b.state[6] == 123.0);
        CHECK(b.state[b.stride + 7] == -7.0);
    }
}

TEST_CASE("selection") {
    CHECK(isa_available(Isa::Scalar));
    CHECK(parse_isa("scalar") == Isa::Scalar);
    CHECK(parse_isa("avx2") == Isa::Avx2);
    CHECK(!parse_isa("neon"));
    CHECK(isa_name(Isa::Avx2) == "avx2");

    select_isa(Isa::Scalar);
    CHECK(active().isa == Isa::Scalar);
    select_isa(std::nullopt);
    CHECK(active().isa == available_isas().back());
    if (!isa_available(Isa::Avx2)) {
        CHECK_THROWS_AS(kernels_for(Isa::Avx2), DomainError);
    } else {
        CHECK(avx2_kernels() != nullptr);
    }
}
