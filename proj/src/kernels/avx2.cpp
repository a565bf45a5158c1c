// Compiled with -mavx2 (and without -mfma); only reached after a runtime
// CPU check.
#include <immintrin.h>

#include "kernels_impl.hpp"

namespace ethdyn::kernels::detail {

namespace {

constexpr std::size_t kLanes = 4;

// out[i] = sum_j m[i][j] * in[j], four lanes at a time
inline void matvec4(const double* m, std::size_t dim, const double* in, double* out, std::size_t stride,
                    std::size_t lane) {
    for (std::size_t i = 0; i < dim; ++i) {
        __m256d acc = _mm256_mul_pd(_mm256_set1_pd(m[i * dim]), _mm256_loadu_pd(in + lane));
        for (std::size_t j = 1; j < dim; ++j) {
            const __m256d prod =
                _mm256_mul_pd(_mm256_set1_pd(m[i * dim + j]), _mm256_loadu_pd(in + j * stride + lane));
            acc = _mm256_add_pd(acc, prod);
        }
        _mm256_storeu_pd(out + i * stride + lane, acc);
    }
}

void apply_matrix_avx2(const double* m, std::size_t dim, const double* in, double* out, std::size_t stride,
                       std::size_t count) {
    std::size_t lane = 0;
    for (; lane + kLanes <= count; lane += kLanes) {
        matvec4(m, dim, in, out, stride, lane);
    }
    apply_matrix_scalar(m, dim, in, out, stride, lane, count);
}

void euler_step_avx2(const double* step, std::size_t dim, double* state, double* scratch, std::size_t stride,
                     std::size_t count) {
    std::size_t lane = 0;
    for (; lane + kLanes <= count; lane += kLanes) {
        matvec4(step, dim, state, scratch, stride, lane);
        for (std::size_t i = 0; i < dim; ++i) {
            _mm256_storeu_pd(state + i * stride + lane, _mm256_loadu_pd(scratch + i * stride + lane));
        }
    }
    euler_step_scalar(step, dim, state, scratch, stride, lane, count);
}

void rk4_step_avx2(const double* m, std::size_t dim, double dt, double* state, double* scratch,
                   std::size_t stride, std::size_t count) {
    const std::size_t block = dim * stride;
    double* k1 = scratch;
    double* k2 = scratch + block;
    double* k3 = scratch + 2 * block;
    double* k4 = scratch + 3 * block;
    double* tmp = scratch + 4 * block;
    const __m256d half = _mm256_set1_pd(0.5 * dt);
    const __m256d full = _mm256_set1_pd(dt);
    const __m256d sixth = _mm256_set1_pd(dt / 6.0);
    const __m256d two = _mm256_set1_pd(2.0);

    std::size_t lane = 0;
    for (; lane + kLanes <= count; lane += kLanes) {
        auto stage = [&](const double* k, __m256d h) {
            for (std::size_t i = 0; i < dim; ++i) {
                const std::size_t at = i * stride + lane;
                const __m256d x = _mm256_loadu_pd(state + at);
                _mm256_storeu_pd(tmp + at, _mm256_add_pd(x, _mm256_mul_pd(h, _mm256_loadu_pd(k + at))));
            }
        };
        matvec4(m, dim, state, k1, stride, lane);
        stage(k1, half);
        matvec4(m, dim, tmp, k2, stride, lane);
        stage(k2, half);
        matvec4(m, dim, tmp, k3, stride, lane);
        stage(k3, full);
        matvec4(m, dim, tmp, k4, stride, lane);
        for (std::size_t i = 0; i < dim; ++i) {
            const std::size_t at = i * stride + lane;
            __m256d sum = _mm256_add_pd(_mm256_loadu_pd(k1 + at), _mm256_mul_pd(two, _mm256_loadu_pd(k2 + at)));
            sum = _mm256_add_pd(sum, _mm256_mul_pd(two, _mm256_loadu_pd(k3 + at)));
            sum = _mm256_add_pd(sum, _mm256_loadu_pd(k4 + at));
            const __m256d x = _mm256_loadu_pd(state + at);
            _mm256_storeu_pd(state + at, _mm256_add_pd(x, _mm256_mul_pd(sixth, sum)));
        }
    }
    rk4_step_scalar(m, dim, dt, state, scratch, stride, lane, count);
}

} // namespace

const KernelTable kAvx2Table{Isa::Avx2, "avx2", &apply_matrix_avx2, &euler_step_avx2, &rk4_step_avx2};

} // namespace ethdyn::kernels::detail
