#include "kernels_impl.hpp"

namespace ethdyn::kernels::detail {

// Lane range [begin, end) so SIMD variants can hand their tails here.

void apply_matrix_scalar(const double* m, std::size_t dim, const double* in, double* out,
                         std::size_t stride, std::size_t begin, std::size_t end) {
    for (std::size_t lane = begin; lane < end; ++lane) {
        for (std::size_t i = 0; i < dim; ++i) {
            double acc = m[i * dim] * in[lane];
            for (std::size_t j = 1; j < dim; ++j) {
                acc = acc + m[i * dim + j] * in[j * stride + lane];
            }
            out[i * stride + lane] = acc;
        }
    }
}

void euler_step_scalar(const double* step, std::size_t dim, double* state, double* scratch,
                       std::size_t stride, std::size_t begin, std::size_t end) {
    apply_matrix_scalar(step, dim, state, scratch, stride, begin, end);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t lane = begin; lane < end; ++lane) {
            state[i * stride + lane] = scratch[i * stride + lane];
        }
    }
}

void rk4_step_scalar(const double* m, std::size_t dim, double dt, double* state, double* scratch,
                     std::size_t stride, std::size_t begin, std::size_t end) {
    const std::size_t block = dim * stride;
    double* k1 = scratch;
    double* k2 = scratch + block;
    double* k3 = scratch + 2 * block;
    double* k4 = scratch + 3 * block;
    double* tmp = scratch + 4 * block;
    const double half = 0.5 * dt;
    const double sixth = dt / 6.0;

    auto stage = [&](const double* k, double h) {
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t lane = begin; lane < end; ++lane) {
                const std::size_t at = i * stride + lane;
                tmp[at] = state[at] + h * k[at];
            }
        }
    };

    apply_matrix_scalar(m, dim, state, k1, stride, begin, end);
    stage(k1, half);
    apply_matrix_scalar(m, dim, tmp, k2, stride, begin, end);
    stage(k2, half);
    apply_matrix_scalar(m, dim, tmp, k3, stride, begin, end);
    stage(k3, dt);
    apply_matrix_scalar(m, dim, tmp, k4, stride, begin, end);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t lane = begin; lane < end; ++lane) {
            const std::size_t at = i * stride + lane;
            const double sum = ((k1[at] + 2.0 * k2[at]) + 2.0 * k3[at]) + k4[at];
            state[at] = state[at] + sixth * sum;
        }
    }
}

} // namespace ethdyn::kernels::detail
