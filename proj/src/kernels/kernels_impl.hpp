#pragma once

#include "ethdyn/kernels.hpp"

namespace ethdyn::kernels::detail {

void apply_matrix_scalar(const double* m, std::size_t dim, const double* in, double* out,
                         std::size_t stride, std::size_t begin, std::size_t end);
void euler_step_scalar(const double* step, std::size_t dim, double* state, double* scratch,
                       std::size_t stride, std::size_t begin, std::size_t end);
void rk4_step_scalar(const double* m, std::size_t dim, double dt, double* state, double* scratch,
                     std::size_t stride, std::size_t begin, std::size_t end);

#if defined(ETHDYN_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif

} // namespace ethdyn::kernels::detail
