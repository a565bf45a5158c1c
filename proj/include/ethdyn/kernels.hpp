#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

// Batched inner loops for linear systems of dimension 2 or 3.
//
// Batches use a structure-of-arrays layout: component k of lane j lives at
// data[k * stride + j], with count <= stride. Every variant performs the
// same IEEE operations in the same order (no fused multiply-add), so all
// ISAs produce bitwise-identical results.

namespace ethdyn::kernels {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
    Isa isa;
    const char* name;

    /// out = m * in for every lane; m is dim x dim row-major.
    void (*apply_matrix)(const double* m, std::size_t dim, const double* in, double* out,
                         std::size_t stride, std::size_t count);

    /// state = step * state, with step = I + dt * M precomputed by the caller.
    /// scratch holds dim * stride doubles.
    void (*euler_step)(const double* step, std::size_t dim, double* state, double* scratch,
                       std::size_t stride, std::size_t count);

    /// Classical fourth-order Runge-Kutta step of x' = M x.
    /// scratch holds rk4_scratch_size(dim, stride) doubles.
    void (*rk4_step)(const double* m, std::size_t dim, double dt, double* state, double* scratch,
                     std::size_t stride, std::size_t count);
};

constexpr std::size_t euler_scratch_size(std::size_t dim, std::size_t stride) { return dim * stride; }
constexpr std::size_t rk4_scratch_size(std::size_t dim, std::size_t stride) { return 5 * dim * stride; }

const KernelTable& scalar_kernels();

/// nullptr when the build has no AVX2 variant.
const KernelTable* avx2_kernels();

/// Compiled in and supported by the running CPU.
bool isa_available(Isa isa);
std::vector<Isa> available_isas();

/// DomainError when the ISA is unavailable.
const KernelTable& kernels_for(Isa isa);

/// Process-wide choice; nullopt restores automatic selection (best available).
void select_isa(std::optional<Isa> isa);
const KernelTable& active();

std::string_view isa_name(Isa isa);
std::optional<Isa> parse_isa(std::string_view name);

} // namespace ethdyn::kernels
