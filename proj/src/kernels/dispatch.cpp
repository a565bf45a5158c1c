#include <atomic>
#include <string>

#include "ethdyn/errors.hpp"
#include "kernels_impl.hpp"

namespace ethdyn::kernels {

namespace {

void apply_matrix_ref(const double* m, std::size_t dim, const double* in, double* out, std::size_t stride,
                      std::size_t count) {
    detail::apply_matrix_scalar(m, dim, in, out, stride, 0, count);
}

void euler_step_ref(const double* step, std::size_t dim, double* state, double* scratch, std::size_t stride,
                    std::size_t count) {
    detail::euler_step_scalar(step, dim, state, scratch, stride, 0, count);
}

void rk4_step_ref(const double* m, std::size_t dim, double dt, double* state, double* scratch,
                  std::size_t stride, std::size_t count) {
    detail::rk4_step_scalar(m, dim, dt, state, scratch, stride, 0, count);
}

const KernelTable kScalarTable{Isa::Scalar, "scalar", &apply_matrix_ref, &euler_step_ref, &rk4_step_ref};

bool cpu_has_avx2() {
#if defined(ETHDYN_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const KernelTable& best() {
    if (isa_available(Isa::Avx2)) {
        return *avx2_kernels();
    }
    return kScalarTable;
}

std::atomic<const KernelTable*> g_selected{nullptr};

} // namespace

const KernelTable& scalar_kernels() { return kScalarTable; }

const KernelTable* avx2_kernels() {
#if defined(ETHDYN_HAVE_AVX2)
    return &detail::kAvx2Table;
#else
    return nullptr;
#endif
}

bool isa_available(Isa isa) {
    switch (isa) {
    case Isa::Scalar:
        return true;
    case Isa::Avx2:
        return avx2_kernels() != nullptr && cpu_has_avx2();
    }
    return false;
}

std::vector<Isa> available_isas() {
    std::vector<Isa> out{Isa::Scalar};
    if (isa_available(Isa::Avx2)) {
        out.push_back(Isa::Avx2);
    }
    return out;
}

const KernelTable& kernels_for(Isa isa) {
    if (!isa_available(isa)) {
        throw DomainError("kernel variant '" + std::string(isa_name(isa)) + "' is not available on this machine");
    }
    return isa == Isa::Avx2 ? *avx2_kernels() : kScalarTable;
}

void select_isa(std::optional<Isa> isa) {
    g_selected.store(isa ? &kernels_for(*isa) : nullptr);
}

const KernelTable& active() {
    const KernelTable* chosen = g_selected.load();
    return chosen != nullptr ? *chosen : best();
}

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

std::optional<Isa> parse_isa(std::string_view name) {
    if (name == "scalar") {
        return Isa::Scalar;
    }
    if (name == "avx2") {
        return Isa::Avx2;
    }
    return std::nullopt;
}

} // namespace ethdyn::kernels
