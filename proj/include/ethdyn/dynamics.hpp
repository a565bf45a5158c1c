#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ethdyn/linalg.hpp"

namespace ethdyn::dynamics {

using linalg::Complex;
using linalg::EigenPair;
using linalg::SquareMatrix;

/// Coupling rates. The gammas only enter the three-player (Carl) systems.
struct CouplingParams {
    double alpha1 = 0.0;
    double beta1 = 0.0;
    double alpha2 = 0.0;
    double beta2 = 0.0;
    std::optional<double> gamma1;
    std::optional<double> gamma2;
    std::optional<double> gamma3;
};

enum class TwoPlayerVariant { EthicalBobCrookAlice, EthicalAliceCrookBob, UnethicalDuo, EthicalDuo };

enum class CarlAffects { AliceOnly, AliceAndBob };

/// x' = M x. The coupling matrix is also the Jacobian.
struct LinearSystem {
    SquareMatrix matrix;
    std::vector<std::string> labels;

    std::size_t dim() const { return matrix.size(); }
};

/// Throws DomainError on non-finite entries, duplicate labels, or a label
/// count that does not match the matrix.
LinearSystem make_system(SquareMatrix matrix, std::vector<std::string> labels);

/// [[alpha1, beta1], [alpha2, beta2]] over the variant's axes:
///   EthicalBobCrookAlice (U_A, E_B), EthicalAliceCrookBob (U_B, E_A),
///   UnethicalDuo (U_B, U_A). EthicalDuo follows its own equations,
///   E_B' = alpha1 E_B + beta1 E_A and E_A' = alpha2 E_A + beta2 E_B, giving
///   [[alpha1, beta1], [beta2, alpha2]] over (E_B, E_A).
LinearSystem build_two_player(const CouplingParams& p, TwoPlayerVariant variant);

/// Trace-free special case [[alpha1, beta1], [-beta1, -alpha1]] over (U_A, E_B).
LinearSystem build_psi(double alpha1, double beta1);

/// Unethical duo perturbed by an ethical third player, over (U_B, U_A, E_C):
///   U_B' = alpha1 U_B + beta1 U_A [+ gamma1 E_C]
///   U_A' = alpha2 U_B + beta2 U_A + gamma2 E_C
///   E_C' = gamma3 E_C
LinearSystem build_three_player(const CouplingParams& p, CarlAffects affects);

/// Eigenpairs, descending real part then descending imaginary part.
std::vector<EigenPair> eigen(const LinearSystem& s);

/// x(t) = C1 v1 exp(l1 t) + C2 v2 exp(l2 t) for a planar system with
/// distinct eigenvalues.
class ClosedFormSolution {
public:
    ClosedFormSolution(std::vector<EigenPair> pairs, std::vector<Complex> coefficients);

    const std::vector<EigenPair>& eigenpairs() const { return pairs_; }
    const std::vector<Complex>& coefficients() const { return coefficients_; }

    /// Real state at time t. Throws std::runtime_error if the imaginary part
    /// fails to cancel (more than 1e-9 relative).
    std::vector<double> operator()(double t) const;

private:
    std::vector<EigenPair> pairs_;
    std::vector<Complex> coefficients_;
};

/// DomainError unless n == 2; DegenerateError for a repeated eigenvalue.
ClosedFormSolution closed_form_solution(const LinearSystem& s, const std::vector<double>& x0);

enum class Method { Euler, RK4, ClosedForm };

std::string_view method_name(Method m);
std::optional<Method> parse_method(std::string_view name);

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    Method method = Method::Euler;
};

/// Result for one initial condition of a batch. A lane that leaves the
/// finite range keeps its states up to the last finite step.
struct BatchTrajectory {
    Trajectory trajectory;
    std::optional<std::size_t> overflow_after;
};

/// Fixed-step integration, x0 included as the first state. Euler applies the
/// step matrix (I + dt M) so a decoupled row r evolves as x_r (1 + dt m_rr)
/// with a single rounding per step. OverflowError on a non-finite state.
Trajectory integrate(const LinearSystem& s, const std::vector<double>& x0, double dt, std::size_t steps,
                     Method method);

/// Same as integrate for many initial conditions, advanced together through
/// the active SIMD kernels. `jobs` > 1 splits the batch across threads;
/// results do not depend on the split.
std::vector<BatchTrajectory> integrate_batch(const LinearSystem& s,
                                             const std::vector<std::vector<double>>& initial_conditions,
                                             double dt, std::size_t steps, Method method,
                                             std::size_t jobs = 1);

/// Closed-form samples at t_n = n dt.
Trajectory sample_closed_form(const ClosedFormSolution& solution, double dt, std::size_t steps);

enum class EquilibriumKind {
    Saddle,
    StableNode,
    UnstableNode,
    StableSpiral,
    UnstableSpiral,
    Center,
    DegenerateLine,
    DegenerateZero,
};

std::string_view kind_name(EquilibriumKind k);

struct EquilibriumClass {
    EquilibriumKind kind;
    double trace;
    double determinant;
    double discriminant;
};

inline constexpr double kClassifyTol = 1e-9;

EquilibriumKind classify(double trace, double determinant, double discriminant);

/// Trace/determinant classification of the origin; DomainError unless n == 2.
EquilibriumClass classify_equilibrium(const LinearSystem& s);

/// Q(x, y) = a x^2 + b x y + c y^2
struct QuadraticInvariant {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    double operator()(double x, double y) const { return a * x * x + b * x * y + c * y * y; }
};

/// Coefficients of dQ/dt along x' = M x, as (x^2, xy, y^2).
std::array<double, 3> derivative_coefficients(const QuadraticInvariant& q, const SquareMatrix& m);

/// For a trace-free planar system, the conserved quadratic
/// -m21 x^2 + 2 m11 x y + m12 y^2 scaled so its first nonzero coefficient is 1.
/// Absent when the trace is nonzero or the matrix vanishes.
std::optional<QuadraticInvariant> conserved_form(const LinearSystem& s);

} // namespace ethdyn::dynamics
