#include "ethdyn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "ethdyn/errors.hpp"
#include "ethdyn/kernels.hpp"

namespace ethdyn::dynamics {

namespace {

constexpr std::size_t kLaneAlign = 4;

void require_finite(const CouplingParams& p) {
    auto ok = [](const std::optional<double>& g) { return !g || std::isfinite(*g); };
    if (!std::isfinite(p.alpha1) || !std::isfinite(p.beta1) || !std::isfinite(p.alpha2) ||
        !std::isfinite(p.beta2) || !ok(p.gamma1) || !ok(p.gamma2) || !ok(p.gamma3)) {
        throw DomainError("coupling parameters must be finite");
    }
}

void check_state(const LinearSystem& s, const std::vector<double>& x0) {
    if (x0.size() != s.dim()) {
        throw DomainError("initial condition has " + std::to_string(x0.size()) + " components, system has " +
                          std::to_string(s.dim()));
    }
    for (double v : x0) {
        if (!std::isfinite(v)) {
            throw DomainError("initial condition must be finite");
        }
    }
}

// Integrate lanes [begin, end) of the batch into out[begin..end).
void run_lanes(const LinearSystem& s, const std::vector<std::vector<double>>& ics, double dt, std::size_t steps,
               Method method, std::size_t begin, std::size_t end, std::vector<BatchTrajectory>& out) {
    const std::size_t dim = s.dim();
    const std::size_t count = end - begin;
    const std::size_t stride = (count + kLaneAlign - 1) / kLaneAlign * kLaneAlign;
    const auto& k = kernels::active();

    std::vector<double> coeffs;
    if (method == Method::Euler) {
        SquareMatrix step(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t j = 0; j < dim; ++j) {
                step(i, j) = (i == j ? 1.0 : 0.0) + dt * s.matrix(i, j);
            }
        }
        coeffs = step.packed();
    } else {
        coeffs = s.matrix.packed();
    }

    std::vector<double> state(dim * stride, 0.0);
    std::vector<double> scratch(method == Method::Euler ? kernels::euler_scratch_size(dim, stride)
                                                        : kernels::rk4_scratch_size(dim, stride));
    for (std::size_t lane = 0; lane < count; ++lane) {
        for (std::size_t i = 0; i < dim; ++i) {
            state[i * stride + lane] = ics[begin + lane][i];
        }
        auto& traj = out[begin + lane].trajectory;
        traj.method = method;
        traj.times.reserve(steps + 1);
        traj.states.reserve(steps + 1);
        traj.times.push_back(0.0);
        traj.states.push_back(ics[begin + lane]);
    }

    std::vector<bool> halted(count, false);
    std::size_t live = count;
    std::vector<double> x(dim);
    for (std::size_t n = 1; n <= steps && live > 0; ++n) {
        if (method == Method::Euler) {
            k.euler_step(coeffs.data(), dim, state.data(), scratch.data(), stride, count);
        } else {
            k.rk4_step(coeffs.data(), dim, dt, state.data(), scratch.data(), stride, count);
        }
        const double t = static_cast<double>(n) * dt;
        for (std::size_t lane = 0; lane < count; ++lane) {
            if (halted[lane]) {
                continue;
            }
            bool finite = true;
            for (std::size_t i = 0; i < dim; ++i) {
                x[i] = state[i * stride + lane];
                finite = finite && std::isfinite(x[i]);
            }
            auto& result = out[begin + lane];
            if (!finite) {
                halted[lane] = true;
                result.overflow_after = n - 1;
                --live;
                continue;
            }
            result.trajectory.times.push_back(t);
            result.trajectory.states.push_back(x);
        }
    }
}

} // namespace

LinearSystem make_system(SquareMatrix matrix, std::vector<std::string> labels) {
    if (matrix.size() != 2 && matrix.size() != 3) {
        throw DomainError("system dimension must be 2 or 3");
    }
    if (labels.size() != matrix.size()) {
        throw DomainError("system needs one label per axis");
    }
    if (!matrix.all_finite()) {
        throw DomainError("system matrix must be finite");
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        for (std::size_t j = i + 1; j < labels.size(); ++j) {
            if (labels[i] == labels[j]) {
                throw DomainError("system labels must be distinct");
            }
        }
    }
    return LinearSystem{matrix, std::move(labels)};
}

LinearSystem build_two_player(const CouplingParams& p, TwoPlayerVariant variant) {
    require_finite(p);
    if (p.gamma1 || p.gamma2 || p.gamma3) {
        throw DomainError("two-player systems take no gamma parameters");
    }
    switch (variant) {
    case TwoPlayerVariant::EthicalBobCrookAlice:
        return make_system(SquareMatrix::from_rows({{p.alpha1, p.beta1}, {p.alpha2, p.beta2}}), {"U_A", "E_B"});
    case TwoPlayerVariant::EthicalAliceCrookBob:
        return make_system(SquareMatrix::from_rows({{p.alpha1, p.beta1}, {p.alpha2, p.beta2}}), {"U_B", "E_A"});
    case TwoPlayerVariant::UnethicalDuo:
        return make_system(SquareMatrix::from_rows({{p.alpha1, p.beta1}, {p.alpha2, p.beta2}}), {"U_B", "U_A"});
    case TwoPlayerVariant::EthicalDuo:
        return make_system(SquareMatrix::from_rows({{p.alpha1, p.beta1}, {p.beta2, p.alpha2}}), {"E_B", "E_A"});
    }
    throw DomainError("unknown two-player variant");
}

LinearSystem build_psi(double alpha1, double beta1) {
    if (!std::isfinite(alpha1) || !std::isfinite(beta1)) {
        throw DomainError("psi parameters must be finite");
    }
    return make_system(SquareMatrix::from_rows({{alpha1, beta1}, {-beta1, -alpha1}}), {"U_A", "E_B"});
}

LinearSystem build_three_player(const CouplingParams& p, CarlAffects affects) {
    require_finite(p);
    if (!p.gamma2) {
        throw DomainError("three-player system requires gamma2");
    }
    if (!p.gamma3) {
        throw DomainError("three-player system requires gamma3");
    }
    double g1 = 0.0;
    if (affects == CarlAffects::AliceAndBob) {
        if (!p.gamma1) {
            throw DomainError("gamma1 is required when Carl affects both players");
        }
        g1 = *p.gamma1;
    } else if (p.gamma1) {
        throw DomainError("gamma1 must be absent when Carl affects only Alice");
    }
    return make_system(SquareMatrix::from_rows({{p.alpha1, p.beta1, g1},
                                                {p.alpha2, p.beta2, *p.gamma2},
                                                {0.0, 0.0, *p.gamma3}}),
                       {"U_B", "U_A", "E_C"});
}

std::vector<EigenPair> eigen(const LinearSystem& s) { return linalg::eigenpairs(s.matrix); }

ClosedFormSolution::ClosedFormSolution(std::vector<EigenPair> pairs, std::vector<Complex> coefficients)
    : pairs_(std::move(pairs)), coefficients_(std::move(coefficients)) {}

std::vector<double> ClosedFormSolution::operator()(double t) const {
    const std::size_t n = pairs_.size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        Complex acc = 0.0;
        for (std::size_t k = 0; k < pairs_.size(); ++k) {
            acc += coefficients_[k] * pairs_[k].vector[i] * std::exp(pairs_[k].value * t);
        }
        if (std::abs(acc.imag()) > 1e-9 * std::max(1.0, std::abs(acc.real()))) {
            throw std::runtime_error("closed form: imaginary part did not cancel");
        }
        out[i] = acc.real();
    }
    return out;
}

ClosedFormSolution closed_form_solution(const LinearSystem& s, const std::vector<double>& x0) {
    if (s.dim() != 2) {
        throw DomainError("closed_form_solution: only planar systems are supported");
    }
    check_state(s, x0);
    auto pairs = eigen(s);
    if (std::abs(pairs[0].value - pairs[1].value) <= 1e-9) {
        throw DegenerateError("closed_form_solution: repeated eigenvalue, no eigenvector basis");
    }
    const auto& v1 = pairs[0].vector;
    const auto& v2 = pairs[1].vector;
    const Complex det = v1[0] * v2[1] - v2[0] * v1[1];
    if (std::abs(det) <= 1e-12) {
        throw DegenerateError("closed_form_solution: eigenvectors are parallel");
    }
    const Complex c1 = (x0[0] * v2[1] - v2[0] * x0[1]) / det;
    const Complex c2 = (v1[0] * x0[1] - x0[0] * v1[1]) / det;
    return ClosedFormSolution(std::move(pairs), {c1, c2});
}

std::string_view method_name(Method m) {
    switch (m) {
    case Method::Euler:
        return "euler";
    case Method::RK4:
        return "rk4";
    case Method::ClosedForm:
        return "closed_form";
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
    if (name == "euler") {
        return Method::Euler;
    }
    if (name == "rk4") {
        return Method::RK4;
    }
    if (name == "closed_form") {
        return Method::ClosedForm;
    }
    return std::nullopt;
}

std::vector<BatchTrajectory> integrate_batch(const LinearSystem& s,
                                             const std::vector<std::vector<double>>& initial_conditions,
                                             double dt, std::size_t steps, Method method, std::size_t jobs) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw DomainError("integrate: dt must be finite and > 0");
    }
    if (steps < 1) {
        throw DomainError("integrate: steps must be >= 1");
    }
    if (method == Method::ClosedForm) {
        throw DomainError("integrate: use sample_closed_form for closed-form trajectories");
    }
    for (const auto& x0 : initial_conditions) {
        check_state(s, x0);
    }

    const std::size_t n = initial_conditions.size();
    std::vector<BatchTrajectory> out(n);
    jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(n, 1));
    if (jobs == 1) {
        run_lanes(s, initial_conditions, dt, steps, method, 0, n, out);
        return out;
    }
    std::vector<std::thread> workers;
    const std::size_t chunk = (n + jobs - 1) / jobs;
    for (std::size_t begin = 0; begin < n; begin += chunk) {
        const std::size_t end = std::min(n, begin + chunk);
        workers.emplace_back([&, begin, end] { run_lanes(s, initial_conditions, dt, steps, method, begin, end, out); });
    }
    for (auto& w : workers) {
        w.join();
    }
    return out;
}

Trajectory integrate(const LinearSystem& s, const std::vector<double>& x0, double dt, std::size_t steps,
                     Method method) {
    auto batch = integrate_batch(s, {x0}, dt, steps, method, 1);
    if (batch[0].overflow_after) {
        throw OverflowError("integrate: state overflowed after step " + std::to_string(*batch[0].overflow_after),
                            *batch[0].overflow_after);
    }
    return std::move(batch[0].trajectory);
}

Trajectory sample_closed_form(const ClosedFormSolution& solution, double dt, std::size_t steps) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw DomainError("sample_closed_form: dt must be finite and > 0");
    }
    Trajectory traj;
    traj.method = Method::ClosedForm;
    for (std::size_t n = 0; n <= steps; ++n) {
        const double t = static_cast<double>(n) * dt;
        auto x = solution(t);
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!std::isfinite(x[i])) {
                throw OverflowError("closed form overflowed at step " + std::to_string(n), n - 1);
            }
        }
        traj.times.push_back(t);
        traj.states.push_back(std::move(x));
    }
    return traj;
}

std::string_view kind_name(EquilibriumKind k) {
    switch (k) {
    case EquilibriumKind::Saddle:
        return "Saddle";
    case EquilibriumKind::StableNode:
        return "StableNode";
    case EquilibriumKind::UnstableNode:
        return "UnstableNode";
    case EquilibriumKind::StableSpiral:
        return "StableSpiral";
    case EquilibriumKind::UnstableSpiral:
        return "UnstableSpiral";
    case EquilibriumKind::Center:
        return "Center";
    case EquilibriumKind::DegenerateLine:
        return "DegenerateLine";
    case EquilibriumKind::DegenerateZero:
        return "DegenerateZero";
    }
    return "Unknown";
}

EquilibriumKind classify(double trace, double determinant, double discriminant) {
    constexpr double eps = kClassifyTol;
    if (determinant < -eps) {
        return EquilibriumKind::Saddle;
    }
    if (std::abs(determinant) <= eps) {
        return std::abs(trace) <= eps ? EquilibriumKind::DegenerateZero : EquilibriumKind::DegenerateLine;
    }
    if (std::abs(trace) <= eps) {
        return EquilibriumKind::Center;
    }
    if (trace < 0.0) {
        return discriminant >= -eps ? EquilibriumKind::StableNode : EquilibriumKind::StableSpiral;
    }
    return discriminant >= -eps ? EquilibriumKind::UnstableNode : EquilibriumKind::UnstableSpiral;
}

EquilibriumClass classify_equilibrium(const LinearSystem& s) {
    if (s.dim() != 2) {
        throw DomainError("classify_equilibrium: only planar systems are supported");
    }
    const double tr = s.matrix.trace();
    const double det = s.matrix.determinant();
    const double disc = tr * tr - 4.0 * det;
    return EquilibriumClass{classify(tr, det, disc), tr, det, disc};
}

std::array<double, 3> derivative_coefficients(const QuadraticInvariant& q, const SquareMatrix& m) {
    // dQ/dt = (2a x + b y) x' + (b x + 2c y) y'
    const double m11 = m(0, 0), m12 = m(0, 1), m21 = m(1, 0), m22 = m(1, 1);
    return {2.0 * q.a * m11 + q.b * m21, 2.0 * q.a * m12 + q.b * (m11 + m22) + 2.0 * q.c * m21,
            q.b * m12 + 2.0 * q.c * m22};
}

std::optional<QuadraticInvariant> conserved_form(const LinearSystem& s) {
    if (s.dim() != 2) {
        throw DomainError("conserved_form: only planar systems are supported");
    }
    const auto& m = s.matrix;
    if (std::abs(m.trace()) > kClassifyTol) {
        return std::nullopt;
    }
    QuadraticInvariant q{-m(1, 0), 2.0 * m(0, 0), m(0, 1)};
    const double lead = q.a != 0.0 ? q.a : (q.b != 0.0 ? q.b : q.c);
    if (lead == 0.0) {
        return std::nullopt;
    }
    q.a /= lead;
    q.b /= lead;
    q.c /= lead;
    const double scale = std::max(1.0, m.norm_inf()) * std::max({1.0, std::abs(q.a), std::abs(q.b), std::abs(q.c)});
    for (double coeff : derivative_coefficients(q, m)) {
        if (std::abs(coeff) > 1e-9 * scale) {
            return std::nullopt;
        }
    }
    return q;
}

} // namespace ethdyn::dynamics
