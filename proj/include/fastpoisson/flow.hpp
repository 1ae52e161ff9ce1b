#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <vector>

#include "fastpoisson/core_types.hpp"
#include "fastpoisson/solver.hpp"

namespace fastpoisson::flow {

/// Exact rational number, kept in lowest terms with a positive denominator.
struct Fraction {
    std::int64_t num = 0;
    std::int64_t den = 1;

    constexpr Fraction() = default;
    constexpr Fraction(std::int64_t n, std::int64_t d = 1) : num(n), den(d) {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const std::int64_t g = std::gcd(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    constexpr double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend constexpr Fraction operator+(Fraction a, Fraction b) {
        return {a.num * b.den + b.num * a.den, a.den * b.den};
    }
    friend constexpr bool operator==(Fraction a, Fraction b) { return a.num == b.num && a.den == b.den; }
};

/// Low-storage three-stage Runge-Kutta weights. Stage k advances
///   u* = u + dt (-alpha_k grad p + gamma_k N(u_k) + zeta_k N(u_{k-1})).
struct RK3Coefficients {
    static constexpr std::array<Fraction, 3> alpha{Fraction(8, 15), Fraction(2, 15), Fraction(1, 3)};
    static constexpr std::array<Fraction, 3> gamma{Fraction(8, 15), Fraction(5, 12), Fraction(3, 4)};
    static constexpr std::array<Fraction, 3> zeta{Fraction(0), Fraction(-17, 60), Fraction(-5, 12)};
};

/// Uniform cell grid with either periodic or no-slip wall boundaries per axis.
///
/// Velocity component a lives on the faces normal to axis a: face f sits at
/// x_a = f * dx_a and the other coordinates are cell centres. Periodic axes
/// have n faces, wall axes n + 1 with faces 0 and n held at zero. Pressure
/// lives at cell centres.
struct FlowGrid {
    std::vector<std::size_t> cells;
    std::vector<double> lengths;
    std::vector<bool> periodic;

    int dims() const { return static_cast<int>(cells.size()); }
    double dx(int axis) const;
    Extents cell_extents() const;
    Extents face_extents(int component) const;
    void validate() const;
};

struct Velocity {
    std::vector<FieldBuffer<double>> u;  // one array per component
};

struct FlowState {
    Velocity velocity;
    FieldBuffer<double> pressure;
    double time = 0.0;
};

struct StepReport {
    std::array<double, 3> divergence{};  // max |div u| after each stage's correction
};

/// Raised when a step produces NaN or infinity.
class NonFiniteError : public Error {
public:
    using Error::Error;
};

/// Projection-method Navier-Stokes stepper with constant viscosity, second
/// order central differences and an explicit RK3 time integrator. The
/// pressure correction is solved with the FD2 operator (staggered Neumann on
/// walls), which equals div(grad) of the staggered operators exactly.
class FlowSolver {
public:
    FlowSolver(FlowGrid grid, double nu, std::array<double, 3> forcing = {}, unsigned threads = 1);

    const FlowGrid& grid() const { return grid_; }
    double viscosity() const { return nu_; }
    const SolverConfig& pressure_config() const { return pressure_.config(); }

    Velocity zero_velocity() const;
    FlowState zero_state() const;

    FieldBuffer<double> divergence(const Velocity& u) const;
    Velocity gradient(const FieldBuffer<double>& p) const;
    /// -div(u u), conservative form.
    Velocity advective_term(const Velocity& u) const;
    /// nu * lap(u) with mirrored no-slip ghosts at walls.
    Velocity viscous_term(const Velocity& u) const;

    /// Solves lap(phi) = div(u) / scale and replaces u by u - scale grad(phi).
    /// Returns phi.
    FieldBuffer<double> project(Velocity& u, double scale) const;

    /// Advances the state by dt with three projected stages.
    StepReport step(FlowState& state, double dt) const;

    double kinetic_energy(const Velocity& u) const;
    double max_speed(const Velocity& u) const;
    std::vector<double> mean_velocity(const Velocity& u) const;

private:
    FlowGrid grid_;
    double nu_;
    std::array<double, 3> forcing_;
    SolverPlan<double> pressure_;
};

/// u = U sin x cos y, v = -U cos x sin y on a doubly periodic [0, 2 pi]^2
/// (extruded along z in 3D). Its kinetic energy decays as exp(-4 nu t).
FlowState taylor_green(const FlowSolver& solver, double amplitude = 1.0);

/// Parabolic profile U 4 y (L - y) / L^2 along x between the walls of the
/// last axis, plus a small divergence-free perturbation when `perturbation`
/// is nonzero.
FlowState channel(const FlowSolver& solver, double amplitude, double perturbation, std::uint64_t seed);

}  // namespace fastpoisson::flow
