#include "fastpoisson/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace fastpoisson::flow {

namespace {

SolverConfig pressure_config_for(const FlowGrid& grid) {
    grid.validate();
    SolverConfig c;
    c.approximation = Approximation::FiniteDifference2;
    for (int a = 0; a < grid.dims(); ++a) {
        const auto ax = static_cast<std::size_t>(a);
        c.axes.push_back({grid.cells[ax], grid.lengths[ax],
                          grid.periodic[ax] ? BoundaryCondition::Periodic : BoundaryCondition::Neumann,
                          grid.periodic[ax] ? GridKind::Regular : GridKind::Staggered});
    }
    return c;
}

// Index arithmetic along one axis of a cell or face array.
struct Axis {
    std::size_t n;   // cells
    bool periodic;

    std::size_t prev(std::size_t i) const { return i == 0 ? n - 1 : i - 1; }
    std::size_t next_cell(std::size_t i) const { return i + 1 == n ? 0 : i + 1; }
    // face to the right of cell c
    std::size_t right_face(std::size_t c) const { return periodic ? next_cell(c) : c + 1; }
    bool wall_face(std::size_t f) const { return !periodic && (f == 0 || f == n); }
};

Index3 shifted(Index3 idx, std::size_t axis, std::size_t value) {
    idx[axis] = value;
    return idx;
}

double get(const FieldBuffer<double>& f, const Index3& idx) { return f(idx[0], idx[1], idx[2]); }

void check_finite(const Velocity& u, const FieldBuffer<double>& p, int stage) {
    auto finite = [](std::span<const double> d) {
        return std::all_of(d.begin(), d.end(), [](double v) { return std::isfinite(v); });
    };
    bool ok = finite(p.data());
    for (const auto& c : u.u) ok = ok && finite(c.data());
    if (!ok) throw NonFiniteError("non-finite velocity or pressure in RK3 stage " + std::to_string(stage + 1));
}

}  // namespace

double FlowGrid::dx(int axis) const {
    const auto a = static_cast<std::size_t>(axis);
    return lengths.at(a) / static_cast<double>(cells.at(a));
}

Extents FlowGrid::cell_extents() const {
    Index3 n{1, 1, 1};
    for (std::size_t a = 0; a < cells.size(); ++a) n[a] = cells[a];
    return Extents::of(dims(), n);
}

Extents FlowGrid::face_extents(int component) const {
    Extents e = cell_extents();
    const auto a = static_cast<std::size_t>(component);
    if (!periodic.at(a)) e.n[a] += 1;
    return e;
}

void FlowGrid::validate() const {
    if (cells.size() < 2 || cells.size() > kMaxDims)
        throw ConfigError("flow grid needs 2 or 3 axes");
    if (lengths.size() != cells.size() || periodic.size() != cells.size())
        throw ConfigError("flow grid: cells, lengths and periodic flags differ in length");
    for (std::size_t a = 0; a < cells.size(); ++a) {
        if (cells[a] < 2) throw ConfigError("flow grid: every axis needs at least 2 cells");
        if (!(lengths[a] > 0.0) || !std::isfinite(lengths[a]))
            throw ConfigError("flow grid: lengths must be positive");
    }
}

FlowSolver::FlowSolver(FlowGrid grid, double nu, std::array<double, 3> forcing, unsigned threads)
    : grid_(std::move(grid)), nu_(nu), forcing_(forcing),
      pressure_(pressure_config_for(grid_), SolverOptions{threads, std::nullopt}) {
    if (!(nu >= 0.0) || !std::isfinite(nu)) throw ConfigError("viscosity must be finite and non-negative");
    for (int a = 0; a < grid_.dims(); ++a)
        if (!grid_.periodic[static_cast<std::size_t>(a)] && forcing_[static_cast<std::size_t>(a)] != 0.0)
            throw ConfigError("forcing normal to a wall is not supported");
}

Velocity FlowSolver::zero_velocity() const {
    Velocity v;
    for (int a = 0; a < grid_.dims(); ++a) v.u.emplace_back(grid_.face_extents(a));
    return v;
}

FlowState FlowSolver::zero_state() const {
    return {zero_velocity(), FieldBuffer<double>(grid_.cell_extents()), 0.0};
}

FieldBuffer<double> FlowSolver::divergence(const Velocity& u) const {
    const Extents cells = grid_.cell_extents();
    FieldBuffer<double> div(cells);
    for (int a = 0; a < grid_.dims(); ++a) {
        const auto ax = static_cast<std::size_t>(a);
        const Axis axis{grid_.cells[ax], grid_.periodic[ax]};
        const double inv = 1.0 / grid_.dx(a);
        const auto& ua = u.u[ax];
        for_each_index(cells, [&](std::size_t i, std::size_t j, std::size_t k) {
            const Index3 c{i, j, k};
            div(i, j, k) += (get(ua, shifted(c, ax, axis.right_face(c[ax]))) - get(ua, c)) * inv;
        });
    }
    return div;
}

Velocity FlowSolver::gradient(const FieldBuffer<double>& p) const {
    Velocity g = zero_velocity();
    for (int a = 0; a < grid_.dims(); ++a) {
        const auto ax = static_cast<std::size_t>(a);
        const Axis axis{grid_.cells[ax], grid_.periodic[ax]};
        const double inv = 1.0 / grid_.dx(a);
        auto& ga = g.u[ax];
        for_each_index(ga.extents(), [&](std::size_t i, std::size_t j, std::size_t k) {
            const Index3 f{i, j, k};
            if (axis.wall_face(f[ax])) return;
            ga(i, j, k) = (get(p, f) - get(p, shifted(f, ax, axis.prev(f[ax])))) * inv;
        });
    }
    return g;
}

Velocity FlowSolver::advective_term(const Velocity& u) const {
    Velocity out = zero_velocity();
    const int dims = grid_.dims();
    for (int a = 0; a < dims; ++a) {
        const auto ax = static_cast<std::size_t>(a);
        const Axis A{grid_.cells[ax], grid_.periodic[ax]};
        const auto& ua = u.u[ax];
        auto& res = out.u[ax];
        for_each_index(res.extents(), [&](std::size_t i, std::size_t j, std::size_t k) {
            const Index3 f{i, j, k};
            const std::size_t fa = f[ax];
            if (A.wall_face(fa)) return;
            double tendency = 0.0;

            // d(u_a u_a)/dx_a from cell-centre fluxes on either side of the face
            auto centre_flux = [&](std::size_t cell) {
                const double m = 0.5 * (get(ua, shifted(f, ax, cell)) + get(ua, shifted(f, ax, A.right_face(cell))));
                return m * m;
            };
            tendency += (centre_flux(fa) - centre_flux(A.prev(fa))) / grid_.dx(a);

            // d(u_a u_b)/dx_b from edge fluxes
            for (int b = 0; b < dims; ++b) {
                if (b == a) continue;
                const auto bx = static_cast<std::size_t>(b);
                const Axis B{grid_.cells[bx], grid_.periodic[bx]};
                const auto& ub = u.u[bx];
                auto edge_flux = [&](std::size_t g) {  // g: face index along b
                    if (B.wall_face(g)) return 0.0;
                    const std::size_t gb = B.periodic && g == B.n ? 0 : g;
                    const double ua_edge =
                        0.5 * (get(ua, shifted(f, bx, B.prev(gb))) + get(ua, shifted(f, bx, gb)));
                    const Index3 at_g = shifted(f, bx, gb);
                    const double ub_edge =
                        0.5 * (get(ub, shifted(at_g, ax, A.prev(fa))) + get(ub, shifted(at_g, ax, fa)));
                    return ua_edge * ub_edge;
                };
                const std::size_t jb = f[bx];
                tendency += (edge_flux(jb + 1) - edge_flux(jb)) / grid_.dx(b);
            }
            res(i, j, k) = -tendency;
        });
    }
    return out;
}

Velocity FlowSolver::viscous_term(const Velocity& u) const {
    Velocity out = zero_velocity();
    if (nu_ == 0.0) return out;
    const int dims = grid_.dims();
    for (int a = 0; a < dims; ++a) {
        const auto ax = static_cast<std::size_t>(a);
        const Axis A{grid_.cells[ax], grid_.periodic[ax]};
        const auto& ua = u.u[ax];
        auto& res = out.u[ax];
        for_each_index(res.extents(), [&](std::size_t i, std::size_t j, std::size_t k) {
            const Index3 f{i, j, k};
            if (A.wall_face(f[ax])) return;
            const double centre = get(ua, f);
            double lap = 0.0;
            for (int b = 0; b < dims; ++b) {
                const auto bx = static_cast<std::size_t>(b);
                const Axis B{grid_.cells[bx], grid_.periodic[bx]};
                const std::size_t p = f[bx];
                double lo, hi;
                if (B.periodic) {
                    lo = get(ua, shifted(f, bx, B.prev(p)));
                    hi = get(ua, shifted(f, bx, B.next_cell(p)));
                } else if (b == a) {
                    // wall-normal component: wall faces hold zero
                    lo = get(ua, shifted(f, bx, p - 1));
                    hi = get(ua, shifted(f, bx, p + 1));
                } else {
                    // tangential component: no-slip ghost mirrors with opposite sign
                    lo = p == 0 ? -centre : get(ua, shifted(f, bx, p - 1));
                    hi = p + 1 == B.n ? -centre : get(ua, shifted(f, bx, p + 1));
                }
                const double h = grid_.dx(b);
                lap += (lo - 2.0 * centre + hi) / (h * h);
            }
            res(i, j, k) = nu_ * lap;
        });
    }
    return out;
}

FieldBuffer<double> FlowSolver::project(Velocity& u, double scale) const {
    auto rhs = divergence(u);
    for (auto& v : rhs.data()) v /= scale;
    FieldBuffer<double> phi(grid_.cell_extents());
    pressure_.solve(rhs.view(), phi.view());
    const auto g = gradient(phi);
    for (std::size_t a = 0; a < u.u.size(); ++a) {
        auto dst = u.u[a].data();
        auto src = g.u[a].data();
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] -= scale * src[i];
    }
    return phi;
}

StepReport FlowSolver::step(FlowState& state, double dt) const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("time step must be positive");
    StepReport report;
    Velocity previous;  // N(u) of the previous stage
    auto& u = state.velocity;
    for (int s = 0; s < 3; ++s) {
        const auto st = static_cast<std::size_t>(s);
        const double alpha = RK3Coefficients::alpha[st].value();
        const double gamma = RK3Coefficients::gamma[st].value();
        const double zeta = RK3Coefficients::zeta[st].value();

        Velocity rhs = advective_term(u);
        const Velocity visc = viscous_term(u);
        const Velocity grad_p = gradient(state.pressure);
        for (int a = 0; a < grid_.dims(); ++a) {
            const auto ax = static_cast<std::size_t>(a);
            auto n = rhs.u[ax].data();
            auto v = visc.u[ax].data();
            // forcing only acts along periodic axes, whose faces are all interior
            for (std::size_t i = 0; i < n.size(); ++i) n[i] += v[i] + forcing_[ax];
            auto ua = u.u[ax].data();
            auto gp = grad_p.u[ax].data();
            for (std::size_t i = 0; i < ua.size(); ++i) {
                double du = -alpha * gp[i] + gamma * n[i];
                if (s > 0) du += zeta * previous.u[ax].data()[i];
                ua[i] += dt * du;
            }
        }
        check_finite(u, state.pressure, s);
        const auto phi = project(u, alpha * dt);
        auto p = state.pressure.data();
        for (std::size_t i = 0; i < p.size(); ++i) p[i] += phi.data()[i];
        previous = std::move(rhs);

        const auto div = divergence(u);
        for (double d : div.data()) report.divergence[st] = std::max(report.divergence[st], std::abs(d));
    }
    state.time += dt;
    return report;
}

double FlowSolver::kinetic_energy(const Velocity& u) const {
    double cell_volume = 1.0;
    for (int a = 0; a < grid_.dims(); ++a) cell_volume *= grid_.dx(a);
    double sum = 0.0;
    for (const auto& c : u.u)
        for (double v : c.data()) sum += v * v;
    return 0.5 * sum * cell_volume;
}

double FlowSolver::max_speed(const Velocity& u) const {
    double m = 0.0;
    for (const auto& c : u.u)
        for (double v : c.data()) m = std::max(m, std::abs(v));
    return m;
}

std::vector<double> FlowSolver::mean_velocity(const Velocity& u) const {
    std::vector<double> means;
    for (const auto& c : u.u) {
        double s = 0.0;
        for (double v : c.data()) s += v;
        means.push_back(s / static_cast<double>(c.size()));
    }
    return means;
}

FlowState taylor_green(const FlowSolver& solver, double amplitude) {
    const auto& g = solver.grid();
    if (!g.periodic[0] || !g.periodic[1]) throw ConfigError("taylor-green needs periodic x and y axes");
    const double kx = 2.0 * std::numbers::pi / g.lengths[0];
    const double ky = 2.0 * std::numbers::pi / g.lengths[1];
    const double hx = g.dx(0), hy = g.dx(1);
    FlowState s = solver.zero_state();
    auto& u = s.velocity.u[0];
    auto& v = s.velocity.u[1];
    for_each_index(u.extents(), [&](std::size_t i, std::size_t j, std::size_t k) {
        const double x = static_cast<double>(i) * hx, y = (static_cast<double>(j) + 0.5) * hy;
        u(i, j, k) = amplitude * std::sin(kx * x) * std::cos(ky * y);
    });
    for_each_index(v.extents(), [&](std::size_t i, std::size_t j, std::size_t k) {
        const double x = (static_cast<double>(i) + 0.5) * hx, y = static_cast<double>(j) * hy;
        v(i, j, k) = -amplitude * (kx / ky) * std::cos(kx * x) * std::sin(ky * y);
    });
    return s;
}

FlowState channel(const FlowSolver& solver, double amplitude, double perturbation, std::uint64_t seed) {
    const auto& g = solver.grid();
    const int last = g.dims() - 1;
    const auto lx = static_cast<std::size_t>(last);
    if (!g.periodic[0] || g.periodic[lx]) throw ConfigError("channel needs periodic x and walls on the last axis");
    FlowState s = solver.zero_state();
    const double L = g.lengths[lx], h = g.dx(last);
    auto& u = s.velocity.u[0];
    for_each_index(u.extents(), [&](std::size_t i, std::size_t j, std::size_t k) {
        const Index3 idx{i, j, k};
        const double y = (static_cast<double>(idx[lx]) + 0.5) * h;
        u(i, j, k) = amplitude * 4.0 * y * (L - y) / (L * L);
    });
    if (perturbation != 0.0) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> dist(-perturbation, perturbation);
        for (int a = 0; a < g.dims(); ++a) {
            const auto ax = static_cast<std::size_t>(a);
            const Axis A{g.cells[ax], g.periodic[ax]};
            auto& c = s.velocity.u[ax];
            for_each_index(c.extents(), [&](std::size_t i, std::size_t j, std::size_t k) {
                const Index3 idx{i, j, k};
                const double r = dist(rng);
                if (!A.wall_face(idx[ax])) c(i, j, k) += r;
            });
        }
        solver.project(s.velocity, 1.0);
    }
    return s;
}

}  // namespace fastpoisson::flow
