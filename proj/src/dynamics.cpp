#include "twistnc/dynamics.hpp"

#include "twistnc/composite.hpp"

#include <cmath>
#include <exception>

namespace twistnc {

const char* dynamics_mode_name(DynamicsMode mode)
{
    return mode == DynamicsMode::PaperBracket ? "paper" : "representation";
}

const char* integrator_kind_name(IntegratorKind kind)
{
    return kind == IntegratorKind::Rk4 ? "rk4" : "rk45";
}

namespace {

Vec3 theta_apply(const ThetaMatrix<double>& theta, const Vec3& v)
{
    Vec3 out{0.0, 0.0, 0.0};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[i] += theta.entry(i, j) * v[j];
    return out;
}

}  // namespace

Derivatives equations_of_motion(const Hamiltonian& hamiltonian, const PhaseState& state,
                                DynamicsMode mode)
{
    const ParticleSystemD& system = hamiltonian.system();
    const std::size_t n = system.size();
    if (state.x.size() != n || state.p.size() != n)
        throw std::invalid_argument("equations_of_motion: state size mismatch");

    const double f = system.twist().eval(state.t);
    const double fdot = system.twist().derivative(state.t);

    std::vector<Vec3> X(n);
    for (std::size_t a = 0; a < n; ++a) X[a] = bopp_shift(system, state, a);
    std::vector<Vec3> grad;
    hamiltonian.position_gradient(X, grad);

    Derivatives d{std::vector<Vec3>(n), std::vector<Vec3>(n), std::vector<Vec3>(n),
                  std::vector<Vec3>(n)};
    for (std::size_t a = 0; a < n; ++a) {
        const double m = system.mass(a);
        const ThetaMatrix<double> theta = system.theta_of(a);
        const Vec3 theta_grad = theta_apply(theta, grad[a]);
        const Vec3 theta_p = theta_apply(theta, state.p[a]);

        d.dp[a] = -1.0 * grad[a];
        d.dP[a] = d.dp[a];

        const Vec3 drift = (1.0 / m) * state.p[a];
        const Vec3 paper_dX = drift + f * theta_grad;          // {X, H} under the deformed brackets
        const Vec3 canonical_dx = drift + 0.5 * f * theta_grad;  // dH/dp of H(x, p, t)

        if (mode == DynamicsMode::PaperBracket) {
            d.dX[a] = paper_dX;
            d.dx[a] = canonical_dx + 0.5 * fdot * theta_p;
        } else {
            d.dx[a] = canonical_dx;
            d.dX[a] = paper_dX - 0.5 * fdot * theta_p;
        }
    }
    return d;
}

Vec3 Trajectory::total_momentum(std::size_t k) const
{
    Vec3 sum{0.0, 0.0, 0.0};
    for (const Vec3& p : states.at(k).p) sum += p;
    return sum;
}

Vec3 Trajectory::com_position(const ParticleSystemD& system, std::size_t k) const
{
    Vec3 sum{0.0, 0.0, 0.0};
    for (std::size_t a = 0; a < system.size(); ++a)
        sum += system.mass_fraction(a) * deformed_x.at(k)[a];
    return sum;
}

namespace {

// State packing: first 3n entries are coordinates (X in paper mode, x in
// representation mode), next 3n the momenta (identical in both pictures).
void pack(std::span<const Vec3> q, std::span<const Vec3> p, std::vector<double>& y)
{
    const std::size_t n = q.size();
    y.resize(6 * n);
    for (std::size_t a = 0; a < n; ++a)
        for (int i = 0; i < 3; ++i) {
            y[3 * a + i] = q[a][i];
            y[3 * (n + a) + i] = p[a][i];
        }
}

void unpack(std::span<const double> y, std::size_t n, std::vector<Vec3>& q, std::vector<Vec3>& p)
{
    q.resize(n);
    p.resize(n);
    for (std::size_t a = 0; a < n; ++a)
        for (int i = 0; i < 3; ++i) {
            q[a][i] = y[3 * a + i];
            p[a][i] = y[3 * (n + a) + i];
        }
}

}  // namespace

Trajectory integrate(const Hamiltonian& hamiltonian, const PhaseState& initial, double t0, double t1,
                     const IntegrateOptions& options)
{
    const ParticleSystemD& system = hamiltonian.system();
    const std::size_t n = system.size();
    if (initial.x.size() != n || initial.p.size() != n)
        throw std::invalid_argument("integrate: initial state size mismatch");

    const bool paper = options.mode == DynamicsMode::PaperBracket;

    // scratch buffers reused across RHS calls
    std::vector<Vec3> buf_q, buf_p, buf_grad;

    OdeRhs rhs = [&](double t, std::span<const double> y, std::span<double> dydt) {
        auto& q = buf_q;
        auto& p = buf_p;
        auto& grad = buf_grad;
        unpack(y, n, q, p);
        const double f = system.twist().eval(t);

        if (!paper) {
            // q holds canonical x: shift to deformed X for the gradient
            for (std::size_t a = 0; a < n; ++a) {
                const ThetaMatrix<double> theta = system.theta_of(a);
                q[a] = q[a] - 0.5 * f * theta_apply(theta, p[a]);
            }
        }
        hamiltonian.position_gradient(q, grad);

        for (std::size_t a = 0; a < n; ++a) {
            const double m = system.mass(a);
            const ThetaMatrix<double> theta = system.theta_of(a);
            const Vec3 theta_grad = theta_apply(theta, grad[a]);
            const double scale = paper ? 1.0 : 0.5;
            const Vec3 dq = (1.0 / m) * p[a] + scale * f * theta_grad;
            for (int i = 0; i < 3; ++i) {
                dydt[3 * a + i] = dq[i];
                dydt[3 * (n + a) + i] = -grad[a][i];
            }
        }
    };

    Trajectory traj;
    traj.meta.method = options.method;
    traj.meta.mode = options.mode;
    traj.meta.dt = options.dt;
    traj.meta.tolerance = options.tolerance;
    traj.meta.system_hash = options.system_hash;

    std::vector<double> y;
    if (paper) {
        PhaseState s = initial;
        s.t = t0;
        std::vector<Vec3> X0(n);
        for (std::size_t a = 0; a < n; ++a) X0[a] = bopp_shift(system, s, a);
        pack(X0, initial.p, y);
    } else {
        pack(initial.x, initial.p, y);
    }

    OdeObserver observer = [&](double t, std::span<const double> yv) {
        std::vector<Vec3> q(n), p(n);
        unpack(yv, n, q, p);
        PhaseState state;
        state.t = t;
        state.p = p;
        std::vector<Vec3> X(n);
        if (paper) {
            X = q;
            state.x.resize(n);
            for (std::size_t a = 0; a < n; ++a) state.x[a] = bopp_unshift(system, t, q[a], p[a], a);
        } else {
            state.x = q;
            for (std::size_t a = 0; a < n; ++a) X[a] = bopp_shift(system, state, a);
        }
        traj.times.push_back(t);
        traj.states.push_back(std::move(state));
        traj.deformed_x.push_back(std::move(X));
    };

    if (options.method == IntegratorKind::Rk4)
        traj.meta.stats = integrate_rk4(rhs, y, t0, t1, options.dt, observer);
    else
        traj.meta.stats = integrate_rk45(rhs, y, t0, t1, options.tolerance, observer);
    return traj;
}

ComState com_equations_of_motion(const ParticleSystemD& system, const PotentialSpec& external,
                                 const ComState& state, double t, double condition_tol)
{
    const auto report = check_inverse_mass_condition<double>(system, condition_tol);
    if (!report.holds)
        throw std::invalid_argument(
            "com_equations_of_motion: inverse-mass condition violated, max residual " +
            format_double(report.max_residual));
    const ThetaMatrix<double> gamma = *report.gamma;
    const double f = system.twist().eval(t);
    const Vec3 grad = external_gradient(external, state.position);

    ComState d;
    d.position = state.momentum_per_mass + f * theta_apply(gamma, grad);
    d.momentum_per_mass = -1.0 * grad;
    return d;
}

ComTrajectory integrate_com(const ParticleSystemD& system, const PotentialSpec& external,
                            const ComState& initial, double t0, double t1, double dt,
                            double condition_tol)
{
    // validate once up front so the error carries the residual
    const auto report = check_inverse_mass_condition<double>(system, condition_tol);
    if (!report.holds)
        throw std::invalid_argument("integrate_com: inverse-mass condition violated, max residual " +
                                    format_double(report.max_residual));
    const ThetaMatrix<double> gamma = *report.gamma;

    OdeRhs rhs = [&](double t, std::span<const double> y, std::span<double> dydt) {
        const Vec3 X{y[0], y[1], y[2]};
        const Vec3 Pp{y[3], y[4], y[5]};
        const double f = system.twist().eval(t);
        const Vec3 grad = external_gradient(external, X);
        const Vec3 dX = Pp + f * theta_apply(gamma, grad);
        for (int i = 0; i < 3; ++i) {
            dydt[i] = dX[i];
            dydt[3 + i] = -grad[i];
        }
    };

    ComTrajectory traj;
    std::vector<double> y{initial.position[0],          initial.position[1],
                          initial.position[2],          initial.momentum_per_mass[0],
                          initial.momentum_per_mass[1], initial.momentum_per_mass[2]};
    OdeObserver observer = [&](double t, std::span<const double> yv) {
        traj.times.push_back(t);
        traj.states.push_back(ComState{{yv[0], yv[1], yv[2]}, {yv[3], yv[4], yv[5]}});
    };
    integrate_rk4(rhs, y, t0, t1, dt, observer);
    return traj;
}

double relative_energy(const Hamiltonian& hamiltonian, const PhaseState& state)
{
    const ParticleSystemD& system = hamiltonian.system();
    Vec3 com{0.0, 0.0, 0.0}, total_p{0.0, 0.0, 0.0};
    for (std::size_t a = 0; a < system.size(); ++a) {
        com += system.mass_fraction(a) * bopp_shift(system, state, a);
        total_p += state.p[a];
    }
    double com_energy = 0.5 * dot(total_p, total_p) / system.total_mass();
    if (hamiltonian.external())
        com_energy += system.total_mass() * external_value(*hamiltonian.external(), com);
    return hamiltonian.energy(state) - com_energy;
}

double momentum_conservation_residual(const Trajectory& trajectory)
{
    if (trajectory.samples() == 0) return 0.0;
    const Vec3 p0 = trajectory.total_momentum(0);
    double worst = 0.0;
    for (std::size_t k = 1; k < trajectory.samples(); ++k)
        worst = std::max(worst, max_abs(trajectory.total_momentum(k) - p0));
    return worst;
}

double momentum_symbolic_residual(const ParticleSystemD& system, double t)
{
    const std::size_t n = system.size();
    const auto com_p = com_momentum_observables<double>(system);
    double worst = 0.0;
    for (int j = 0; j < 3; ++j) {
        // {P~_j, any momentum} = 0: kinetic terms commute
        for (std::size_t a = 0; a < n; ++a)
            for (int i = 0; i < 3; ++i) {
                const auto mom = deformed_momentum_observable<double>(system, a, i);
                worst = std::max(worst, std::fabs(affine_bracket(com_p[j], mom)));
            }
        // {X^(a)_i, P~_j} identical across particles: interaction gradients
        // enter in Newton pairs and cancel
        for (int i = 0; i < 3; ++i) {
            const auto first = affine_bracket(deformed_coordinate_observable<double>(system, 0, i, t),
                                              com_p[j]);
            for (std::size_t a = 1; a < n; ++a) {
                const auto v = affine_bracket(deformed_coordinate_observable<double>(system, a, i, t),
                                              com_p[j]);
                worst = std::max(worst, std::fabs(v - first));
            }
            const double expected = i == j ? 1.0 : 0.0;
            worst = std::max(worst, std::fabs(first - expected));
        }
    }
    return worst;
}

namespace {

ParticleSystemD single_particle_system(double mass, const ThetaPolicy<double>& policy,
                                       const TwistFunction& twist)
{
    if (policy.is_inverse_mass()) return ParticleSystemD({mass}, policy, twist);
    if (policy.matrices().size() != 1)
        throw std::invalid_argument("wep: per-particle policy must hold exactly one shared theta");
    return ParticleSystemD({mass}, ThetaPolicy<double>::per_particle({policy.matrices()[0]}), twist);
}

}  // namespace

std::vector<Trajectory> wep_sweep(const PotentialSpec& potential, const std::vector<double>& masses,
                                  const ThetaPolicy<double>& policy, const TwistFunction& twist,
                                  double t1, const Vec3& x0, const Vec3& v0, const WepOptions& options)
{
    if (masses.empty()) throw std::invalid_argument("wep: no masses");
    std::vector<Trajectory> result(masses.size());
    std::exception_ptr error = nullptr;
    const auto count = static_cast<std::ptrdiff_t>(masses.size());
#pragma omp parallel for schedule(dynamic) if (count > 1)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
        try {
            const double m = masses[k];
            ParticleSystemD system = single_particle_system(m, policy, twist);
            Hamiltonian hamiltonian(system, potential, std::nullopt);
            PhaseState s0;
            s0.t = 0.0;
            s0.x = {x0};
            s0.p = {m * v0};
            IntegrateOptions opts;
            opts.method = IntegratorKind::Rk4;
            opts.dt = options.dt;
            opts.mode = options.mode;
            result[k] = integrate(hamiltonian, s0, 0.0, t1, opts);
        } catch (...) {
#pragma omp critical
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
    return result;
}

WepResult wep_deviation(const PotentialSpec& potential, double m1, double m2,
                        const ThetaPolicy<double>& policy, const TwistFunction& twist, double t1,
                        const Vec3& x0, const Vec3& v0, const WepOptions& options)
{
    const auto trajs = wep_sweep(potential, {m1, m2}, policy, twist, t1, x0, v0, options);
    WepResult result;
    result.times = trajs[0].times;
    result.deviations.reserve(result.times.size());
    for (std::size_t k = 0; k < result.times.size(); ++k) {
        const double d = norm(trajs[0].deformed_x[k][0] - trajs[1].deformed_x[k][0]);
        result.deviations.push_back(d);
        result.max_deviation = std::max(result.max_deviation, d);
    }
    return result;
}

}  // namespace twistnc
