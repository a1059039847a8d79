#pragma once

// Test-side oracles and generators, independent of the library paths they
// check: quadrature for twist antiderivatives, finite differences for twist
// derivatives, the closed-form uniform-field trajectory, and randomized
// system generation shared by the property suites.

#include "twistnc/composite.hpp"
#include "twistnc/dynamics.hpp"

#include <functional>
#include <random>
#include <vector>

namespace testsupport {

using namespace twistnc;

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& gen, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(gen);
}

// composite Simpson on [0, t]
inline double simpson(const std::function<double(double)>& f, double t, int intervals = 4000)
{
    if (intervals % 2 != 0) ++intervals;
    const double h = t / intervals;
    double sum = f(0.0) + f(t);
    for (int k = 1; k < intervals; ++k) sum += f(k * h) * (k % 2 == 0 ? 2.0 : 4.0);
    return sum * h / 3.0;
}

inline double central_difference(const std::function<double(double)>& f, double t, double h = 1e-6)
{
    return (f(t + h) - f(t - h)) / (2.0 * h);
}

inline ThetaMatrix<double> random_theta(std::mt19937_64& gen)
{
    return {uniform(gen, -1.0, 1.0), uniform(gen, -1.0, 1.0), uniform(gen, -1.0, 1.0)};
}

inline TwistFunction random_twist(std::mt19937_64& gen, int which)
{
    const TwistKind kinds[] = {TwistKind::ConstantOne, TwistKind::Cosh, TwistKind::Sinh,
                               TwistKind::Cos,         TwistKind::Sin,  TwistKind::PolyHyp,
                               TwistKind::PolyTrig};
    const TwistKind kind = kinds[which % 7];
    const double tau = uniform(gen, 0.5, 3.0);
    if (kind == TwistKind::PolyHyp || kind == TwistKind::PolyTrig)
        return TwistFunction(kind, tau,
                             {uniform(gen, -1.0, 1.0), uniform(gen, -1.0, 1.0), uniform(gen, -1.0, 1.0)});
    return TwistFunction(kind, tau);
}

inline ParticleSystem<double> random_system(std::mt19937_64& gen, int which, std::size_t max_particles = 6)
{
    const auto n = static_cast<std::size_t>(1 + gen() % max_particles);
    std::vector<double> masses;
    std::vector<ThetaMatrix<double>> thetas;
    for (std::size_t a = 0; a < n; ++a) {
        masses.push_back(uniform(gen, 0.1, 10.0));
        thetas.push_back(random_theta(gen));
    }
    return ParticleSystem<double>(std::move(masses), ThetaPolicy<double>::per_particle(std::move(thetas)),
                                  random_twist(gen, which));
}

// exact-arithmetic mirror of a double system (conversion is exact)
inline ParticleSystem<Rational> exact_mirror(const ParticleSystem<double>& system)
{
    std::vector<Rational> masses;
    for (double m : system.masses()) masses.emplace_back(m);
    if (system.theta_policy().is_inverse_mass()) {
        const auto& g = system.theta_policy().gamma();
        return ParticleSystem<Rational>(
            std::move(masses),
            ThetaPolicy<Rational>::inverse_mass({Rational(g.e12), Rational(g.e13), Rational(g.e23)}),
            system.twist());
    }
    std::vector<ThetaMatrix<Rational>> thetas;
    for (const auto& th : system.theta_policy().matrices())
        thetas.push_back({Rational(th.e12), Rational(th.e13), Rational(th.e23)});
    return ParticleSystem<Rational>(std::move(masses),
                                    ThetaPolicy<Rational>::per_particle(std::move(thetas)),
                                    system.twist());
}

// Max deviation of the full deformed (X, P) bracket matrix from the expected
// blocks {X^a_i, X^b_j} = delta_ab f theta^(a)_ij, {X, P} = delta delta,
// {P, P} = 0. The caller supplies the matrix so both kernel variants can be
// checked against the same expectation.
template <class S>
S phase_block_residual(const ParticleSystem<S>& system, double t, const SquareMatrix<S>& m)
{
    const std::size_t n = system.size();
    const S f = system.twist_value(t);
    S worst(0);
    auto update = [&](const S& got, const S& expect) {
        const S r = abs_value(got - expect);
        if (r > worst) worst = r;
    };
    for (std::size_t a = 0; a < n; ++a) {
        const ThetaMatrix<S> ta = system.theta_of(a);
        for (std::size_t b = 0; b < n; ++b)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    const std::size_t xi = 3 * a + i, xj = 3 * b + j;
                    const std::size_t pi = 3 * (n + a) + i, pj = 3 * (n + b) + j;
                    update(m.at(xi, xj), a == b ? f * ta.entry(i, j) : S(0));
                    update(m.at(xi, pj), (a == b && i == j) ? S(1) : S(0));
                    update(m.at(pi, pj), S(0));
                }
    }
    return worst;
}

template <class S>
S phase_block_residual(const ParticleSystem<S>& system, double t)
{
    const auto observables = deformed_phase_set(system, t);
    return phase_block_residual(system, t, bracket_matrix(observables));
}

// Closed-form solution of the uniform-field problem in paper-bracket mode:
//   P_i(t) = p0_i - m g t delta_{i,axis}
//   X_i(t) = X0_i + p0_i t / m - g t^2/2 delta_{i,axis}
//            + m g theta_{i,axis} * antiderivative(f)(t)
struct UniformFieldOracle {
    double mass;
    ThetaMatrix<double> theta;
    TwistFunction twist;
    double g;
    int axis;
    Vec3 x0{0, 0, 0}, p0{0, 0, 0};

    Vec3 deformed_x0() const
    {
        Vec3 X0 = x0;
        const double f0 = twist.eval(0.0);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) X0[i] -= 0.5 * f0 * theta.entry(i, j) * p0[j];
        return X0;
    }

    Vec3 position(double t) const
    {
        const Vec3 X0 = deformed_x0();
        const double F = twist.antiderivative(t);
        Vec3 X;
        for (int i = 0; i < 3; ++i) {
            X[i] = X0[i] + p0[i] * t / mass + mass * g * theta.entry(i, axis) * F;
            if (i == axis) X[i] -= 0.5 * g * t * t;
        }
        return X;
    }

    Vec3 momentum(double t) const
    {
        Vec3 P = p0;
        P[axis] -= mass * g * t;
        return P;
    }
};

}  // namespace testsupport
