#pragma once

#include "twistnc/theta.hpp"
#include "twistnc/twist.hpp"
#include "twistnc/vec3.hpp"

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace twistnc {

/// N particles with masses m_a, their deformation parameters and the shared
/// twist function. Immutable after construction.
template <class S>
class ParticleSystem {
public:
    ParticleSystem(std::vector<S> masses, ThetaPolicy<S> policy, TwistFunction twist = {})
        : masses_(std::move(masses)), policy_(std::move(policy)), twist_(std::move(twist))
    {
        if (masses_.empty()) throw std::invalid_argument("system: no particles");
        total_mass_ = S(0);
        for (const S& m : masses_) {
            if (!(m > S(0))) throw std::invalid_argument("system: masses must be positive");
            total_mass_ += m;
        }
        if (policy_.kind() == ThetaPolicy<S>::Kind::PerParticle &&
            policy_.matrices().size() != masses_.size())
            throw std::invalid_argument("system: per-particle theta count != particle count");
    }

    std::size_t size() const { return masses_.size(); }
    const std::vector<S>& masses() const { return masses_; }
    const S& mass(std::size_t a) const { return masses_.at(a); }
    const S& total_mass() const { return total_mass_; }
    S mass_fraction(std::size_t a) const { return masses_.at(a) / total_mass_; }

    const ThetaPolicy<S>& theta_policy() const { return policy_; }
    const TwistFunction& twist() const { return twist_; }

    ThetaMatrix<S> theta_of(std::size_t a) const
    {
        if (a >= masses_.size()) throw std::out_of_range("system: particle index out of range");
        if (policy_.is_inverse_mass()) {
            const S inv = S(1) / masses_[a];
            return policy_.gamma().scaled(inv);
        }
        return policy_.matrices()[a];
    }

    /// f(t/tau) as the working scalar. In exact mode this is the exact
    /// rational value of the double evaluation; the bracket identities are
    /// linear in f, so they hold exactly at any such sample.
    S twist_value(double t) const { return S(twist_.eval(t)); }

private:
    std::vector<S> masses_;
    ThetaPolicy<S> policy_;
    TwistFunction twist_;
    S total_mass_;
};

using ParticleSystemD = ParticleSystem<double>;

/// Canonical phase-space state (x, p) at time t. Deformed coordinates are
/// derived on demand via bopp_shift.
struct PhaseState {
    double t = 0.0;
    std::vector<Vec3> x;
    std::vector<Vec3> p;

    std::size_t size() const { return x.size(); }
};

/// X^(a)_i = x^(a)_i - (1/2) f(t/tau) theta^(a)_ij p^(a)_j; momenta unchanged.
inline Vec3 bopp_shift(const ParticleSystem<double>& system, const PhaseState& state, std::size_t a)
{
    if (a >= system.size() || state.x.size() != system.size() || state.p.size() != system.size())
        throw std::out_of_range("bopp_shift: bad state or index");
    const double f = system.twist().eval(state.t);
    const ThetaMatrix<double> theta = system.theta_of(a);
    Vec3 X = state.x[a];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) X[i] -= 0.5 * f * theta.entry(i, j) * state.p[a][j];
    return X;
}

/// Inverse of bopp_shift: x = X + (1/2) f theta p, with p = P.
inline Vec3 bopp_unshift(const ParticleSystem<double>& system, double t, const Vec3& X, const Vec3& P,
                         std::size_t a)
{
    const double f = system.twist().eval(t);
    const ThetaMatrix<double> theta = system.theta_of(a);
    Vec3 x = X;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) x[i] += 0.5 * f * theta.entry(i, j) * P[j];
    return x;
}

}  // namespace twistnc
