#pragma once

#include "twistnc/system.hpp"

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace twistnc {

/// Constant plus linear combination of the canonical variables x^(a)_i,
/// p^(a)_i. Closed under sums, scalar multiples and brackets: the bracket of
/// two affine observables is a phase-space constant.
template <class S>
class AffineObservable {
public:
    explicit AffineObservable(std::size_t particles)
        : particles_(particles), constant_(0), xc_(3 * particles, S(0)), pc_(3 * particles, S(0))
    {
    }

    static AffineObservable constant(std::size_t particles, S value)
    {
        AffineObservable obs(particles);
        obs.constant_ = std::move(value);
        return obs;
    }

    static AffineObservable coordinate(std::size_t particles, std::size_t a, int axis)
    {
        AffineObservable obs(particles);
        obs.x_coeff(a, axis) = S(1);
        return obs;
    }

    static AffineObservable momentum(std::size_t particles, std::size_t a, int axis)
    {
        AffineObservable obs(particles);
        obs.p_coeff(a, axis) = S(1);
        return obs;
    }

    std::size_t particles() const { return particles_; }

    S& constant_term() { return constant_; }
    const S& constant_term() const { return constant_; }

    S& x_coeff(std::size_t a, int axis) { return xc_[index(a, axis)]; }
    const S& x_coeff(std::size_t a, int axis) const { return xc_[index(a, axis)]; }
    S& p_coeff(std::size_t a, int axis) { return pc_[index(a, axis)]; }
    const S& p_coeff(std::size_t a, int axis) const { return pc_[index(a, axis)]; }

    const std::vector<S>& x_coeffs() const { return xc_; }
    const std::vector<S>& p_coeffs() const { return pc_; }

    AffineObservable& operator+=(const AffineObservable& o)
    {
        check_same(o);
        constant_ += o.constant_;
        for (std::size_t k = 0; k < xc_.size(); ++k) {
            xc_[k] += o.xc_[k];
            pc_[k] += o.pc_[k];
        }
        return *this;
    }

    AffineObservable& operator-=(const AffineObservable& o)
    {
        check_same(o);
        constant_ -= o.constant_;
        for (std::size_t k = 0; k < xc_.size(); ++k) {
            xc_[k] -= o.xc_[k];
            pc_[k] -= o.pc_[k];
        }
        return *this;
    }

    AffineObservable& operator*=(const S& s)
    {
        constant_ *= s;
        for (std::size_t k = 0; k < xc_.size(); ++k) {
            xc_[k] *= s;
            pc_[k] *= s;
        }
        return *this;
    }

    friend AffineObservable operator+(AffineObservable a, const AffineObservable& b) { return a += b; }
    friend AffineObservable operator-(AffineObservable a, const AffineObservable& b) { return a -= b; }
    friend AffineObservable operator*(const S& s, AffineObservable a) { return a *= s; }
    friend AffineObservable operator-(AffineObservable a)
    {
        a *= S(-1);
        return a;
    }

    bool operator==(const AffineObservable&) const = default;

    /// Largest |coefficient| including the constant; scale for residual checks.
    S max_abs_coeff() const
    {
        S best = abs_value(constant_);
        for (const S& v : xc_)
            if (abs_value(v) > best) best = abs_value(v);
        for (const S& v : pc_)
            if (abs_value(v) > best) best = abs_value(v);
        return best;
    }

private:
    std::size_t index(std::size_t a, int axis) const
    {
        if (a >= particles_ || axis < 0 || axis > 2)
            throw std::out_of_range("affine observable: bad particle/axis");
        return 3 * a + static_cast<std::size_t>(axis);
    }

    void check_same(const AffineObservable& o) const
    {
        if (particles_ != o.particles_)
            throw std::invalid_argument("affine observables over different particle sets");
    }

    std::size_t particles_;
    S constant_;
    std::vector<S> xc_, pc_;
};

/// Evaluate at a canonical state (double scalars only).
inline double evaluate(const AffineObservable<double>& obs, const PhaseState& state)
{
    if (obs.particles() != state.size()) throw std::invalid_argument("evaluate: particle count mismatch");
    double sum = obs.constant_term();
    for (std::size_t a = 0; a < state.size(); ++a)
        for (int i = 0; i < 3; ++i)
            sum += obs.x_coeff(a, i) * state.x[a][i] + obs.p_coeff(a, i) * state.p[a][i];
    return sum;
}

/// Poisson bracket {A, B} = sum_{a,i} dA/dx dB/dp - dA/dp dB/dx. The
/// derivatives are the stored coefficients, so the result is exact in exact
/// arithmetic. Corresponds to the commutator divided by i*hbar.
template <class S>
S affine_bracket(const AffineObservable<S>& a, const AffineObservable<S>& b)
{
    if (a.particles() != b.particles())
        throw std::invalid_argument("affine_bracket: observables over different particle sets");
    const auto& ax = a.x_coeffs();
    const auto& ap = a.p_coeffs();
    const auto& bx = b.x_coeffs();
    const auto& bp = b.p_coeffs();
    S sum(0);
    for (std::size_t k = 0; k < ax.size(); ++k) sum += ax[k] * bp[k] - ap[k] * bx[k];
    return sum;
}

template <class S>
struct SquareMatrix {
    std::size_t n = 0;
    std::vector<S> data;

    explicit SquareMatrix(std::size_t size = 0) : n(size), data(size * size, S(0)) {}

    S& at(std::size_t i, std::size_t j) { return data[i * n + j]; }
    const S& at(std::size_t i, std::size_t j) const { return data[i * n + j]; }
};

/// Pairwise bracket matrix, upper triangle computed and mirrored with a sign
/// so the output is antisymmetric exactly. Serial reference version.
template <class S>
SquareMatrix<S> bracket_matrix_serial(std::span<const AffineObservable<S>> observables)
{
    if (observables.empty()) throw std::invalid_argument("bracket_matrix: empty observable list");
    const std::size_t n = observables.size();
    SquareMatrix<S> m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            S v = affine_bracket(observables[i], observables[j]);
            m.at(j, i) = -v;
            m.at(i, j) = std::move(v);
        }
    }
    return m;
}

/// Same result as bracket_matrix_serial, entries computed in parallel.
/// Each entry is independent, so the two versions agree bitwise.
template <class S>
SquareMatrix<S> bracket_matrix(std::span<const AffineObservable<S>> observables)
{
    if (observables.empty()) throw std::invalid_argument("bracket_matrix: empty observable list");
    const std::size_t n = observables.size();
    SquareMatrix<S> m(n);
#pragma omp parallel for schedule(dynamic) if (n > 8)
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            S v = affine_bracket(observables[i], observables[j]);
            m.at(j, i) = -v;
            m.at(i, j) = std::move(v);
        }
    }
    return m;
}

template <class S>
SquareMatrix<S> bracket_matrix(const std::vector<AffineObservable<S>>& observables)
{
    return bracket_matrix(std::span<const AffineObservable<S>>(observables));
}

template <class S>
SquareMatrix<S> bracket_matrix_serial(const std::vector<AffineObservable<S>>& observables)
{
    return bracket_matrix_serial(std::span<const AffineObservable<S>>(observables));
}

/// The affine form of the deformed coordinate X^(a)_i at time t:
/// x^(a)_i - (1/2) f(t/tau) theta^(a)_ij p^(a)_j.
template <class S>
AffineObservable<S> deformed_coordinate_observable(const ParticleSystem<S>& system, std::size_t a,
                                                   int axis, double t)
{
    if (a >= system.size()) throw std::out_of_range("deformed coordinate: particle index out of range");
    if (axis < 0 || axis > 2) throw std::out_of_range("deformed coordinate: bad axis");
    const S f = system.twist_value(t);
    const ThetaMatrix<S> theta = system.theta_of(a);
    const S half = S(1) / S(2);
    AffineObservable<S> obs = AffineObservable<S>::coordinate(system.size(), a, axis);
    for (int j = 0; j < 3; ++j) {
        const S c = theta.entry(axis, j);
        if (!(c == S(0))) obs.p_coeff(a, j) -= half * f * c;
    }
    return obs;
}

/// Deformed momentum P^(a)_i = p^(a)_i.
template <class S>
AffineObservable<S> deformed_momentum_observable(const ParticleSystem<S>& system, std::size_t a, int axis)
{
    if (a >= system.size()) throw std::out_of_range("deformed momentum: particle index out of range");
    return AffineObservable<S>::momentum(system.size(), a, axis);
}

/// All deformed coordinates then all deformed momenta, particle-major:
/// [X^(0)_1..X^(0)_3, ..., X^(N-1)_3, P^(0)_1, ..., P^(N-1)_3].
template <class S>
std::vector<AffineObservable<S>> deformed_phase_set(const ParticleSystem<S>& system, double t)
{
    std::vector<AffineObservable<S>> obs;
    obs.reserve(6 * system.size());
    for (std::size_t a = 0; a < system.size(); ++a)
        for (int i = 0; i < 3; ++i) obs.push_back(deformed_coordinate_observable(system, a, i, t));
    for (std::size_t a = 0; a < system.size(); ++a)
        for (int i = 0; i < 3; ++i) obs.push_back(deformed_momentum_observable(system, a, i));
    return obs;
}

}  // namespace twistnc
