#pragma once

#include "twistnc/affine.hpp"

#include <array>
#include <optional>
#include <vector>

namespace twistnc {

/// Center-of-mass / relative split built from the deformed observables:
/// X~_i = sum_a mu_a X^(a)_i, P~_i = sum_a P^(a)_i,
/// DX^(a) = X^(a) - X~, DP^(a) = P^(a) - mu_a P~.
template <class S>
struct ComSplit {
    std::array<AffineObservable<S>, 3> com_coordinates;
    std::array<AffineObservable<S>, 3> com_momenta;
    std::vector<std::array<AffineObservable<S>, 3>> rel_coordinates;
    std::vector<std::array<AffineObservable<S>, 3>> rel_momenta;
    std::vector<S> mass_fractions;
    S total_mass;
};

template <class S>
std::array<AffineObservable<S>, 3> com_coordinate_observables(const ParticleSystem<S>& system, double t)
{
    const std::size_t n = system.size();
    std::array<AffineObservable<S>, 3> com{AffineObservable<S>(n), AffineObservable<S>(n),
                                           AffineObservable<S>(n)};
    for (int i = 0; i < 3; ++i)
        for (std::size_t a = 0; a < n; ++a)
            com[i] += system.mass_fraction(a) * deformed_coordinate_observable(system, a, i, t);
    return com;
}

template <class S>
std::array<AffineObservable<S>, 3> com_momentum_observables(const ParticleSystem<S>& system)
{
    const std::size_t n = system.size();
    std::array<AffineObservable<S>, 3> com{AffineObservable<S>(n), AffineObservable<S>(n),
                                           AffineObservable<S>(n)};
    for (int i = 0; i < 3; ++i)
        for (std::size_t a = 0; a < n; ++a) com[i] += deformed_momentum_observable(system, a, i);
    return com;
}

template <class S>
ComSplit<S> com_split(const ParticleSystem<S>& system, double t)
{
    const std::size_t n = system.size();
    ComSplit<S> split{com_coordinate_observables(system, t), com_momentum_observables(system), {}, {}, {},
                      system.total_mass()};
    split.mass_fractions.reserve(n);
    for (std::size_t a = 0; a < n; ++a) split.mass_fractions.push_back(system.mass_fraction(a));
    split.rel_coordinates.reserve(n);
    split.rel_momenta.reserve(n);
    for (std::size_t a = 0; a < n; ++a) {
        std::array<AffineObservable<S>, 3> dx{AffineObservable<S>(n), AffineObservable<S>(n),
                                              AffineObservable<S>(n)};
        std::array<AffineObservable<S>, 3> dp{AffineObservable<S>(n), AffineObservable<S>(n),
                                              AffineObservable<S>(n)};
        for (int i = 0; i < 3; ++i) {
            dx[i] = deformed_coordinate_observable(system, a, i, t) - split.com_coordinates[i];
            dp[i] = deformed_momentum_observable(system, a, i) -
                    split.mass_fractions[a] * split.com_momenta[i];
        }
        split.rel_coordinates.push_back(std::move(dx));
        split.rel_momenta.push_back(std::move(dp));
    }
    return split;
}

/// theta_eff_ij = sum_a mu_a^2 theta^(a)_ij; governs the COM coordinate
/// bracket. Under the inverse-mass policy this equals gamma / M.
template <class S>
ThetaMatrix<S> effective_theta(const ParticleSystem<S>& system)
{
    ThetaMatrix<S> eff;
    for (std::size_t a = 0; a < system.size(); ++a) {
        const S mu = system.mass_fraction(a);
        eff = eff + system.theta_of(a).scaled(mu * mu);
    }
    return eff;
}

template <class S>
Mat3<S> brackets_of(const std::array<AffineObservable<S>, 3>& u, const std::array<AffineObservable<S>, 3>& v)
{
    Mat3<S> m = zero_mat3<S>();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = affine_bracket(u[i], v[j]);
    return m;
}

/// {X~_i, X~_j} evaluated through the affine engine.
template <class S>
Mat3<S> com_bracket(const ParticleSystem<S>& system, double t)
{
    const auto com = com_coordinate_observables(system, t);
    return brackets_of(com, com);
}

/// Closed form of the same bracket: f(t/tau) * theta_eff.
template <class S>
Mat3<S> com_bracket_closed_form(const ParticleSystem<S>& system, double t)
{
    const S f = system.twist_value(t);
    return effective_theta(system).scaled(f).full();
}

/// {DX^(a)_i, X~_j} evaluated through the affine engine. Zero under the
/// inverse-mass policy: the COM decouples from the relative motion.
template <class S>
Mat3<S> cross_bracket(const ParticleSystem<S>& system, std::size_t a, double t)
{
    if (a >= system.size()) throw std::out_of_range("cross_bracket: particle index out of range");
    const auto split = com_split(system, t);
    return brackets_of(split.rel_coordinates[a], split.com_coordinates);
}

/// Closed form: f * (mu_a theta^(a) - sum_d mu_d^2 theta^(d)).
template <class S>
Mat3<S> cross_bracket_closed_form(const ParticleSystem<S>& system, std::size_t a, double t)
{
    if (a >= system.size()) throw std::out_of_range("cross_bracket: particle index out of range");
    const S f = system.twist_value(t);
    const ThetaMatrix<S> m = system.theta_of(a).scaled(system.mass_fraction(a)) - effective_theta(system);
    return m.scaled(f).full();
}

/// Closed form of {DX^(a)_i, DX^(b)_j}:
/// f * (delta_ab theta^(a) - mu_a theta^(a) - mu_b theta^(b) + sum_d mu_d^2 theta^(d)).
template <class S>
Mat3<S> rel_rel_bracket_closed_form(const ParticleSystem<S>& system, std::size_t a, std::size_t b, double t)
{
    if (a >= system.size() || b >= system.size())
        throw std::out_of_range("rel_rel_bracket: particle index out of range");
    const S f = system.twist_value(t);
    ThetaMatrix<S> m = effective_theta(system) - system.theta_of(a).scaled(system.mass_fraction(a)) -
                       system.theta_of(b).scaled(system.mass_fraction(b));
    if (a == b) m = m + system.theta_of(a);
    return m.scaled(f).full();
}

/// Closed form of {DX^(a)_i, DP^(b)_j} = delta_ij (delta_ab - mu_b).
template <class S>
Mat3<S> rel_mixed_bracket_closed_form(const ParticleSystem<S>& system, std::size_t a, std::size_t b)
{
    Mat3<S> m = zero_mat3<S>();
    const S v = (a == b ? S(1) : S(0)) - system.mass_fraction(b);
    for (int i = 0; i < 3; ++i) m[i][i] = v;
    return m;
}

template <class S>
struct ConditionReport {
    bool holds = false;
    std::optional<ThetaMatrix<S>> gamma;  // mean of m_a theta^(a) when holds
    S max_residual = S(0);                // max |m_a theta^(a) - m_b theta^(b)| entrywise
};

/// Checks m_a theta^(a)_ij = gamma_ij = const across particles. An
/// inverse-mass policy satisfies this by construction (theta^(a) is defined
/// as gamma / m_a), so it reports a zero residual without recomputing the
/// products through rounding.
template <class S>
ConditionReport<S> check_inverse_mass_condition(const ParticleSystem<S>& system, const S& tol)
{
    if (tol < S(0)) throw std::invalid_argument("check_inverse_mass_condition: negative tolerance");
    ConditionReport<S> report;
    if (system.theta_policy().is_inverse_mass()) {
        report.holds = true;
        report.gamma = system.theta_policy().gamma();
        return report;
    }
    std::vector<ThetaMatrix<S>> products;
    products.reserve(system.size());
    for (std::size_t a = 0; a < system.size(); ++a)
        products.push_back(system.theta_of(a).scaled(system.mass(a)));

    for (std::size_t a = 0; a < products.size(); ++a)
        for (std::size_t b = a + 1; b < products.size(); ++b) {
            const S r = (products[a] - products[b]).max_abs_entry();
            if (r > report.max_residual) report.max_residual = r;
        }
    report.holds = !(report.max_residual > tol);
    if (report.holds) {
        ThetaMatrix<S> mean;
        for (const auto& m : products) mean = mean + m;
        const S inv_n = S(1) / S(static_cast<int>(products.size()));
        report.gamma = mean.scaled(inv_n);
    }
    return report;
}

/// X~_i in the canonical representation and its decomposition over
/// (x~, DP, P~). The raw DP coefficients come from substituting
/// p^(a) = DP^(a) + mu_a P~ directly; since sum_a DP^(a) = 0 they are only
/// defined up to a common shift, and the reduced coefficients (zero mean
/// across particles) are the canonical representative. The dependence on the
/// relative momenta vanishes iff the reduced coefficients are zero.
template <class S>
struct ComRepresentation {
    std::array<AffineObservable<S>, 3> coordinates;      // X~_i over (x, p)
    std::vector<Mat3<S>> rel_momentum_coeffs;            // raw: coeff of DP^(a)_j in X~_i
    std::vector<Mat3<S>> rel_momentum_coeffs_reduced;    // modulo sum_a DP^(a) = 0
    Mat3<S> total_momentum_coeffs;                       // coeff of P~_j in X~_i
    S max_reduced_coeff = S(0);
    bool relative_momentum_free = false;
};

template <class S>
ComRepresentation<S> com_representation(const ParticleSystem<S>& system, double t)
{
    const std::size_t n = system.size();
    const S f = system.twist_value(t);
    const S half = S(1) / S(2);

    ComRepresentation<S> rep{com_coordinate_observables(system, t), {}, {}, zero_mat3<S>(), S(0), false};

    // raw coefficient of DP^(a)_j in X~_i: -(1/2) f mu_a theta^(a)_ij
    rep.rel_momentum_coeffs.reserve(n);
    for (std::size_t a = 0; a < n; ++a) {
        const ThetaMatrix<S> scaled = system.theta_of(a).scaled(system.mass_fraction(a));
        Mat3<S> raw = zero_mat3<S>();
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) raw[i][j] = -half * f * scaled.entry(i, j);
        rep.rel_momentum_coeffs.push_back(raw);
    }

    // coefficient of P~_j: -(1/2) f sum_a mu_a^2 theta^(a)_ij = -(1/2) f theta_eff_ij
    const ThetaMatrix<S> eff = effective_theta(system);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) rep.total_momentum_coeffs[i][j] = -half * f * eff.entry(i, j);

    Mat3<S> mean = zero_mat3<S>();
    for (const auto& m : rep.rel_momentum_coeffs)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) mean[i][j] += m[i][j];
    const S inv_n = S(1) / S(static_cast<int>(n));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) mean[i][j] *= inv_n;

    rep.rel_momentum_coeffs_reduced.reserve(n);
    for (const auto& m : rep.rel_momentum_coeffs) {
        Mat3<S> red = zero_mat3<S>();
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                red[i][j] = m[i][j] - mean[i][j];
                if (abs_value(red[i][j]) > rep.max_reduced_coeff)
                    rep.max_reduced_coeff = abs_value(red[i][j]);
            }
        rep.rel_momentum_coeffs_reduced.push_back(red);
    }
    rep.relative_momentum_free = rep.max_reduced_coeff == S(0);
    return rep;
}

}  // namespace twistnc
