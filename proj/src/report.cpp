#include "twistnc/report.hpp"

#include "twistnc/composite.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace twistnc {

namespace {

template <class S>
ParticleSystem<S> build_system(const ScenarioConfig& config);

template <>
ParticleSystem<double> build_system<double>(const ScenarioConfig& config)
{
    return config.build_system();
}

template <>
ParticleSystem<Rational> build_system<Rational>(const ScenarioConfig& config)
{
    return config.build_system_exact();
}

template <class S>
struct ResidualTracker {
    S worst = S(0);

    void update(const S& got, const S& expect)
    {
        const S r = abs_value(S(got - expect));
        if (r > worst) worst = r;
    }
};

// expected blocks of the (X, P) sector: delta_ab f theta / delta /
// zero structure
template <class S>
S particle_sector_residual(const ParticleSystem<S>& system, double t)
{
    const std::size_t n = system.size();
    const S f = system.twist_value(t);
    const auto m = bracket_matrix(deformed_phase_set(system, t));
    ResidualTracker<S> res;
    for (std::size_t a = 0; a < n; ++a) {
        const ThetaMatrix<S> theta = system.theta_of(a);
        for (std::size_t b = 0; b < n; ++b)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    res.update(m.at(3 * a + i, 3 * b + j), a == b ? S(f * theta.entry(i, j)) : S(0));
                    res.update(m.at(3 * a + i, 3 * (n + b) + j), (a == b && i == j) ? S(1) : S(0));
                    res.update(m.at(3 * (n + a) + i, 3 * (n + b) + j), S(0));
                }
    }
    return res.worst;
}

template <class S>
S com_sector_residual(const ParticleSystem<S>& system, double t)
{
    const auto engine = com_bracket(system, t);
    const auto closed = com_bracket_closed_form(system, t);
    ResidualTracker<S> res;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) res.update(engine[i][j], closed[i][j]);
    return res.worst;
}

template <class S>
S com_canonical_residual(const ComSplit<S>& split)
{
    ResidualTracker<S> res;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            res.update(affine_bracket(split.com_coordinates[i], split.com_momenta[j]),
                       S(i == j ? 1 : 0));
            res.update(affine_bracket(split.com_momenta[i], split.com_momenta[j]), S(0));
        }
    return res.worst;
}

template <class S>
S cross_sector_residual(const ParticleSystem<S>& system, const ComSplit<S>& split, double t)
{
    ResidualTracker<S> res;
    for (std::size_t a = 0; a < system.size(); ++a) {
        const auto engine = brackets_of(split.rel_coordinates[a], split.com_coordinates);
        const auto closed = cross_bracket_closed_form(system, a, t);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) res.update(engine[i][j], closed[i][j]);
    }
    return res.worst;
}

template <class S>
S cross_zero_residual(const ParticleSystem<S>& system, const ComSplit<S>& split)
{
    ResidualTracker<S> res;
    for (std::size_t a = 0; a < system.size(); ++a) {
        const auto engine = brackets_of(split.rel_coordinates[a], split.com_coordinates);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) res.update(engine[i][j], S(0));
    }
    return res.worst;
}

template <class S>
S relative_sector_residual(const ParticleSystem<S>& system, const ComSplit<S>& split, double t)
{
    ResidualTracker<S> res;
    const std::size_t n = system.size();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            const auto xx = brackets_of(split.rel_coordinates[a], split.rel_coordinates[b]);
            const auto xx_closed = rel_rel_bracket_closed_form(system, a, b, t);
            const auto xp = brackets_of(split.rel_coordinates[a], split.rel_momenta[b]);
            const auto xp_closed = rel_mixed_bracket_closed_form(system, a, b);
            const auto pp = brackets_of(split.rel_momenta[a], split.rel_momenta[b]);
            const auto cp = brackets_of(split.com_momenta, split.rel_momenta[b]);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    res.update(xx[i][j], xx_closed[i][j]);
                    res.update(xp[i][j], xp_closed[i][j]);
                    res.update(pp[i][j], S(0));
                    res.update(cp[i][j], S(0));
                }
        }
    return res.worst;
}

// raw[b] - sum_a mu_a raw[a] + ptilde must equal the direct p-coefficient
template <class S>
S representation_residual(const ParticleSystem<S>& system, double t)
{
    const auto rep = com_representation(system, t);
    const std::size_t n = system.size();
    ResidualTracker<S> res;
    for (int i = 0; i < 3; ++i)
        for (std::size_t b = 0; b < n; ++b)
            for (int j = 0; j < 3; ++j) {
                S weighted(0);
                for (std::size_t a = 0; a < n; ++a)
                    weighted += system.mass_fraction(a) * rep.rel_momentum_coeffs[a][i][j];
                const S reconstructed =
                    rep.rel_momentum_coeffs[b][i][j] - weighted + rep.total_momentum_coeffs[i][j];
                res.update(reconstructed, rep.coordinates[i].p_coeff(b, j));
            }
    return res.worst;
}

template <class S>
S momentum_commutation_residual(const ParticleSystem<S>& system, const ComSplit<S>& split, double t)
{
    const std::size_t n = system.size();
    ResidualTracker<S> res;
    for (int j = 0; j < 3; ++j) {
        for (std::size_t a = 0; a < n; ++a)
            for (int i = 0; i < 3; ++i)
                res.update(affine_bracket(split.com_momenta[j],
                                          deformed_momentum_observable(system, a, i)),
                           S(0));
        for (int i = 0; i < 3; ++i)
            for (std::size_t a = 0; a < n; ++a)
                res.update(affine_bracket(deformed_coordinate_observable(system, a, i, t),
                                          split.com_momenta[j]),
                           S(i == j ? 1 : 0));
    }
    return res.worst;
}

std::vector<std::string> observable_labels(std::size_t n)
{
    std::vector<std::string> labels;
    const auto push_group = [&](const std::string& prefix) {
        for (std::size_t a = 1; a <= n; ++a)
            for (int i = 1; i <= 3; ++i)
                labels.push_back(prefix + std::to_string(i) + "_p" + std::to_string(a));
    };
    push_group("X");
    push_group("P");
    for (int i = 1; i <= 3; ++i) labels.push_back("Xc" + std::to_string(i));
    for (int i = 1; i <= 3; ++i) labels.push_back("Pc" + std::to_string(i));
    push_group("dX");
    push_group("dP");
    return labels;
}

template <class S>
void print_full_matrix(std::ostringstream& out, const ParticleSystem<S>& system,
                       const ComSplit<S>& split, double t)
{
    std::vector<AffineObservable<S>> observables = deformed_phase_set(system, t);
    for (int i = 0; i < 3; ++i) observables.push_back(split.com_coordinates[i]);
    for (int i = 0; i < 3; ++i) observables.push_back(split.com_momenta[i]);
    for (std::size_t a = 0; a < system.size(); ++a)
        for (int i = 0; i < 3; ++i) observables.push_back(split.rel_coordinates[a][i]);
    for (std::size_t a = 0; a < system.size(); ++a)
        for (int i = 0; i < 3; ++i) observables.push_back(split.rel_momenta[a][i]);

    const auto labels = observable_labels(system.size());
    const auto matrix = bracket_matrix(observables);
    out << "bracket matrix (X, P, Xc, Pc, dX, dP) at t = " << format_double(t) << ":\n";
    out << "  columns:";
    for (const auto& label : labels) out << ' ' << label;
    out << '\n';
    for (std::size_t i = 0; i < matrix.n; ++i) {
        out << "  " << labels[i] << ":";
        for (std::size_t j = 0; j < matrix.n; ++j) out << ' ' << format_scalar(matrix.at(i, j));
        out << '\n';
    }
}

struct CheckLine {
    std::string name;
    std::string residual;
    bool pass = false;
};

template <class S>
AlgebraCheckResult run_impl(const ScenarioConfig& config, const AlgebraCheckOptions& options)
{
    const ParticleSystem<S> system = build_system<S>(config);
    const double t0 = config.run_or_default().t0.value;
    const double tau = system.twist().tau();

    std::vector<double> times{t0, t0 + 0.5 * tau, t0 + 2.0 * tau};
    if (options.seed) {
        std::mt19937_64 gen(*options.seed);
        std::uniform_real_distribution<double> dist(t0 - 2.0 * tau, t0 + 2.0 * tau);
        for (int k = 0; k < 3; ++k) times.push_back(dist(gen));
    }

    std::ostringstream out;
    out << "# twistnc algebra-check\n";
    out << "arithmetic: " << (options.exact ? "exact" : "float") << '\n';
    if (!options.exact) out << "tolerance: " << format_double(options.tol) << '\n';
    out << "particles: " << system.size() << '\n';
    out << "policy: " << (system.theta_policy().is_inverse_mass() ? "inverse-mass" : "per-particle")
        << '\n';
    out << "twist: " << twist_kind_name(system.twist().kind())
        << " (tau = " << format_double(tau) << ")\n";

    const ThetaMatrix<S> eff = effective_theta(system);
    out << "effective theta (12 13 23): " << format_scalar(eff.e12) << ' ' << format_scalar(eff.e13)
        << ' ' << format_scalar(eff.e23) << '\n';

    const auto condition = check_inverse_mass_condition(system, S(options.exact ? 0.0 : options.tol));
    if (condition.holds) {
        out << "inverse-mass condition: holds (gamma = " << format_scalar(condition.gamma->e12) << ' '
            << format_scalar(condition.gamma->e13) << ' ' << format_scalar(condition.gamma->e23)
            << ", max residual = " << format_scalar(condition.max_residual) << ")\n";
    } else {
        out << "inverse-mass condition: violated (max residual = "
            << format_scalar(condition.max_residual) << ")\n";
    }

    const auto rep = com_representation(system, t0);
    const bool rep_free = options.exact ? rep.max_reduced_coeff == S(0)
                                        : to_double(rep.max_reduced_coeff) <= options.tol;
    out << "com representation: relative-momentum coefficients "
        << (rep_free ? "all zero" : "nonzero")
        << " (max reduced coefficient = " << format_scalar(rep.max_reduced_coeff) << ")\n";

    bool all_passed = true;
    for (double t : times) {
        const S f = system.twist_value(t);
        const ComSplit<S> split = com_split(system, t);
        out << "\n## t = " << format_double(t) << "  f(t/tau) = " << format_scalar(f) << '\n';

        std::vector<std::pair<std::string, S>> checks;
        checks.emplace_back("particle-brackets", particle_sector_residual(system, t));
        checks.emplace_back("com-bracket", com_sector_residual(system, t));
        checks.emplace_back("com-canonical", com_canonical_residual(split));
        checks.emplace_back("cross-brackets", cross_sector_residual(system, split, t));
        if (system.theta_policy().is_inverse_mass())
            checks.emplace_back("cross-zero", cross_zero_residual(system, split));
        checks.emplace_back("relative-brackets", relative_sector_residual(system, split, t));
        checks.emplace_back("representation-decomposition", representation_residual(system, t));
        checks.emplace_back("momentum-commutation", momentum_commutation_residual(system, split, t));

        const double scale = std::max(1.0, std::fabs(to_double(f)));
        for (const auto& [name, residual] : checks) {
            const bool pass = options.exact ? residual == S(0)
                                            : to_double(residual) <= options.tol * scale;
            all_passed = all_passed && pass;
            out << "check " << name << ": max residual = " << format_scalar(residual) << "  "
                << (pass ? "PASS" : "FAIL") << '\n';
        }
    }

    if (options.include_matrix) {
        out << '\n';
        print_full_matrix(out, system, com_split(system, times.front()), times.front());
    }

    out << "\nRESULT: " << (all_passed ? "PASS" : "FAIL") << '\n';
    return {all_passed, out.str()};
}

}  // namespace

AlgebraCheckResult run_algebra_check(const ScenarioConfig& config, const AlgebraCheckOptions& options)
{
    if (options.exact) return run_impl<Rational>(config, options);
    return run_impl<double>(config, options);
}

namespace {

template <class S>
std::string com_split_impl(const ScenarioConfig& config, bool exact, double tol)
{
    const ParticleSystem<S> system = build_system<S>(config);
    if (system.size() < 2) throw ConfigError("com-split needs at least 2 particles");
    const double t = config.run_or_default().t0.value;
    const auto rep = com_representation(system, t);

    std::ostringstream out;
    out << "# twistnc com-split\n";
    out << "arithmetic: " << (exact ? "exact" : "float") << '\n';
    out << "particles: " << system.size() << '\n';
    out << "total mass: " << format_scalar(system.total_mass()) << '\n';
    out << "mass fractions:";
    for (std::size_t a = 0; a < system.size(); ++a) out << ' ' << format_scalar(system.mass_fraction(a));
    out << '\n';
    out << "t = " << format_double(t)
        << "  f(t/tau) = " << format_scalar(system.twist_value(t)) << '\n';
    out << "\nXc_i = xc_i + sum_a C_raw[a](i,j) dP^a_j + Ceff(i,j) Pc_j\n";

    out << "Pc coefficients Ceff(i,j):\n";
    for (int i = 0; i < 3; ++i) {
        out << "  i=" << i + 1 << ":";
        for (int j = 0; j < 3; ++j) out << ' ' << format_scalar(rep.total_momentum_coeffs[i][j]);
        out << '\n';
    }
    for (std::size_t a = 0; a < system.size(); ++a) {
        out << "dP coefficients, particle " << a + 1 << " (raw | reduced):\n";
        for (int i = 0; i < 3; ++i) {
            out << "  i=" << i + 1 << ":";
            for (int j = 0; j < 3; ++j) out << ' ' << format_scalar(rep.rel_momentum_coeffs[a][i][j]);
            out << " |";
            for (int j = 0; j < 3; ++j)
                out << ' ' << format_scalar(rep.rel_momentum_coeffs_reduced[a][i][j]);
            out << '\n';
        }
    }

    S raw_max(0);
    for (const auto& m : rep.rel_momentum_coeffs) {
        const S v = max_abs(m);
        if (v > raw_max) raw_max = v;
    }
    if (raw_max == S(0) && max_abs(rep.total_momentum_coeffs) == S(0))
        out << "\nXc_i = xc_i (no momentum dependence)\n";

    const bool free_of_rel = exact ? rep.max_reduced_coeff == S(0)
                                   : to_double(rep.max_reduced_coeff) <= tol;
    out << "\nrelative-momentum coefficients: " << (free_of_rel ? "all zero" : "nonzero")
        << " (max reduced coefficient = " << format_scalar(rep.max_reduced_coeff) << ")\n";
    return out.str();
}

}  // namespace

std::string com_split_report(const ScenarioConfig& config, bool exact, double tol)
{
    if (exact) return com_split_impl<Rational>(config, true, tol);
    return com_split_impl<double>(config, false, tol);
}

}  // namespace twistnc
