#include "twistnc/ode.hpp"

#include <algorithm>
#include <cmath>

namespace twistnc {

namespace {

bool all_finite(std::span<const double> y)
{
    return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

void eval_rhs(const OdeRhs& rhs, double t, std::span<const double> y, std::span<double> dydt,
              double last_valid)
{
    try {
        rhs(t, y, dydt);
    } catch (const IntegrationError&) {
        throw;
    } catch (const std::exception& e) {
        throw IntegrationError(e.what(), last_valid);
    }
}

void rk4_step(const OdeRhs& rhs, std::vector<double>& y, double t, double h, std::vector<double>& k1,
              std::vector<double>& k2, std::vector<double>& k3, std::vector<double>& k4,
              std::vector<double>& tmp)
{
    const std::size_t n = y.size();
    eval_rhs(rhs, t, y, k1, t);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    eval_rhs(rhs, t + 0.5 * h, tmp, k2, t);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    eval_rhs(rhs, t + 0.5 * h, tmp, k3, t);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
    eval_rhs(rhs, t + h, tmp, k4, t);
    for (std::size_t i = 0; i < n; ++i)
        y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

}  // namespace

IntegrationStats integrate_rk4(const OdeRhs& rhs, std::vector<double>& y, double t0, double t1,
                               double dt, const OdeObserver& observer)
{
    if (!(t1 > t0)) throw std::invalid_argument("integrate_rk4: t1 must exceed t0");
    if (!(dt > 0.0)) throw std::invalid_argument("integrate_rk4: dt must be positive");

    const std::size_t n = y.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    IntegrationStats stats;

    if (observer) observer(t0, y);

    const double span = t1 - t0;
    const auto full_steps = static_cast<std::size_t>(span / dt);
    double t = t0;
    for (std::size_t k = 0; k < full_steps; ++k) {
        t = t0 + static_cast<double>(k) * dt;
        rk4_step(rhs, y, t, dt, k1, k2, k3, k4, tmp);
        if (!all_finite(y)) throw IntegrationError("non-finite state", t);
        t = t0 + static_cast<double>(k + 1) * dt;
        ++stats.steps;
        if (observer) observer(t, y);
    }
    // remainder step onto t1, skipped when dt divides the span to rounding
    if (t1 - t > 1e-12 * dt) {
        rk4_step(rhs, y, t, t1 - t, k1, k2, k3, k4, tmp);
        if (!all_finite(y)) throw IntegrationError("non-finite state", t);
        ++stats.steps;
        if (observer) observer(t1, y);
    }
    return stats;
}

IntegrationStats integrate_rk45(const OdeRhs& rhs, std::vector<double>& y, double t0, double t1,
                                double tol, const OdeObserver& observer)
{
    if (!(t1 > t0)) throw std::invalid_argument("integrate_rk45: t1 must exceed t0");
    if (!(tol > 0.0)) throw std::invalid_argument("integrate_rk45: tolerance must be positive");

    // Dormand-Prince 5(4) tableau
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const std::size_t n = y.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n);
    IntegrationStats stats;

    if (observer) observer(t0, y);

    double t = t0;
    double h = std::min((t1 - t0) / 100.0, 0.1);
    constexpr std::size_t kMaxSteps = 50'000'000;

    eval_rhs(rhs, t, y, k1, t);  // FSAL
    while (t < t1) {
        h = std::min(h, t1 - t);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * a21 * k1[i];
        eval_rhs(rhs, t + c2 * h, tmp, k2, t);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        eval_rhs(rhs, t + c3 * h, tmp, k3, t);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        eval_rhs(rhs, t + c4 * h, tmp, k4, t);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        eval_rhs(rhs, t + c5 * h, tmp, k5, t);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        eval_rhs(rhs, t + h, tmp, k6, t);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        eval_rhs(rhs, t + h, ynew, k7, t);

        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                                  e7 * k7[i]);
            const double scale = tol + tol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
            err += (e / scale) * (e / scale);
        }
        err = std::sqrt(err / static_cast<double>(n));

        if (err <= 1.0 || h <= 1e-14 * std::max(1.0, std::fabs(t))) {
            t += h;
            y = ynew;
            std::swap(k1, k7);
            if (!all_finite(y)) throw IntegrationError("non-finite state", t - h);
            ++stats.steps;
            if (observer) observer(t, y);
        } else {
            ++stats.rejected;
        }
        const double factor =
            err > 0.0 ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
        h *= factor;
        if (stats.steps + stats.rejected > kMaxSteps)
            throw IntegrationError("step limit exceeded", t);
    }
    return stats;
}

}  // namespace twistnc
