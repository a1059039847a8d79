#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace twistnc {

/// Raised when a step fails (singular potential, non-finite state). Carries
/// the last time at which the state was still valid.
struct IntegrationError : std::runtime_error {
    IntegrationError(const std::string& message, double last_valid)
        : std::runtime_error(message + " (last valid time t=" + std::to_string(last_valid) + ")"),
          last_valid_time(last_valid)
    {
    }
    double last_valid_time;
};

using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;
using OdeObserver = std::function<void(double t, std::span<const double> y)>;

struct IntegrationStats {
    std::size_t steps = 0;     // accepted steps
    std::size_t rejected = 0;  // rejected trial steps (adaptive only)
};

/// Classical fixed-step RK4. Step times are t0 + k*dt (no accumulation
/// drift); the final step is shortened to land on t1 exactly. The observer
/// fires at t0 and after every step.
IntegrationStats integrate_rk4(const OdeRhs& rhs, std::vector<double>& y, double t0, double t1, double dt,
                               const OdeObserver& observer = {});

/// Embedded Dormand-Prince 5(4) with standard PI-free step control. `tol` is
/// used as both absolute and relative tolerance. Observer fires at t0 and at
/// accepted steps.
IntegrationStats integrate_rk45(const OdeRhs& rhs, std::vector<double>& y, double t0, double t1,
                                double tol, const OdeObserver& observer = {});

}  // namespace twistnc
