#pragma once

#include "twistnc/hamiltonian.hpp"
#include "twistnc/ode.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace twistnc {

/// PaperBracket evolves the deformed variables with {., H} under the
/// deformed brackets only. RepresentationConsistent evolves the canonical
/// pair (x, p) under the canonical flow of H(x, p, t), which adds the
/// explicit time derivative -(1/2) (df/dt) theta p to dX/dt. The two
/// coincide for constant twists.
enum class DynamicsMode { PaperBracket, RepresentationConsistent };
enum class IntegratorKind { Rk4, Rk45Adaptive };

const char* dynamics_mode_name(DynamicsMode mode);
const char* integrator_kind_name(IntegratorKind kind);

/// Time derivatives of both pictures at one state.
struct Derivatives {
    std::vector<Vec3> dX, dP;  // deformed
    std::vector<Vec3> dx, dp;  // canonical
};

Derivatives equations_of_motion(const Hamiltonian& hamiltonian, const PhaseState& state,
                                DynamicsMode mode);

struct TrajectoryMeta {
    IntegratorKind method = IntegratorKind::Rk4;
    DynamicsMode mode = DynamicsMode::PaperBracket;
    double dt = 0.0;         // rk4
    double tolerance = 0.0;  // rk45
    IntegrationStats stats;
    std::uint64_t system_hash = 0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<PhaseState> states;             // canonical (x, p)
    std::vector<std::vector<Vec3>> deformed_x;  // X per sample; P equals p
    TrajectoryMeta meta;

    std::size_t samples() const { return times.size(); }
    Vec3 total_momentum(std::size_t k) const;
    Vec3 com_position(const ParticleSystemD& system, std::size_t k) const;  // sum_a mu_a X^(a)
};

struct IntegrateOptions {
    IntegratorKind method = IntegratorKind::Rk4;
    double dt = 1e-3;
    double tolerance = 1e-9;
    DynamicsMode mode = DynamicsMode::PaperBracket;
    std::uint64_t system_hash = 0;  // carried into metadata
};

Trajectory integrate(const Hamiltonian& hamiltonian, const PhaseState& initial, double t0, double t1,
                     const IntegrateOptions& options = {});

/// COM state under the inverse-mass condition: coordinates X~ and the
/// per-total-mass momenta P~' = P~ / M.
struct ComState {
    Vec3 position{0.0, 0.0, 0.0};
    Vec3 momentum_per_mass{0.0, 0.0, 0.0};
};

/// dX~_i/dt = P~'_i + f gamma_ij dV/dX~_j, dP~'_i/dt = -dV/dX~_i.
/// Requires the inverse-mass condition within condition_tol; a violating
/// per-particle policy is rejected with the residual in the message.
ComState com_equations_of_motion(const ParticleSystemD& system, const PotentialSpec& external,
                                 const ComState& state, double t, double condition_tol = 1e-12);

struct ComTrajectory {
    std::vector<double> times;
    std::vector<ComState> states;
};

ComTrajectory integrate_com(const ParticleSystemD& system, const PotentialSpec& external,
                            const ComState& initial, double t0, double t1, double dt,
                            double condition_tol = 1e-12);

/// Relative-motion part of the energy, defined operationally as
/// H - P~^2 / 2M - M V(X~). Constant along the flow exactly when the COM
/// decouples from the relative motion (inverse-mass condition, constant
/// twist); drifts otherwise.
double relative_energy(const Hamiltonian& hamiltonian, const PhaseState& state);

/// max over samples and components of |P~(t) - P~(0)|. The conservation
/// claim applies to translation-invariant Hamiltonians (no external term).
double momentum_conservation_residual(const Trajectory& trajectory);

/// Bracket-level check that P~ commutes with H_s: every {X^(a)_i, P~_j} is
/// the same delta_ij (so Newton pairs cancel in the interaction sum) and P~
/// commutes with every momentum (so any kinetic term commutes). Returns the
/// max residual, zero for a correct engine.
double momentum_symbolic_residual(const ParticleSystemD& system, double t);

struct WepOptions {
    double dt = 1e-3;
    DynamicsMode mode = DynamicsMode::PaperBracket;
};

struct WepResult {
    double max_deviation = 0.0;
    std::vector<double> times;
    std::vector<double> deviations;  // ||X_m1(t) - X_m2(t)||
};

/// Drops two single-particle systems of masses m1, m2 from the same
/// (x0, P'0 = P0/m) and measures the deformed-coordinate separation.
/// A per-particle policy must hold exactly one matrix (the shared theta).
WepResult wep_deviation(const PotentialSpec& potential, double m1, double m2,
                        const ThetaPolicy<double>& policy, const TwistFunction& twist, double t1,
                        const Vec3& x0, const Vec3& v0, const WepOptions& options = {});

/// One trajectory per mass, integrated concurrently.
std::vector<Trajectory> wep_sweep(const PotentialSpec& potential, const std::vector<double>& masses,
                                  const ThetaPolicy<double>& policy, const TwistFunction& twist,
                                  double t1, const Vec3& x0, const Vec3& v0,
                                  const WepOptions& options = {});

}  // namespace twistnc
