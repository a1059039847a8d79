#pragma once

#include "twistnc/potential.hpp"
#include "twistnc/system.hpp"

#include <optional>
#include <vector>

namespace twistnc {

/// H = sum_a P^(a)^2 / 2 m_a + (1/2) sum_{a != b} V_int(|X^(a) - X^(b)|)
///   + sum_a m_a V(X^(a)),
/// with the deformed coordinates X obtained from the canonical state by the
/// momentum shift. The external potential is per-mass (acceleration units).
class Hamiltonian {
public:
    Hamiltonian(ParticleSystemD system, std::optional<PotentialSpec> external,
                std::optional<PotentialSpec> pairwise);

    const ParticleSystemD& system() const { return system_; }
    const std::optional<PotentialSpec>& external() const { return external_; }
    const std::optional<PotentialSpec>& pairwise() const { return pairwise_; }
    bool has_external() const { return external_.has_value(); }

    /// dH/dX^(a) for all particles.
    void position_gradient(std::span<const Vec3> X, std::vector<Vec3>& out) const;

    double energy_deformed(std::span<const Vec3> X, std::span<const Vec3> P) const;
    double energy(const PhaseState& state) const;

private:
    ParticleSystemD system_;
    std::optional<PotentialSpec> external_;
    std::optional<PotentialSpec> pairwise_;
};

Hamiltonian build_hamiltonian(ParticleSystemD system, std::optional<PotentialSpec> external,
                              std::optional<PotentialSpec> pairwise);

}  // namespace twistnc
