#include "twistnc/hamiltonian.hpp"

namespace twistnc {

Hamiltonian::Hamiltonian(ParticleSystemD system, std::optional<PotentialSpec> external,
                         std::optional<PotentialSpec> pairwise)
    : system_(std::move(system)), external_(std::move(external)), pairwise_(std::move(pairwise))
{
    if (external_ && external_->kind == PotentialKind::Pairwise)
        throw std::invalid_argument("hamiltonian: external potential cannot be pairwise");
    if (pairwise_ && pairwise_->kind != PotentialKind::Pairwise)
        throw std::invalid_argument("hamiltonian: interaction potential must be pairwise");
}

void Hamiltonian::position_gradient(std::span<const Vec3> X, std::vector<Vec3>& out) const
{
    const std::size_t n = system_.size();
    out.assign(n, Vec3{0.0, 0.0, 0.0});
    if (pairwise_) pairwise_gradient(*pairwise_, X, out);
    if (external_)
        for (std::size_t a = 0; a < n; ++a)
            out[a] += system_.mass(a) * external_gradient(*external_, X[a]);
}

double Hamiltonian::energy_deformed(std::span<const Vec3> X, std::span<const Vec3> P) const
{
    double sum = 0.0;
    for (std::size_t a = 0; a < system_.size(); ++a) sum += 0.5 * dot(P[a], P[a]) / system_.mass(a);
    if (pairwise_) sum += pairwise_energy(*pairwise_, X);
    if (external_)
        for (std::size_t a = 0; a < system_.size(); ++a)
            sum += system_.mass(a) * external_value(*external_, X[a]);
    return sum;
}

double Hamiltonian::energy(const PhaseState& state) const
{
    std::vector<Vec3> X(system_.size());
    for (std::size_t a = 0; a < system_.size(); ++a) X[a] = bopp_shift(system_, state, a);
    return energy_deformed(X, state.p);
}

Hamiltonian build_hamiltonian(ParticleSystemD system, std::optional<PotentialSpec> external,
                              std::optional<PotentialSpec> pairwise)
{
    return Hamiltonian(std::move(system), std::move(external), std::move(pairwise));
}

}  // namespace twistnc
