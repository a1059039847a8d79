#pragma once

#include "twistnc/vec3.hpp"

#include <span>
#include <stdexcept>
#include <string>

namespace twistnc {

enum class PotentialKind { UniformField, Central, Pairwise };
enum class RadialProfile { InverseR, Harmonic };

const char* radial_profile_name(RadialProfile profile);
RadialProfile radial_profile_from_name(const std::string& name);

struct SingularPotentialError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// External potentials are per-mass (acceleration units): uniform-field is
/// V = g * X_axis, central is a radial profile of |X|. Pairwise potentials
/// V_int act on inter-particle separations. Radial kinds reject separations
/// below r_floor with a hard error instead of clamping.
struct PotentialSpec {
    PotentialKind kind = PotentialKind::UniformField;
    double g = 0.0;
    int axis = 0;  // 0-based
    RadialProfile profile = RadialProfile::Harmonic;
    double strength = 0.0;
    double r_floor = 1e-9;

    static PotentialSpec uniform_field(double g, int axis);
    static PotentialSpec central(RadialProfile profile, double strength, double r_floor = 1e-9);
    static PotentialSpec pairwise(RadialProfile profile, double strength, double r_floor = 1e-9);
};

/// Profile value / radial derivative at separation r (central and pairwise).
double radial_value(const PotentialSpec& spec, double r);
double radial_derivative(const PotentialSpec& spec, double r);

double external_value(const PotentialSpec& spec, const Vec3& X);
Vec3 external_gradient(const PotentialSpec& spec, const Vec3& X);

/// Gradient of (1/2) sum_{a != b} V_int(|X^(a) - X^(b)|) with respect to each
/// X^(a). Serial reference; the parallel version below matches it bitwise
/// (every output entry accumulates its own pair sum in the same order).
void pairwise_gradient_serial(const PotentialSpec& spec, std::span<const Vec3> X, std::span<Vec3> out);
void pairwise_gradient(const PotentialSpec& spec, std::span<const Vec3> X, std::span<Vec3> out);

double pairwise_energy(const PotentialSpec& spec, std::span<const Vec3> X);

}  // namespace twistnc
