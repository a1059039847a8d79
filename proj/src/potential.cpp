#include "twistnc/potential.hpp"

#include <cmath>
#include <exception>

namespace twistnc {

const char* radial_profile_name(RadialProfile profile)
{
    switch (profile) {
        case RadialProfile::InverseR: return "inverse-r";
        case RadialProfile::Harmonic: return "harmonic";
    }
    return "?";
}

RadialProfile radial_profile_from_name(const std::string& name)
{
    if (name == "inverse-r") return RadialProfile::InverseR;
    if (name == "harmonic") return RadialProfile::Harmonic;
    throw std::invalid_argument("unknown radial profile: " + name);
}

namespace {

void check_radial_params(double strength, double r_floor)
{
    if (!std::isfinite(strength)) throw std::invalid_argument("potential: non-finite strength");
    if (!(r_floor > 0.0)) throw std::invalid_argument("potential: r_floor must be positive");
}

double checked_r(const PotentialSpec& spec, double r)
{
    if (r < spec.r_floor)
        throw SingularPotentialError("separation " + std::to_string(r) + " below floor " +
                                     std::to_string(spec.r_floor));
    return r;
}

}  // namespace

PotentialSpec PotentialSpec::uniform_field(double g, int axis)
{
    if (!std::isfinite(g)) throw std::invalid_argument("potential: non-finite g");
    if (axis < 0 || axis > 2) throw std::invalid_argument("potential: axis out of range");
    PotentialSpec spec;
    spec.kind = PotentialKind::UniformField;
    spec.g = g;
    spec.axis = axis;
    return spec;
}

PotentialSpec PotentialSpec::central(RadialProfile profile, double strength, double r_floor)
{
    check_radial_params(strength, r_floor);
    PotentialSpec spec;
    spec.kind = PotentialKind::Central;
    spec.profile = profile;
    spec.strength = strength;
    spec.r_floor = r_floor;
    return spec;
}

PotentialSpec PotentialSpec::pairwise(RadialProfile profile, double strength, double r_floor)
{
    check_radial_params(strength, r_floor);
    PotentialSpec spec;
    spec.kind = PotentialKind::Pairwise;
    spec.profile = profile;
    spec.strength = strength;
    spec.r_floor = r_floor;
    return spec;
}

double radial_value(const PotentialSpec& spec, double r)
{
    switch (spec.profile) {
        case RadialProfile::InverseR: return spec.strength / checked_r(spec, r);
        case RadialProfile::Harmonic: return 0.5 * spec.strength * r * r;
    }
    return 0.0;
}

double radial_derivative(const PotentialSpec& spec, double r)
{
    switch (spec.profile) {
        case RadialProfile::InverseR: {
            const double rc = checked_r(spec, r);
            return -spec.strength / (rc * rc);
        }
        case RadialProfile::Harmonic: return spec.strength * r;
    }
    return 0.0;
}

double external_value(const PotentialSpec& spec, const Vec3& X)
{
    if (spec.kind == PotentialKind::UniformField) return spec.g * X[spec.axis];
    if (spec.kind == PotentialKind::Central) return radial_value(spec, norm(X));
    throw std::invalid_argument("external_value: not an external potential");
}

Vec3 external_gradient(const PotentialSpec& spec, const Vec3& X)
{
    if (spec.kind == PotentialKind::UniformField) {
        Vec3 grad{0.0, 0.0, 0.0};
        grad[spec.axis] = spec.g;
        return grad;
    }
    if (spec.kind == PotentialKind::Central) {
        const double r = checked_r(spec, norm(X));
        const double scale = radial_derivative(spec, r) / r;
        return scale * X;
    }
    throw std::invalid_argument("external_gradient: not an external potential");
}

namespace {

inline Vec3 pair_gradient_term(const PotentialSpec& spec, const Vec3& Xa, const Vec3& Xb)
{
    const Vec3 d = Xa - Xb;
    const double r = checked_r(spec, norm(d));
    return (radial_derivative(spec, r) / r) * d;
}

}  // namespace

void pairwise_gradient_serial(const PotentialSpec& spec, std::span<const Vec3> X, std::span<Vec3> out)
{
    if (spec.kind != PotentialKind::Pairwise)
        throw std::invalid_argument("pairwise_gradient: not a pairwise potential");
    const std::size_t n = X.size();
    for (std::size_t a = 0; a < n; ++a) {
        Vec3 grad{0.0, 0.0, 0.0};
        for (std::size_t b = 0; b < n; ++b)
            if (b != a) grad += pair_gradient_term(spec, X[a], X[b]);
        out[a] = grad;
    }
}

void pairwise_gradient(const PotentialSpec& spec, std::span<const Vec3> X, std::span<Vec3> out)
{
    if (spec.kind != PotentialKind::Pairwise)
        throw std::invalid_argument("pairwise_gradient: not a pairwise potential");
    const auto n = static_cast<std::ptrdiff_t>(X.size());
    std::exception_ptr error = nullptr;  // exceptions must not unwind out of the omp region
#pragma omp parallel for schedule(static) if (n > 16)
    for (std::ptrdiff_t a = 0; a < n; ++a) {
        try {
            Vec3 grad{0.0, 0.0, 0.0};
            for (std::ptrdiff_t b = 0; b < n; ++b)
                if (b != a) grad += pair_gradient_term(spec, X[a], X[b]);
            out[a] = grad;
        } catch (...) {
#pragma omp critical
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
}

double pairwise_energy(const PotentialSpec& spec, std::span<const Vec3> X)
{
    if (spec.kind != PotentialKind::Pairwise)
        throw std::invalid_argument("pairwise_energy: not a pairwise potential");
    double sum = 0.0;
    for (std::size_t a = 0; a < X.size(); ++a)
        for (std::size_t b = a + 1; b < X.size(); ++b)
            sum += radial_value(spec, norm(X[a] - X[b]));
    return sum;
}

}  // namespace twistnc
