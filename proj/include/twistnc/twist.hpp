#pragma once

#include "twistnc/scalar.hpp"

#include <string>
#include <vector>

namespace twistnc {

enum class TwistKind {
    ConstantOne,
    Cosh,
    Sinh,
    Cos,
    Sin,
    PolyHyp,   // c0 + sum_k c_{2k-1} cosh(k u) + c_{2k} sinh(k u)
    PolyTrig,  // c0 + sum_k c_{2k-1} cos(k u)  + c_{2k} sin(k u)
};

const char* twist_kind_name(TwistKind kind);
TwistKind twist_kind_from_name(const std::string& name);

/// Time factor f(t/tau) multiplying all coordinate brackets. ConstantOne is
/// the tau -> infinity limit where the canonical constant-theta algebra is
/// recovered. The poly kinds combine harmonics of the base pair, which spans
/// the polynomials in (sinh, cosh) resp. (sin, cos).
class TwistFunction {
public:
    TwistFunction() = default;  // constant-one
    TwistFunction(TwistKind kind, double tau, std::vector<double> coefficients = {});

    double eval(double t) const;            // f(t/tau)
    double derivative(double t) const;      // d/dt f(t/tau)
    double antiderivative(double t) const;  // integral_0^t f(s/tau) ds

    TwistKind kind() const { return kind_; }
    double tau() const { return tau_; }
    const std::vector<double>& coefficients() const { return coefficients_; }
    bool is_constant_one() const { return kind_ == TwistKind::ConstantOne; }

    bool operator==(const TwistFunction&) const = default;

private:
    TwistKind kind_ = TwistKind::ConstantOne;
    double tau_ = 1.0;
    std::vector<double> coefficients_;
};

}  // namespace twistnc
