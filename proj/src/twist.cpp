#include "twistnc/twist.hpp"

#include <cmath>
#include <stdexcept>

namespace twistnc {

const char* twist_kind_name(TwistKind kind)
{
    switch (kind) {
        case TwistKind::ConstantOne: return "constant-one";
        case TwistKind::Cosh: return "cosh";
        case TwistKind::Sinh: return "sinh";
        case TwistKind::Cos: return "cos";
        case TwistKind::Sin: return "sin";
        case TwistKind::PolyHyp: return "poly-hyp";
        case TwistKind::PolyTrig: return "poly-trig";
    }
    return "?";
}

TwistKind twist_kind_from_name(const std::string& name)
{
    for (TwistKind k : {TwistKind::ConstantOne, TwistKind::Cosh, TwistKind::Sinh, TwistKind::Cos,
                        TwistKind::Sin, TwistKind::PolyHyp, TwistKind::PolyTrig}) {
        if (name == twist_kind_name(k)) return k;
    }
    throw std::invalid_argument("unknown twist kind: " + name);
}

TwistFunction::TwistFunction(TwistKind kind, double tau, std::vector<double> coefficients)
    : kind_(kind), tau_(tau), coefficients_(std::move(coefficients))
{
    if (!(tau_ > 0.0) || !std::isfinite(tau_))
        throw std::invalid_argument("twist: tau must be positive and finite");
    const bool poly = kind_ == TwistKind::PolyHyp || kind_ == TwistKind::PolyTrig;
    if (poly && coefficients_.empty())
        throw std::invalid_argument("twist: polynomial kind needs coefficients");
    if (!poly && !coefficients_.empty())
        throw std::invalid_argument("twist: coefficients only apply to polynomial kinds");
    for (double c : coefficients_)
        if (!std::isfinite(c)) throw std::invalid_argument("twist: non-finite coefficient");
}

namespace {

void require_finite(double t)
{
    if (!std::isfinite(t)) throw std::invalid_argument("twist: non-finite time");
}

// c0 + sum_k c_{2k-1} A(k u) + c_{2k} B(k u), with (A, B) = (cosh, sinh) or (cos, sin)
template <class FA, class FB>
double poly_eval(const std::vector<double>& c, double u, FA A, FB B)
{
    double sum = c[0];
    for (std::size_t k = 1; 2 * k - 1 < c.size(); ++k) {
        sum += c[2 * k - 1] * A(k * u);
        if (2 * k < c.size()) sum += c[2 * k] * B(k * u);
    }
    return sum;
}

}  // namespace

double TwistFunction::eval(double t) const
{
    require_finite(t);
    const double u = t / tau_;
    switch (kind_) {
        case TwistKind::ConstantOne: return 1.0;
        case TwistKind::Cosh: return std::cosh(u);
        case TwistKind::Sinh: return std::sinh(u);
        case TwistKind::Cos: return std::cos(u);
        case TwistKind::Sin: return std::sin(u);
        case TwistKind::PolyHyp:
            return poly_eval(coefficients_, u, [](double v) { return std::cosh(v); },
                             [](double v) { return std::sinh(v); });
        case TwistKind::PolyTrig:
            return poly_eval(coefficients_, u, [](double v) { return std::cos(v); },
                             [](double v) { return std::sin(v); });
    }
    return 1.0;
}

double TwistFunction::derivative(double t) const
{
    require_finite(t);
    const double u = t / tau_;
    const double s = 1.0 / tau_;
    switch (kind_) {
        case TwistKind::ConstantOne: return 0.0;
        case TwistKind::Cosh: return s * std::sinh(u);
        case TwistKind::Sinh: return s * std::cosh(u);
        case TwistKind::Cos: return -s * std::sin(u);
        case TwistKind::Sin: return s * std::cos(u);
        case TwistKind::PolyHyp: {
            double sum = 0.0;
            for (std::size_t k = 1; 2 * k - 1 < coefficients_.size(); ++k) {
                sum += coefficients_[2 * k - 1] * k * std::sinh(k * u);
                if (2 * k < coefficients_.size()) sum += coefficients_[2 * k] * k * std::cosh(k * u);
            }
            return s * sum;
        }
        case TwistKind::PolyTrig: {
            double sum = 0.0;
            for (std::size_t k = 1; 2 * k - 1 < coefficients_.size(); ++k) {
                sum -= coefficients_[2 * k - 1] * k * std::sin(k * u);
                if (2 * k < coefficients_.size()) sum += coefficients_[2 * k] * k * std::cos(k * u);
            }
            return s * sum;
        }
    }
    return 0.0;
}

double TwistFunction::antiderivative(double t) const
{
    require_finite(t);
    const double u = t / tau_;
    switch (kind_) {
        case TwistKind::ConstantOne: return t;
        case TwistKind::Cosh: return tau_ * std::sinh(u);
        case TwistKind::Sinh: return tau_ * (std::cosh(u) - 1.0);
        case TwistKind::Cos: return tau_ * std::sin(u);
        case TwistKind::Sin: return tau_ * (1.0 - std::cos(u));
        case TwistKind::PolyHyp: {
            double sum = coefficients_[0] * u;
            for (std::size_t k = 1; 2 * k - 1 < coefficients_.size(); ++k) {
                sum += coefficients_[2 * k - 1] / k * std::sinh(k * u);
                if (2 * k < coefficients_.size())
                    sum += coefficients_[2 * k] / k * (std::cosh(k * u) - 1.0);
            }
            return tau_ * sum;
        }
        case TwistKind::PolyTrig: {
            double sum = coefficients_[0] * u;
            for (std::size_t k = 1; 2 * k - 1 < coefficients_.size(); ++k) {
                sum += coefficients_[2 * k - 1] / k * std::sin(k * u);
                if (2 * k < coefficients_.size())
                    sum += coefficients_[2 * k] / k * (1.0 - std::cos(k * u));
            }
            return tau_ * sum;
        }
    }
    return t;
}

}  // namespace twistnc
