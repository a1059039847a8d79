#pragma once

#include "twistnc/scalar.hpp"

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace twistnc {

template <class S>
using Mat3 = std::array<std::array<S, 3>, 3>;

template <class S>
Mat3<S> zero_mat3()
{
    Mat3<S> m;
    for (auto& row : m)
        for (auto& v : row) v = S(0);
    return m;
}

template <class S>
S max_abs(const Mat3<S>& m)
{
    S best(0);
    for (const auto& row : m)
        for (const auto& v : row)
            if (abs_value(v) > best) best = abs_value(v);
    return best;
}

/// Antisymmetric noncommutativity parameters. Only the independent entries
/// (1,2), (1,3), (2,3) are stored; theta_ij = -theta_ji holds by construction.
template <class S>
struct ThetaMatrix {
    S e12{}, e13{}, e23{};

    ThetaMatrix() = default;
    ThetaMatrix(S t12, S t13, S t23) : e12(std::move(t12)), e13(std::move(t13)), e23(std::move(t23)) {}

    // 0-based axes
    S entry(int i, int j) const
    {
        if (i == j) return S(0);
        if (i > j) return -entry(j, i);
        if (i == 0) return j == 1 ? e12 : e13;
        return e23;  // i == 1, j == 2
    }

    Mat3<S> full() const
    {
        Mat3<S> m = zero_mat3<S>();
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m[i][j] = entry(i, j);
        return m;
    }

    ThetaMatrix scaled(const S& s) const { return {e12 * s, e13 * s, e23 * s}; }

    ThetaMatrix operator+(const ThetaMatrix& o) const { return {e12 + o.e12, e13 + o.e13, e23 + o.e23}; }
    ThetaMatrix operator-(const ThetaMatrix& o) const { return {e12 - o.e12, e13 - o.e13, e23 - o.e23}; }

    S max_abs_entry() const
    {
        S best = abs_value(e12);
        if (abs_value(e13) > best) best = abs_value(e13);
        if (abs_value(e23) > best) best = abs_value(e23);
        return best;
    }

    bool operator==(const ThetaMatrix&) const = default;
};

/// Either one theta matrix per particle, or the inverse-mass rule
/// theta^(a) = gamma / m_a with a shared gamma.
template <class S>
class ThetaPolicy {
public:
    enum class Kind { PerParticle, InverseMass };

    static ThetaPolicy per_particle(std::vector<ThetaMatrix<S>> matrices)
    {
        ThetaPolicy p;
        p.kind_ = Kind::PerParticle;
        p.matrices_ = std::move(matrices);
        return p;
    }

    static ThetaPolicy inverse_mass(ThetaMatrix<S> gamma)
    {
        ThetaPolicy p;
        p.kind_ = Kind::InverseMass;
        p.gamma_ = std::move(gamma);
        return p;
    }

    Kind kind() const { return kind_; }
    bool is_inverse_mass() const { return kind_ == Kind::InverseMass; }

    const ThetaMatrix<S>& gamma() const
    {
        if (kind_ != Kind::InverseMass) throw std::logic_error("theta policy has no gamma");
        return gamma_;
    }

    const std::vector<ThetaMatrix<S>>& matrices() const
    {
        if (kind_ != Kind::PerParticle) throw std::logic_error("theta policy has no per-particle matrices");
        return matrices_;
    }

    bool operator==(const ThetaPolicy&) const = default;

private:
    Kind kind_ = Kind::PerParticle;
    std::vector<ThetaMatrix<S>> matrices_;
    ThetaMatrix<S> gamma_;
};

}  // namespace twistnc
