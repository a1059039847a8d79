#pragma once

#include "twistnc/dynamics.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace twistnc {

struct ConfigError : std::runtime_error {
    ConfigError(const std::string& message, int line_number = 0)
        : std::runtime_error(line_number > 0 ? "line " + std::to_string(line_number) + ": " + message
                                             : message),
          line(line_number)
    {
    }
    int line;
};

/// A numeric literal as written in the scenario file. The text is the source
/// of truth: it round-trips through render/parse unchanged and carries the
/// exact rational value for exact-arithmetic mode.
struct Num {
    std::string text = "0";
    double value = 0.0;

    static Num of(double v) { return Num{format_double(v), v}; }
    static Num parse(const std::string& text) { return Num{text, double_from_string(text)}; }
    Rational exact() const { return rational_from_string(text); }

    bool operator==(const Num& other) const { return text == other.text; }
};

using Num3 = std::array<Num, 3>;

struct ParticleConfig {
    Num mass = Num::of(1.0);
    std::optional<Num3> theta;  // entries (12, 13, 23); absent when [gamma] is used
    Num3 x{Num{}, Num{}, Num{}};
    Num3 p{Num{}, Num{}, Num{}};

    bool operator==(const ParticleConfig&) const = default;
};

struct TwistConfig {
    TwistKind kind = TwistKind::ConstantOne;
    Num tau = Num::of(1.0);
    std::vector<Num> coefficients;

    TwistFunction build() const;

    bool operator==(const TwistConfig&) const = default;
};

struct ExternalPotentialConfig {
    PotentialKind kind = PotentialKind::UniformField;  // UniformField or Central
    Num g = Num::of(1.0);
    int axis = 1;  // 1-based in the file
    RadialProfile profile = RadialProfile::Harmonic;
    Num strength = Num::of(1.0);
    Num r_floor = Num::parse("1e-9");

    PotentialSpec build() const;

    bool operator==(const ExternalPotentialConfig&) const = default;
};

struct PairwiseConfig {
    RadialProfile profile = RadialProfile::Harmonic;
    Num strength = Num::of(1.0);
    Num r_floor = Num::parse("1e-9");

    PotentialSpec build() const;

    bool operator==(const PairwiseConfig&) const = default;
};

struct RunConfig {
    Num t0 = Num{};
    Num t1 = Num::of(1.0);
    Num dt = Num::parse("1e-3");
    Num tolerance = Num::parse("1e-9");  // rk45
    IntegratorKind method = IntegratorKind::Rk4;
    DynamicsMode mode = DynamicsMode::PaperBracket;
    int every = 1;  // output stride

    bool operator==(const RunConfig&) const = default;
};

struct WepConfig {
    std::vector<Num> masses;
    std::optional<Num3> theta;  // shared theta; alternative to [gamma]
    Num3 x0{Num{}, Num{}, Num{}};
    Num3 v0{Num{}, Num{}, Num{}};
    Num tol = Num::parse("1e-8");

    bool operator==(const WepConfig&) const = default;
};

struct OutputsConfig {
    std::string trajectory;
    std::string manifest;
    std::string report;
    std::string deviations;
    std::string plot;

    bool operator==(const OutputsConfig&) const = default;
};

struct ScenarioConfig {
    std::vector<ParticleConfig> particles;
    std::optional<Num3> gamma;
    TwistConfig twist;
    std::optional<ExternalPotentialConfig> potential;
    std::optional<PairwiseConfig> pairwise;
    std::optional<RunConfig> run;
    std::optional<WepConfig> wep;
    OutputsConfig outputs;

    bool operator==(const ScenarioConfig&) const = default;

    /// Particle system over the requested scalar; float mode reads the
    /// parsed doubles, exact mode the literal rationals.
    ParticleSystem<double> build_system() const;
    ParticleSystem<Rational> build_system_exact() const;

    PhaseState initial_state() const;
    RunConfig run_or_default() const { return run.value_or(RunConfig{}); }

    /// Theta policy for the WEP sweep (shared theta or gamma).
    ThetaPolicy<double> wep_policy() const;
};

ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig parse_scenario_file(const std::string& path);
std::string render_scenario(const ScenarioConfig& config);

std::uint64_t fnv1a_hash(std::string_view text);

}  // namespace twistnc
