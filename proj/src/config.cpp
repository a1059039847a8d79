#include "twistnc/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace twistnc {

TwistFunction TwistConfig::build() const
{
    std::vector<double> coeffs;
    coeffs.reserve(coefficients.size());
    for (const Num& c : coefficients) coeffs.push_back(c.value);
    return TwistFunction(kind, tau.value, std::move(coeffs));
}

PotentialSpec ExternalPotentialConfig::build() const
{
    if (kind == PotentialKind::UniformField) return PotentialSpec::uniform_field(g.value, axis - 1);
    return PotentialSpec::central(profile, strength.value, r_floor.value);
}

PotentialSpec PairwiseConfig::build() const
{
    return PotentialSpec::pairwise(profile, strength.value, r_floor.value);
}

namespace {

ThetaMatrix<double> theta_from(const Num3& entries)
{
    return {entries[0].value, entries[1].value, entries[2].value};
}

ThetaMatrix<Rational> theta_from_exact(const Num3& entries)
{
    return {entries[0].exact(), entries[1].exact(), entries[2].exact()};
}

}  // namespace

ParticleSystem<double> ScenarioConfig::build_system() const
{
    if (particles.empty()) throw ConfigError("no [particle] sections");
    std::vector<double> masses;
    for (const auto& p : particles) masses.push_back(p.mass.value);
    if (gamma)
        return ParticleSystem<double>(std::move(masses),
                                      ThetaPolicy<double>::inverse_mass(theta_from(*gamma)),
                                      twist.build());
    std::vector<ThetaMatrix<double>> thetas;
    for (const auto& p : particles) thetas.push_back(theta_from(p.theta.value()));
    return ParticleSystem<double>(std::move(masses), ThetaPolicy<double>::per_particle(std::move(thetas)),
                                  twist.build());
}

ParticleSystem<Rational> ScenarioConfig::build_system_exact() const
{
    if (particles.empty()) throw ConfigError("no [particle] sections");
    std::vector<Rational> masses;
    for (const auto& p : particles) masses.push_back(p.mass.exact());
    if (gamma)
        return ParticleSystem<Rational>(std::move(masses),
                                        ThetaPolicy<Rational>::inverse_mass(theta_from_exact(*gamma)),
                                        twist.build());
    std::vector<ThetaMatrix<Rational>> thetas;
    for (const auto& p : particles) thetas.push_back(theta_from_exact(p.theta.value()));
    return ParticleSystem<Rational>(std::move(masses),
                                    ThetaPolicy<Rational>::per_particle(std::move(thetas)),
                                    twist.build());
}

PhaseState ScenarioConfig::initial_state() const
{
    PhaseState state;
    state.t = run_or_default().t0.value;
    for (const auto& p : particles) {
        state.x.push_back({p.x[0].value, p.x[1].value, p.x[2].value});
        state.p.push_back({p.p[0].value, p.p[1].value, p.p[2].value});
    }
    return state;
}

ThetaPolicy<double> ScenarioConfig::wep_policy() const
{
    if (gamma) return ThetaPolicy<double>::inverse_mass(theta_from(*gamma));
    if (wep && wep->theta) return ThetaPolicy<double>::per_particle({theta_from(*wep->theta)});
    throw ConfigError("wep needs either [gamma] or a shared theta in [wep]");
}

namespace {

struct KeyValue {
    std::string key, value;
    int line = 0;
};

struct RawSection {
    std::string name;
    int line = 0;
    std::vector<KeyValue> entries;
};

std::string trim(const std::string& s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<RawSection> tokenize(const std::string& text)
{
    std::vector<RawSection> sections;
    std::istringstream stream(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("malformed section header", line_no);
            sections.push_back({trim(line.substr(1, line.size() - 2)), line_no, {}});
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no);
        if (sections.empty()) throw ConfigError("entry outside any section", line_no);
        sections.back().entries.push_back(
            {trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no});
    }
    return sections;
}

std::vector<std::string> split_ws(const std::string& s)
{
    std::vector<std::string> out;
    std::istringstream stream(s);
    std::string tok;
    while (stream >> tok) out.push_back(tok);
    return out;
}

Num parse_num(const KeyValue& kv)
{
    try {
        Num n = Num::parse(kv.value);
        if (!std::isfinite(n.value)) throw std::invalid_argument("non-finite value");
        return n;
    } catch (const std::exception& e) {
        throw ConfigError(kv.key + ": " + e.what(), kv.line);
    }
}

std::vector<Num> parse_num_list(const KeyValue& kv)
{
    std::vector<Num> out;
    for (const auto& tok : split_ws(kv.value)) out.push_back(parse_num({kv.key, tok, kv.line}));
    return out;
}

Num3 parse_num3(const KeyValue& kv)
{
    const auto list = parse_num_list(kv);
    if (list.size() != 3) throw ConfigError(kv.key + ": expected 3 numbers", kv.line);
    return {list[0], list[1], list[2]};
}

int parse_int(const KeyValue& kv)
{
    try {
        std::size_t pos = 0;
        const int v = std::stoi(kv.value, &pos);
        if (pos != kv.value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(kv.key + ": not an integer: '" + kv.value + "'", kv.line);
    }
}

Num parse_positive(const KeyValue& kv)
{
    const Num n = parse_num(kv);
    if (!(n.value > 0.0)) throw ConfigError(kv.key + " must be positive", kv.line);
    return n;
}

// key dispatch with duplicate/unknown detection
class SectionReader {
public:
    explicit SectionReader(const RawSection& section) : section_(section)
    {
        for (const auto& kv : section.entries) {
            if (seen_.count(kv.key))
                throw ConfigError("duplicate key '" + kv.key + "' in [" + section.name + "]", kv.line);
            seen_.emplace(kv.key, kv);
        }
    }

    const KeyValue* find(const std::string& key)
    {
        auto it = seen_.find(key);
        if (it == seen_.end()) return nullptr;
        used_.insert(key);
        return &it->second;
    }

    const KeyValue& require(const std::string& key)
    {
        const KeyValue* kv = find(key);
        if (!kv)
            throw ConfigError("missing key '" + key + "' in [" + section_.name + "]", section_.line);
        return *kv;
    }

    void finish() const
    {
        for (const auto& kv : section_.entries)
            if (!used_.count(kv.key))
                throw ConfigError("unknown key '" + kv.key + "' in [" + section_.name + "]", kv.line);
    }

private:
    const RawSection& section_;
    std::map<std::string, KeyValue> seen_;
    std::set<std::string> used_;
};

}  // namespace

ScenarioConfig parse_scenario(const std::string& text)
{
    ScenarioConfig config;
    int gamma_line = 0;
    std::vector<int> particle_lines;
    std::set<std::string> singletons;

    for (const auto& section : tokenize(text)) {
        if (section.name != "particle") {
            if (singletons.count(section.name))
                throw ConfigError("duplicate section [" + section.name + "]", section.line);
            singletons.insert(section.name);
        }

        SectionReader reader(section);
        if (section.name == "particle") {
            ParticleConfig particle;
            particle.mass = parse_positive(reader.require("mass"));
            if (const KeyValue* kv = reader.find("theta")) particle.theta = parse_num3(*kv);
            if (const KeyValue* kv = reader.find("x")) particle.x = parse_num3(*kv);
            if (const KeyValue* kv = reader.find("p")) particle.p = parse_num3(*kv);
            config.particles.push_back(std::move(particle));
            particle_lines.push_back(section.line);
        } else if (section.name == "gamma") {
            config.gamma = parse_num3(reader.require("entries"));
            gamma_line = section.line;
        } else if (section.name == "twist") {
            TwistConfig twist;
            if (const KeyValue* kv = reader.find("kind")) {
                try {
                    twist.kind = twist_kind_from_name(kv->value);
                } catch (const std::exception& e) {
                    throw ConfigError(e.what(), kv->line);
                }
            }
            if (const KeyValue* kv = reader.find("tau")) twist.tau = parse_positive(*kv);
            if (const KeyValue* kv = reader.find("coefficients"))
                twist.coefficients = parse_num_list(*kv);
            try {
                twist.build();
            } catch (const std::exception& e) {
                throw ConfigError(std::string("twist: ") + e.what(), section.line);
            }
            config.twist = std::move(twist);
        } else if (section.name == "potential") {
            ExternalPotentialConfig pot;
            const KeyValue& kind = reader.require("kind");
            if (kind.value == "uniform-field") {
                pot.kind = PotentialKind::UniformField;
                pot.g = parse_num(reader.require("g"));
                pot.axis = parse_int(reader.require("axis"));
                if (pot.axis < 1 || pot.axis > 3)
                    throw ConfigError("axis must be 1, 2 or 3", section.line);
            } else if (kind.value == "central") {
                pot.kind = PotentialKind::Central;
                const KeyValue& profile = reader.require("profile");
                try {
                    pot.profile = radial_profile_from_name(profile.value);
                } catch (const std::exception& e) {
                    throw ConfigError(e.what(), profile.line);
                }
                pot.strength = parse_num(reader.require("strength"));
                if (const KeyValue* kv = reader.find("r_floor")) pot.r_floor = parse_positive(*kv);
            } else {
                throw ConfigError("potential kind must be 'uniform-field' or 'central'", kind.line);
            }
            config.potential = std::move(pot);
        } else if (section.name == "pairwise") {
            PairwiseConfig pair;
            const KeyValue& profile = reader.require("profile");
            try {
                pair.profile = radial_profile_from_name(profile.value);
            } catch (const std::exception& e) {
                throw ConfigError(e.what(), profile.line);
            }
            pair.strength = parse_num(reader.require("strength"));
            if (const KeyValue* kv = reader.find("r_floor")) pair.r_floor = parse_positive(*kv);
            config.pairwise = std::move(pair);
        } else if (section.name == "run") {
            RunConfig run;
            if (const KeyValue* kv = reader.find("t0")) run.t0 = parse_num(*kv);
            if (const KeyValue* kv = reader.find("t1")) run.t1 = parse_num(*kv);
            if (const KeyValue* kv = reader.find("dt")) run.dt = parse_positive(*kv);
            if (const KeyValue* kv = reader.find("tolerance")) run.tolerance = parse_positive(*kv);
            if (const KeyValue* kv = reader.find("method")) {
                if (kv->value == "rk4")
                    run.method = IntegratorKind::Rk4;
                else if (kv->value == "rk45")
                    run.method = IntegratorKind::Rk45Adaptive;
                else
                    throw ConfigError("method must be 'rk4' or 'rk45'", kv->line);
            }
            if (const KeyValue* kv = reader.find("mode")) {
                if (kv->value == "paper")
                    run.mode = DynamicsMode::PaperBracket;
                else if (kv->value == "representation")
                    run.mode = DynamicsMode::RepresentationConsistent;
                else
                    throw ConfigError("mode must be 'paper' or 'representation'", kv->line);
            }
            if (const KeyValue* kv = reader.find("every")) {
                run.every = parse_int(*kv);
                if (run.every < 1) throw ConfigError("every must be >= 1", kv->line);
            }
            if (!(run.t1.value > run.t0.value))
                throw ConfigError("run: t1 must exceed t0", section.line);
            config.run = std::move(run);
        } else if (section.name == "wep") {
            WepConfig wep;
            wep.masses = parse_num_list(reader.require("masses"));
            if (wep.masses.empty()) throw ConfigError("wep: empty mass list", section.line);
            for (const Num& m : wep.masses)
                if (!(m.value > 0.0)) throw ConfigError("wep: masses must be positive", section.line);
            if (const KeyValue* kv = reader.find("theta")) wep.theta = parse_num3(*kv);
            if (const KeyValue* kv = reader.find("x0")) wep.x0 = parse_num3(*kv);
            if (const KeyValue* kv = reader.find("v0")) wep.v0 = parse_num3(*kv);
            if (const KeyValue* kv = reader.find("tol")) wep.tol = parse_positive(*kv);
            config.wep = std::move(wep);
        } else if (section.name == "outputs") {
            if (const KeyValue* kv = reader.find("trajectory")) config.outputs.trajectory = kv->value;
            if (const KeyValue* kv = reader.find("manifest")) config.outputs.manifest = kv->value;
            if (const KeyValue* kv = reader.find("report")) config.outputs.report = kv->value;
            if (const KeyValue* kv = reader.find("deviations")) config.outputs.deviations = kv->value;
            if (const KeyValue* kv = reader.find("plot")) config.outputs.plot = kv->value;
        } else {
            throw ConfigError("unknown section [" + section.name + "]", section.line);
        }
        reader.finish();
    }

    // exactly one theta source
    if (config.gamma) {
        for (const auto& particle : config.particles)
            if (particle.theta)
                throw ConfigError("both [gamma] and per-particle theta present", gamma_line);
        if (config.wep && config.wep->theta)
            throw ConfigError("both [gamma] and a shared wep theta present", gamma_line);
    } else {
        for (std::size_t k = 0; k < config.particles.size(); ++k)
            if (!config.particles[k].theta)
                throw ConfigError("particle " + std::to_string(k + 1) +
                                      " has no theta and no [gamma] is present",
                                  particle_lines[k]);
    }
    return config;
}

ScenarioConfig parse_scenario_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

namespace {

void render_num3(std::ostream& out, const char* key, const Num3& v)
{
    out << key << " = " << v[0].text << ' ' << v[1].text << ' ' << v[2].text << '\n';
}

}  // namespace

std::string render_scenario(const ScenarioConfig& config)
{
    std::ostringstream out;
    for (const auto& particle : config.particles) {
        out << "[particle]\n";
        out << "mass = " << particle.mass.text << '\n';
        if (particle.theta) render_num3(out, "theta", *particle.theta);
        render_num3(out, "x", particle.x);
        render_num3(out, "p", particle.p);
        out << '\n';
    }
    if (config.gamma) {
        out << "[gamma]\n";
        render_num3(out, "entries", *config.gamma);
        out << '\n';
    }
    out << "[twist]\n";
    out << "kind = " << twist_kind_name(config.twist.kind) << '\n';
    out << "tau = " << config.twist.tau.text << '\n';
    if (!config.twist.coefficients.empty()) {
        out << "coefficients =";
        for (const Num& c : config.twist.coefficients) out << ' ' << c.text;
        out << '\n';
    }
    out << '\n';
    if (config.potential) {
        out << "[potential]\n";
        if (config.potential->kind == PotentialKind::UniformField) {
            out << "kind = uniform-field\n";
            out << "g = " << config.potential->g.text << '\n';
            out << "axis = " << config.potential->axis << '\n';
        } else {
            out << "kind = central\n";
            out << "profile = " << radial_profile_name(config.potential->profile) << '\n';
            out << "strength = " << config.potential->strength.text << '\n';
            out << "r_floor = " << config.potential->r_floor.text << '\n';
        }
        out << '\n';
    }
    if (config.pairwise) {
        out << "[pairwise]\n";
        out << "profile = " << radial_profile_name(config.pairwise->profile) << '\n';
        out << "strength = " << config.pairwise->strength.text << '\n';
        out << "r_floor = " << config.pairwise->r_floor.text << '\n';
        out << '\n';
    }
    if (config.run) {
        out << "[run]\n";
        out << "t0 = " << config.run->t0.text << '\n';
        out << "t1 = " << config.run->t1.text << '\n';
        out << "dt = " << config.run->dt.text << '\n';
        out << "tolerance = " << config.run->tolerance.text << '\n';
        out << "method = " << integrator_kind_name(config.run->method) << '\n';
        out << "mode = " << dynamics_mode_name(config.run->mode) << '\n';
        out << "every = " << config.run->every << '\n';
        out << '\n';
    }
    if (config.wep) {
        out << "[wep]\n";
        out << "masses =";
        for (const Num& m : config.wep->masses) out << ' ' << m.text;
        out << '\n';
        if (config.wep->theta) render_num3(out, "theta", *config.wep->theta);
        render_num3(out, "x0", config.wep->x0);
        render_num3(out, "v0", config.wep->v0);
        out << "tol = " << config.wep->tol.text << '\n';
        out << '\n';
    }
    const auto& paths = config.outputs;
    if (!paths.trajectory.empty() || !paths.manifest.empty() || !paths.report.empty() ||
        !paths.deviations.empty() || !paths.plot.empty()) {
        out << "[outputs]\n";
        if (!paths.trajectory.empty()) out << "trajectory = " << paths.trajectory << '\n';
        if (!paths.manifest.empty()) out << "manifest = " << paths.manifest << '\n';
        if (!paths.report.empty()) out << "report = " << paths.report << '\n';
        if (!paths.deviations.empty()) out << "deviations = " << paths.deviations << '\n';
        if (!paths.plot.empty()) out << "plot = " << paths.plot << '\n';
        out << '\n';
    }
    return out.str();
}

std::uint64_t fnv1a_hash(std::string_view text)
{
    std::uint64_t hash = 14695981039346656037ull;
    for (unsigned char ch : text) {
        hash ^= ch;
        hash *= 1099511628211ull;
    }
    return hash;
}

}  // namespace twistnc
