// Scenario-driven front end: declarative system configs in, algebra reports
// and trajectory/WEP data out.
//
// Exit codes: 0 success / all checks pass, 1 check failure, 2 config or
// usage error, 3 runtime (integration) error.

#include "twistnc/io.hpp"
#include "twistnc/report.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace twistnc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    bool exact = false;
    std::optional<std::string> mode;
    std::optional<unsigned> seed;
    std::optional<double> tol;
};

void add_common(CLI::App* cmd, CommonArgs& args)
{
    cmd->add_option("--config", args.config_path, "scenario file")->required();
    cmd->add_option("--out", args.out_dir, "output directory (created if missing)");
    cmd->add_flag("--exact", args.exact, "exact-arithmetic algebra mode");
    cmd->add_option("--mode", args.mode, "dynamics mode: paper | representation");
    cmd->add_option("--seed", args.seed, "seed for randomized property sweeps");
    cmd->add_option("--tol", args.tol, "tolerance override");
}

fs::path resolve_output(const CommonArgs& args, const std::string& relative)
{
    fs::path path = fs::path(args.out_dir) / relative;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    return path;
}

void write_file(const fs::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

DynamicsMode resolve_mode(const CommonArgs& args, const ScenarioConfig& config)
{
    if (args.mode) {
        if (*args.mode == "paper") return DynamicsMode::PaperBracket;
        if (*args.mode == "representation") return DynamicsMode::RepresentationConsistent;
        throw ConfigError("--mode must be 'paper' or 'representation'");
    }
    return config.run_or_default().mode;
}

void reject_exact(const CommonArgs& args, const char* command)
{
    if (args.exact)
        throw ConfigError(std::string("--exact applies to the algebra commands, not ") + command);
}

int cmd_algebra_check(const CommonArgs& args)
{
    const ScenarioConfig config = parse_scenario_file(args.config_path);
    AlgebraCheckOptions options;
    options.exact = args.exact;
    if (args.tol) options.tol = *args.tol;
    options.seed = args.seed;
    const AlgebraCheckResult result = run_algebra_check(config, options);
    std::cout << result.report;
    if (!config.outputs.report.empty())
        write_file(resolve_output(args, config.outputs.report), result.report);
    return result.all_passed ? kExitOk : kExitCheckFailure;
}

int cmd_com_split(const CommonArgs& args)
{
    const ScenarioConfig config = parse_scenario_file(args.config_path);
    const std::string report = com_split_report(config, args.exact, args.tol.value_or(1e-12));
    std::cout << report;
    if (!config.outputs.report.empty())
        write_file(resolve_output(args, config.outputs.report), report);
    return kExitOk;
}

IntegrateOptions integrate_options(const ScenarioConfig& config, DynamicsMode mode)
{
    const RunConfig run = config.run_or_default();
    IntegrateOptions options;
    options.method = run.method;
    options.dt = run.dt.value;
    options.tolerance = run.tolerance.value;
    options.mode = mode;
    options.system_hash = fnv1a_hash(render_scenario(config));
    return options;
}

int cmd_simulate(const CommonArgs& args)
{
    reject_exact(args, "simulate");
    const ScenarioConfig config = parse_scenario_file(args.config_path);
    if (!config.run) throw ConfigError("simulate needs a [run] section");
    const RunConfig run = *config.run;
    const DynamicsMode mode = resolve_mode(args, config);

    ParticleSystemD system = config.build_system();
    Hamiltonian hamiltonian(system,
                            config.potential ? std::optional(config.potential->build()) : std::nullopt,
                            config.pairwise ? std::optional(config.pairwise->build()) : std::nullopt);
    const Trajectory trajectory = integrate(hamiltonian, config.initial_state(), run.t0.value,
                                            run.t1.value, integrate_options(config, mode));

    const std::string traj_name =
        config.outputs.trajectory.empty() ? "trajectory.csv" : config.outputs.trajectory;
    const fs::path traj_path = resolve_output(args, traj_name);
    {
        std::ofstream out(traj_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + traj_path.string());
        write_trajectory_csv(out, trajectory, run.every);
    }
    std::size_t written = trajectory.samples() == 0 ? 0
                                                    : (trajectory.samples() + run.every - 1) / run.every;
    if (trajectory.samples() > 1 && (trajectory.samples() - 1) % run.every != 0) ++written;

    const std::string manifest_name =
        config.outputs.manifest.empty() ? "manifest.json" : config.outputs.manifest;
    write_file(resolve_output(args, manifest_name),
               trajectory_manifest(config, "simulate", trajectory, run.every, written));

    if (!config.outputs.plot.empty())
        write_file(resolve_output(args, config.outputs.plot),
                   gnuplot_script(traj_name, system.size()));

    std::cout << "simulate: " << trajectory.samples() << " samples, " << trajectory.meta.stats.steps
              << " steps -> " << traj_path.string() << '\n';
    return kExitOk;
}

int cmd_wep(const CommonArgs& args)
{
    reject_exact(args, "wep");
    const ScenarioConfig config = parse_scenario_file(args.config_path);
    if (!config.wep) throw ConfigError("wep needs a [wep] section");
    if (config.wep->masses.size() < 2) throw ConfigError("wep needs at least 2 masses");
    if (!config.run) throw ConfigError("wep needs a [run] section");
    if (!config.potential) throw ConfigError("wep needs a [potential] section");

    const RunConfig run = *config.run;
    WepOptions options;
    options.dt = run.dt.value;
    options.mode = resolve_mode(args, config);

    std::vector<double> masses;
    for (const Num& m : config.wep->masses) masses.push_back(m.value);
    const Vec3 x0{config.wep->x0[0].value, config.wep->x0[1].value, config.wep->x0[2].value};
    const Vec3 v0{config.wep->v0[0].value, config.wep->v0[1].value, config.wep->v0[2].value};

    const auto trajectories = wep_sweep(config.potential->build(), masses, config.wep_policy(),
                                        config.twist.build(), run.t1.value, x0, v0, options);

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < masses.size(); ++i)
        for (std::size_t j = i + 1; j < masses.size(); ++j) pairs.emplace_back(i, j);

    const std::size_t samples = trajectories.front().samples();
    std::vector<std::vector<double>> deviations(pairs.size(), std::vector<double>(samples, 0.0));
    double worst = 0.0;
    std::cout << "pairwise max deviations:\n";
    for (std::size_t c = 0; c < pairs.size(); ++c) {
        const auto& [i, j] = pairs[c];
        double pair_max = 0.0;
        for (std::size_t k = 0; k < samples; ++k) {
            const double d =
                norm(trajectories[i].deformed_x[k][0] - trajectories[j].deformed_x[k][0]);
            deviations[c][k] = d;
            pair_max = std::max(pair_max, d);
        }
        worst = std::max(worst, pair_max);
        std::cout << "  m = " << format_double(masses[i]) << " vs m = " << format_double(masses[j])
                  << ": " << format_double(pair_max) << '\n';
    }

    const double tol = args.tol.value_or(config.wep->tol.value);
    const bool holds = worst <= tol;
    std::cout << (holds ? "WEP holds within tol " + format_double(tol)
                        : "WEP violated, max dev = " + format_double(worst))
              << '\n';

    if (!config.outputs.deviations.empty()) {
        const fs::path path = resolve_output(args, config.outputs.deviations);
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        write_deviations_csv(out, trajectories.front().times, masses, pairs, deviations);
    }
    return holds ? kExitOk : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"classical mechanics on twist-deformed space-time"};
    app.require_subcommand(1);

    CommonArgs args;
    CLI::App* algebra = app.add_subcommand("algebra-check", "verify all bracket relations");
    CLI::App* simulate = app.add_subcommand("simulate", "integrate the deformed equations of motion");
    CLI::App* wep = app.add_subcommand("wep", "compare trajectories across masses");
    CLI::App* com = app.add_subcommand("com-split", "COM representation over (x~, dP, P~)");
    for (CLI::App* cmd : {algebra, simulate, wep, com}) add_common(cmd, args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (app.got_subcommand(algebra)) return cmd_algebra_check(args);
        if (app.got_subcommand(simulate)) return cmd_simulate(args);
        if (app.got_subcommand(wep)) return cmd_wep(args);
        if (app.got_subcommand(com)) return cmd_com_split(args);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IntegrationError& e) {
        std::cerr << "integration error: " << e.what() << '\n';
        return kExitRuntime;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitConfig;
}
