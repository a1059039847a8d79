#include "twistnc/io.hpp"

#include <json.hpp>

#include <ostream>

namespace twistnc {

std::vector<std::string> trajectory_columns(std::size_t particles)
{
    std::vector<std::string> columns{"t"};
    const char* groups[] = {"X", "P", "x", "p"};
    for (const char* group : groups)
        for (std::size_t a = 1; a <= particles; ++a)
            for (int i = 1; i <= 3; ++i)
                columns.push_back(std::string(group) + std::to_string(i) + "_p" + std::to_string(a));
    return columns;
}

namespace {

std::vector<std::size_t> retained_samples(std::size_t total, int every)
{
    std::vector<std::size_t> rows;
    for (std::size_t k = 0; k < total; k += static_cast<std::size_t>(every)) rows.push_back(k);
    if (total > 0 && rows.back() != total - 1) rows.push_back(total - 1);
    return rows;
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory, int every)
{
    const std::size_t n = trajectory.states.empty() ? 0 : trajectory.states.front().size();
    const auto columns = trajectory_columns(n);
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
    out << '\n';
    for (std::size_t k : retained_samples(trajectory.samples(), every)) {
        out << format_double(trajectory.times[k]);
        for (std::size_t a = 0; a < n; ++a)
            for (int i = 0; i < 3; ++i) out << ',' << format_double(trajectory.deformed_x[k][a][i]);
        for (std::size_t a = 0; a < n; ++a)
            for (int i = 0; i < 3; ++i) out << ',' << format_double(trajectory.states[k].p[a][i]);
        for (std::size_t a = 0; a < n; ++a)
            for (int i = 0; i < 3; ++i) out << ',' << format_double(trajectory.states[k].x[a][i]);
        for (std::size_t a = 0; a < n; ++a)
            for (int i = 0; i < 3; ++i) out << ',' << format_double(trajectory.states[k].p[a][i]);
        out << '\n';
    }
}

std::string trajectory_manifest(const ScenarioConfig& config, const std::string& command,
                                const Trajectory& trajectory, int every, std::size_t samples_written)
{
    nlohmann::json manifest;
    const std::string rendered = render_scenario(config);
    char hash_hex[19];
    std::snprintf(hash_hex, sizeof(hash_hex), "0x%016llx",
                  static_cast<unsigned long long>(fnv1a_hash(rendered)));
    manifest["command"] = command;
    manifest["config"] = rendered;
    manifest["system_hash"] = hash_hex;
    manifest["mode"] = dynamics_mode_name(trajectory.meta.mode);
    manifest["integrator"] = integrator_kind_name(trajectory.meta.method);
    if (trajectory.meta.method == IntegratorKind::Rk4)
        manifest["dt"] = trajectory.meta.dt;
    else
        manifest["tolerance"] = trajectory.meta.tolerance;
    manifest["steps"] = trajectory.meta.stats.steps;
    manifest["rejected_steps"] = trajectory.meta.stats.rejected;
    manifest["samples"] = trajectory.samples();
    manifest["samples_written"] = samples_written;
    manifest["every"] = every;
    if (!trajectory.times.empty()) {
        manifest["t_first"] = trajectory.times.front();
        manifest["t_last"] = trajectory.times.back();
    }
    const std::size_t n = trajectory.states.empty() ? 0 : trajectory.states.front().size();
    manifest["columns"] = trajectory_columns(n);
    return manifest.dump(2) + "\n";
}

void write_deviations_csv(std::ostream& out, const std::vector<double>& times,
                          const std::vector<double>& masses,
                          const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                          const std::vector<std::vector<double>>& deviations)
{
    out << 't';
    for (const auto& [i, j] : pairs)
        out << ",dev_" << format_double(masses[i]) << '_' << format_double(masses[j]);
    out << '\n';
    for (std::size_t k = 0; k < times.size(); ++k) {
        out << format_double(times[k]);
        for (std::size_t c = 0; c < pairs.size(); ++c) out << ',' << format_double(deviations[c][k]);
        out << '\n';
    }
}

std::string gnuplot_script(const std::string& csv_path, std::size_t particles)
{
    std::string script;
    script += "set datafile separator ','\n";
    script += "set key autotitle columnhead\n";
    script += "set xlabel 't'\n";
    script += "plot";
    for (std::size_t a = 0; a < particles; ++a)
        for (int i = 0; i < 3; ++i) {
            const std::size_t column = 2 + 3 * a + i;  // X block starts at column 2
            script += (a == 0 && i == 0 ? " " : ", ");
            script += "'" + csv_path + "' using 1:" + std::to_string(column) + " with lines";
        }
    script += "\n";
    return script;
}

}  // namespace twistnc
