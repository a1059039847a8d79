// End-to-end CLI contract: exit codes, golden outputs, determinism. Spawns
// the real binary (paths provided by CMake).

#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace fs = std::filesystem;

namespace {

const fs::path kCli = TWISTNC_CLI_PATH;
const fs::path kSource = TWISTNC_SOURCE_DIR;

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(static_cast<bool>(in), "missing file: ", path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

fs::path fresh_dir(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "twistnc_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

RunResult run_cli(const std::string& args, const fs::path& workdir)
{
    const fs::path out_file = workdir / "_stdout.txt";
    const fs::path err_file = workdir / "_stderr.txt";
    const std::string command = "'" + kCli.string() + "' " + args + " > '" + out_file.string() +
                                "' 2> '" + err_file.string() + "'";
    const int status = std::system(command.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out_file);
    result.err = slurp(err_file);
    return result;
}

std::string config_arg(const std::string& name)
{
    return "--config '" + (kSource / "configs" / name).string() + "'";
}

fs::path write_config(const fs::path& dir, const std::string& content,
                      const std::string& name = "scenario.cfg")
{
    const fs::path path = dir / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

void check_against_golden(const std::string& actual, const std::string& golden_name)
{
    const fs::path golden = kSource / "tests" / "golden" / golden_name;
    REQUIRE_MESSAGE(fs::exists(golden), "golden file not generated yet: ", golden.string());
    CHECK_MESSAGE(actual == slurp(golden), "output differs from golden ", golden_name);
}

}  // namespace

TEST_CASE("algebra-check passes on every shipped config, float and exact")
{
    for (const char* name : {"uniform_fall.cfg", "inverse_mass_body.cfg", "two_particle_spring.cfg"}) {
        const auto dir = fresh_dir(std::string("algebra_") + name);
        const auto plain = run_cli("algebra-check " + config_arg(name) + " --out '" + dir.string() + "'",
                                   dir);
        CHECK_MESSAGE(plain.exit_code == 0, name, ": ", plain.err);
        CHECK(plain.out.find("RESULT: PASS") != std::string::npos);
        const auto exact = run_cli("algebra-check --exact " + config_arg(name) + " --out '" +
                                       dir.string() + "'",
                                   dir);
        CHECK(exact.exit_code == 0);
        CHECK(exact.out.find("arithmetic: exact") != std::string::npos);
    }
}

TEST_CASE("golden: algebra-check reports")
{
    for (const auto& [config, golden] :
         {std::pair{"uniform_fall.cfg", "uniform_fall_report.txt"},
          std::pair{"inverse_mass_body.cfg", "inverse_mass_body_report.txt"},
          std::pair{"two_particle_spring.cfg", "two_particle_spring_report.txt"}}) {
        const auto dir = fresh_dir(std::string("golden_report_") + config);
        const auto res =
            run_cli("algebra-check " + config_arg(config) + " --out '" + dir.string() + "'", dir);
        REQUIRE(res.exit_code == 0);
        check_against_golden(res.out, golden);
    }
}

TEST_CASE("golden: simulate data and manifests")
{
    for (const auto& [config, stem] : {std::pair{"uniform_fall.cfg", "uniform_fall"},
                                       std::pair{"inverse_mass_body.cfg", "inverse_mass_body"},
                                       std::pair{"two_particle_spring.cfg", "two_particle_spring"}}) {
        const auto dir = fresh_dir(std::string("golden_sim_") + config);
        const auto res =
            run_cli("simulate " + config_arg(config) + " --out '" + dir.string() + "'", dir);
        REQUIRE_MESSAGE(res.exit_code == 0, res.err);
        check_against_golden(slurp(dir / (std::string(stem) + ".csv")),
                             std::string(stem) + ".csv");
        check_against_golden(slurp(dir / (std::string(stem) + "_manifest.json")),
                             std::string(stem) + "_manifest.json");
    }
}

TEST_CASE("simulate emits the closed-form column endpoints")
{
    const auto dir = fresh_dir("closed_form");
    const auto res = run_cli("simulate " + config_arg("uniform_fall.cfg") + " --out '" +
                                 dir.string() + "'",
                             dir);
    REQUIRE(res.exit_code == 0);
    const std::string csv = slurp(dir / "uniform_fall.csv");
    // header + data; last row starts with t = 2
    const auto last_line_start = csv.rfind("\n2,");
    REQUIRE(last_line_start != std::string::npos);
    std::istringstream row(csv.substr(last_line_start + 1));
    std::string cell;
    std::vector<double> cells;
    while (std::getline(row, cell, ',')) cells.push_back(std::stod(cell));
    // columns: t, X1, X2, X3, P1..P3, x1..x3, p1..p3
    CHECK(cells[0] == 2.0);
    CHECK(std::fabs(cells[1] - (-2.0)) <= 1e-10);  // X1 = -g t^2 / 2
    CHECK(std::fabs(cells[2] - (-0.2)) <= 1e-9);   // X2 = m theta21 g t
}

TEST_CASE("reruns are byte-identical")
{
    const auto dir1 = fresh_dir("rerun1");
    const auto dir2 = fresh_dir("rerun2");
    for (const auto* dir : {&dir1, &dir2})
        REQUIRE(run_cli("simulate " + config_arg("two_particle_spring.cfg") + " --out '" +
                            dir->string() + "'",
                        *dir)
                    .exit_code == 0);
    CHECK(slurp(dir1 / "two_particle_spring.csv") == slurp(dir2 / "two_particle_spring.csv"));
    CHECK(slurp(dir1 / "two_particle_spring_manifest.json") ==
          slurp(dir2 / "two_particle_spring_manifest.json"));
}

TEST_CASE("exit codes: config and usage errors")
{
    const auto dir = fresh_dir("exit_codes");

    SUBCASE("malformed config: theta and gamma both present")
    {
        const auto path = write_config(
            dir, "[particle]\nmass = 1\ntheta = 0.1 0 0\n[gamma]\nentries = 0.1 0 0\n");
        const auto res = run_cli("algebra-check --config '" + path.string() + "'", dir);
        CHECK(res.exit_code == 2);
        CHECK(res.err.find("config error") != std::string::npos);
        CHECK(res.out.empty());  // diagnostics on stderr, not stdout
    }
    SUBCASE("missing config file")
    {
        CHECK(run_cli("algebra-check --config /nonexistent.cfg", dir).exit_code == 2);
    }
    SUBCASE("single wep mass is a usage error")
    {
        const auto path = write_config(dir,
                                       "[particle]\nmass = 1\ntheta = 0.1 0 0\n[wep]\nmasses = "
                                       "1\ntheta = 0.1 0 0\n[run]\nt1 = 1\n[potential]\nkind = "
                                       "uniform-field\ng = 1\naxis = 1\n");
        const auto res = run_cli("wep --config '" + path.string() + "'", dir);
        CHECK(res.exit_code == 2);
        CHECK(res.err.find("at least 2 masses") != std::string::npos);
    }
    SUBCASE("com-split needs two particles")
    {
        const auto path = write_config(dir, "[particle]\nmass = 1\ntheta = 0.1 0 0\n");
        CHECK(run_cli("com-split --config '" + path.string() + "'", dir).exit_code == 2);
    }
    SUBCASE("exact mode is rejected for dynamics commands")
    {
        const auto res =
            run_cli("simulate --exact " + config_arg("uniform_fall.cfg") + " --out '" +
                        dir.string() + "'",
                    dir);
        CHECK(res.exit_code == 2);
    }
    SUBCASE("unknown flag")
    {
        CHECK(run_cli("simulate --bogus 1", dir).exit_code == 2);
    }
}

TEST_CASE("exit code 1: wep verdict violated")
{
    const auto dir = fresh_dir("wep_violated");
    const auto res =
        run_cli("wep " + config_arg("uniform_fall.cfg") + " --out '" + dir.string() + "'", dir);
    CHECK(res.exit_code == 1);
    CHECK(res.out.find("WEP violated") != std::string::npos);
    CHECK(res.out.find("0.2") != std::string::npos);
    CHECK(fs::exists(dir / "uniform_fall_dev.csv"));
}

TEST_CASE("exit code 0: wep holds under the inverse-mass policy")
{
    const auto dir = fresh_dir("wep_holds");
    const auto path = write_config(dir,
                                   "[gamma]\nentries = 0.1 0 0\n[wep]\nmasses = 1 2 5\n[run]\nt1 = "
                                   "2\ndt = 1e-2\n[potential]\nkind = uniform-field\ng = 1\naxis = "
                                   "1\n");
    const auto res = run_cli("wep --config '" + path.string() + "'", dir);
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("WEP holds within tol") != std::string::npos);
}

TEST_CASE("report contents match the worked cases")
{
    const auto dir = fresh_dir("report_contents");

    SUBCASE("four identical particles with theta12 = 0.2 report effective theta 0.05")
    {
        std::string text;
        for (int k = 0; k < 4; ++k) text += "[particle]\nmass = 1\ntheta = 0.2 0 0\n";
        const auto path = write_config(dir, text);
        const auto res = run_cli("algebra-check --config '" + path.string() + "'", dir);
        CHECK(res.exit_code == 0);
        CHECK(res.out.find("effective theta (12 13 23): 0.05 0 0") != std::string::npos);
    }
    SUBCASE("inverse-mass config reports the condition and zero cross brackets")
    {
        const auto res = run_cli("algebra-check " + config_arg("inverse_mass_body.cfg") + " --out '" +
                                     dir.string() + "'",
                                 dir);
        CHECK(res.exit_code == 0);
        CHECK(res.out.find("inverse-mass condition: holds") != std::string::npos);
        CHECK(res.out.find("check cross-zero") != std::string::npos);
    }
    SUBCASE("com-split verdicts")
    {
        const auto holds = run_cli("com-split " + config_arg("inverse_mass_body.cfg"), dir);
        CHECK(holds.exit_code == 0);
        CHECK(holds.out.find("relative-momentum coefficients: all zero") != std::string::npos);

        const auto generic_path = write_config(dir,
                                               "[particle]\nmass = 1\ntheta = 0.3 0 0\n[particle]\n"
                                               "mass = 2\ntheta = 0.6 0 0\n",
                                               "generic.cfg");
        const auto generic = run_cli("com-split --config '" + generic_path.string() + "'", dir);
        CHECK(generic.exit_code == 0);
        CHECK(generic.out.find("relative-momentum coefficients: nonzero") != std::string::npos);

        // raw coefficient of dP^1_2 in Xc_1: -(1/2) mu_1 theta^(1)_12 = -1/20
        const auto exact = run_cli("com-split --exact --config '" + generic_path.string() + "'", dir);
        CHECK(exact.exit_code == 0);
        CHECK(exact.out.find("-1/20") != std::string::npos);
        CHECK(exact.out.find("-1/5") != std::string::npos);  // particle 2: -(1/2)(2/3)(3/5)

        const auto path = write_config(dir,
                                       "[particle]\nmass = 1\ntheta = 0 0 0\n[particle]\nmass = "
                                       "2\ntheta = 0 0 0\n");
        const auto undeformed = run_cli("com-split --config '" + path.string() + "'", dir);
        CHECK(undeformed.exit_code == 0);
        CHECK(undeformed.out.find("Xc_i = xc_i (no momentum dependence)") != std::string::npos);
    }
}

TEST_CASE("seeded algebra-check adds reproducible randomized times")
{
    const auto dir = fresh_dir("seeded");
    const auto a = run_cli("algebra-check --seed 7 " + config_arg("inverse_mass_body.cfg") +
                               " --out '" + dir.string() + "'",
                           dir);
    const auto b = run_cli("algebra-check --seed 7 " + config_arg("inverse_mass_body.cfg") +
                               " --out '" + dir.string() + "'",
                           dir);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    // six time sections instead of three
    std::size_t count = 0;
    for (std::size_t pos = 0; (pos = a.out.find("## t =", pos)) != std::string::npos; ++pos) ++count;
    CHECK(count == 6);
}

TEST_CASE("simulate emits the requested plot script")
{
    const auto dir = fresh_dir("plot");
    const auto res = run_cli("simulate " + config_arg("two_particle_spring.cfg") + " --out '" +
                                 dir.string() + "'",
                             dir);
    REQUIRE(res.exit_code == 0);
    const std::string script = slurp(dir / "two_particle_spring.gp");
    CHECK(script.find("two_particle_spring.csv") != std::string::npos);
    CHECK(script.find("plot") != std::string::npos);
}

TEST_CASE("exit code 3: integration hits a singular separation")
{
    const auto dir = fresh_dir("singular");
    const auto path = write_config(
        dir,
        "[particle]\nmass = 1\ntheta = 0 0 0\nx = -0.5 0 0\np = 1 0 0\n"
        "[particle]\nmass = 1\ntheta = 0 0 0\nx = 0.5 0 0\np = -1 0 0\n"
        "[pairwise]\nprofile = inverse-r\nstrength = -1\nr_floor = 1e-3\n"
        "[run]\nt1 = 10\ndt = 1e-3\n");
    const auto res = run_cli("simulate --config '" + path.string() + "' --out '" + dir.string() + "'",
                             dir);
    CHECK(res.exit_code == 3);
    CHECK(res.err.find("last valid time") != std::string::npos);
}
