// Timing comparison of the serial reference kernels against the OpenMP
// versions: bracket-matrix assembly, pairwise gradients, WEP trajectory
// sweeps. Also cross-checks that both paths agree bitwise.

#include "twistnc/affine.hpp"
#include "twistnc/dynamics.hpp"

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace twistnc;

namespace {

std::mt19937_64 gen(12345);

double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }

template <class F>
double time_ms(F&& f, int repeats = 3)
{
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto start = std::chrono::steady_clock::now();
        f();
        const auto stop = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(stop - start).count());
    }
    return best;
}

void row(const char* kernel, std::size_t size, double serial_ms, double parallel_ms, double max_diff)
{
    std::printf("%-18s %8zu %12.2f %12.2f %9.2fx %10.1e\n", kernel, size, serial_ms, parallel_ms,
                serial_ms / parallel_ms, max_diff);
}

ParticleSystemD random_system(std::size_t n)
{
    std::vector<double> masses;
    std::vector<ThetaMatrix<double>> thetas;
    for (std::size_t a = 0; a < n; ++a) {
        masses.push_back(uniform(0.1, 10.0));
        thetas.push_back({uniform(-1, 1), uniform(-1, 1), uniform(-1, 1)});
    }
    return ParticleSystemD(std::move(masses), ThetaPolicy<double>::per_particle(std::move(thetas)),
                           TwistFunction(TwistKind::Cos, 2.0));
}

void bench_bracket_matrix(std::size_t particles)
{
    const auto system = random_system(particles);
    const auto observables = deformed_phase_set(system, 0.7);
    SquareMatrix<double> serial(0), parallel(0);
    const double ts = time_ms([&] { serial = bracket_matrix_serial(observables); });
    const double tp = time_ms([&] { parallel = bracket_matrix(observables); });
    double diff = 0.0;
    for (std::size_t k = 0; k < serial.data.size(); ++k)
        diff = std::max(diff, std::fabs(serial.data[k] - parallel.data[k]));
    row("bracket_matrix", observables.size(), ts, tp, diff);
}

void bench_pair_gradient(std::size_t particles)
{
    const auto spec = PotentialSpec::pairwise(RadialProfile::Harmonic, 0.8);
    std::vector<Vec3> X(particles);
    for (auto& v : X) v = {uniform(-5, 5), uniform(-5, 5), uniform(-5, 5)};
    std::vector<Vec3> serial(particles), parallel(particles);
    const double ts = time_ms([&] { pairwise_gradient_serial(spec, X, serial); }, 5);
    const double tp = time_ms([&] { pairwise_gradient(spec, X, parallel); }, 5);
    double diff = 0.0;
    for (std::size_t a = 0; a < particles; ++a)
        diff = std::max(diff, max_abs(serial[a] - parallel[a]));
    row("pairwise_gradient", particles, ts, tp, diff);
}

void bench_wep_sweep(std::size_t count)
{
    const auto field = PotentialSpec::uniform_field(1.0, 0);
    const auto policy = ThetaPolicy<double>::inverse_mass({0.1, -0.05, 0.2});
    std::vector<double> masses;
    for (std::size_t k = 0; k < count; ++k) masses.push_back(1.0 + static_cast<double>(k));
    WepOptions options;
    options.dt = 1e-3;

    std::vector<Trajectory> parallel;
    const double tp =
        time_ms([&] { parallel = wep_sweep(field, masses, policy, {}, 5.0, {0, 0, 0}, {0, 0, 0},
                                           options); },
                1);
    // serial reference: one mass at a time
    std::vector<Trajectory> serial;
    const double ts = time_ms(
        [&] {
            serial.clear();
            for (double m : masses)
                serial.push_back(wep_sweep(field, {m}, policy, {}, 5.0, {0, 0, 0}, {0, 0, 0},
                                           options)[0]);
        },
        1);
    double diff = 0.0;
    for (std::size_t k = 0; k < masses.size(); ++k)
        for (std::size_t s = 0; s < serial[k].samples(); ++s)
            diff = std::max(diff, max_abs(serial[k].deformed_x[s][0] - parallel[k].deformed_x[s][0]));
    row("wep_sweep", count, ts, tp, diff);
}

}  // namespace

int main()
{
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP\n");
#endif
    std::printf("%-18s %8s %12s %12s %10s %10s\n", "kernel", "size", "serial ms", "parallel ms",
                "speedup", "max diff");
    for (std::size_t n : {8, 24, 48}) bench_bracket_matrix(n);
    for (std::size_t n : {256, 1024, 2048}) bench_pair_gradient(n);
    for (std::size_t n : {4, 8}) bench_wep_sweep(n);
    return 0;
}
