// Microbenchmarks for the numerical hot paths: the Jacobi eigensolver, small
// SDP solves, the Mach-Zehnder encoder, and token operator assembly.

#include <benchmark/benchmark.h>

#include <random>

#include "qsb/fock.hpp"
#include "qsb/numlin.hpp"
#include "qsb/sdp.hpp"
#include "qsb/tokens.hpp"

using namespace qsb;
using numlin::cxd;
using numlin::Mat;

namespace {

Mat random_hermitian(std::mt19937& rng, int n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Mat a(n, n);
    for (int i = 0; i < n; ++i) {
        a(i, i) = u(rng);
        for (int j = i + 1; j < n; ++j) {
            a(i, j) = cxd(u(rng), u(rng));
            a(j, i) = std::conj(a(i, j));
        }
    }
    return a;
}

void BM_eigh(benchmark::State& state) {
    std::mt19937 rng(42);
    const Mat a = random_hermitian(rng, int(state.range(0)));
    for (auto _ : state) {
        auto eig = numlin::hermitian_eigh(a);
        benchmark::DoNotOptimize(eig.eigenvalues.data());
    }
}
BENCHMARK(BM_eigh)->Arg(8)->Arg(32)->Arg(64);

void BM_sdp_trace_simplex(benchmark::State& state) {
    std::mt19937 rng(7);
    const int n = int(state.range(0));
    numlin::SdpProblem prob;
    prob.objective = random_hermitian(rng, n);
    numlin::LinearConstraint c;
    c.matrix = Mat::identity(n);
    c.rhs = 1.0;
    prob.eq.push_back(c);
    for (auto _ : state) {
        auto sol = numlin::sdp_solve(prob);
        benchmark::DoNotOptimize(sol.primal_value);
    }
}
BENCHMARK(BM_sdp_trace_simplex)->Arg(4)->Arg(8)->Arg(16);

void BM_encode_state(benchmark::State& state) {
    const std::array<double, 4> pops = {0.05, 0.9, 0.049, 0.001};
    for (auto _ : state) {
        auto dm = fock::encode_state(pops, 0.6, 1.1, 0.8, true);
        benchmark::DoNotOptimize(dm.rho.max_abs());
    }
}
BENCHMARK(BM_encode_state);

void BM_token_operators(benchmark::State& state) {
    const auto setup = tokens::qds_setup(sources::Pumping::TPE, 0.5);
    for (auto _ : state) {
        auto ops = tokens::build_error_loss_operators(setup);
        benchmark::DoNotOptimize(ops.E1.max_abs());
    }
}
BENCHMARK(BM_token_operators);

void BM_token_sdp_ideal(benchmark::State& state) {
    const auto setup = tokens::ideal_qubit_setup();
    for (auto _ : state) {
        auto r = tokens::noise_tolerance(setup, 0.25);
        benchmark::DoNotOptimize(r.min_error);
    }
}
BENCHMARK(BM_token_sdp_ideal)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
