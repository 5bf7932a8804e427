#include "qsb/tokens.hpp"

#include <cmath>

#include "qsb/errors.hpp"
#include "qsb/fock.hpp"

namespace qsb::tokens {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<cxd> squash3(const std::array<cxd, 2>& q) {
    return {q[0], q[1], 0.0}; // third dimension is the no-click flag
}

std::array<cxd, 2> perp(const std::array<cxd, 2>& q) {
    return {-std::conj(q[1]), std::conj(q[0])};
}

} // namespace

TokenSetup ideal_qubit_setup() {
    TokenSetup s;
    s.label = "ideal single-photon qubits";
    s.honest_loss = 0.0;
    for (int k = 0; k < 4; ++k) {
        const auto q = sources::bb84_qubit(k);
        const std::vector<cxd> v = {q[0], q[1]};
        s.sigmas.push_back(numlin::outer(v, v));
        s.betas.push_back(q);
    }
    return s;
}

TokenSetup qds_setup(Pumping pumping, double eta) {
    const auto pop = sources::preset(pumping);
    TokenSetup s;
    s.label = sources::qds_source(pumping, eta).describe();
    s.honest_loss = 1.0 - sources::source_efficiency(pop, eta);
    for (int k = 0; k < 4; ++k) {
        const double phi = k * kPi / 2.0;
        const auto dm = fock::encode_state(pop.as_array(), eta, phi, 0.5, pop.coherent);
        s.sigmas.push_back(dm.rho);
        // Single-photon sector of the encoded state (the squashed qubit).
        const cxd c0 = (1.0 + std::exp(cxd(0.0, phi))) / 2.0;
        const cxd c1 = (1.0 - std::exp(cxd(0.0, phi))) / 2.0;
        const double n = std::sqrt(std::norm(c0) + std::norm(c1));
        s.betas.push_back({c0 / n, c1 / n});
    }
    return s;
}

TokenSetup rp_pds_setup(double mu) {
    TokenSetup s;
    s.label = "RP-PDS mu=" + std::to_string(mu);
    s.honest_loss = std::exp(-mu);
    for (int k = 0; k < 4; ++k) {
        s.sigmas.push_back(sources::pds_randomized_state(mu, k));
        s.betas.push_back(sources::bb84_qubit(k));
    }
    return s;
}

TokenSetup fp_pds_setup(double mu) {
    if (mu < 0.0) throw ConfigError("fp_pds_setup: negative mu");
    TokenSetup s;
    s.label = "FP-PDS mu=" + std::to_string(mu);
    s.honest_loss = std::exp(-mu);
    for (int k = 0; k < 4; ++k) {
        const auto v4 = sources::pds_fixed_phase_state(std::sqrt(mu), k);
        const std::vector<cxd> v(v4.begin(), v4.end());
        s.sigmas.push_back(numlin::outer(v, v));
        s.betas.push_back(sources::bb84_qubit(k));
    }
    return s;
}

ErrorLossOperators build_error_loss_operators(const TokenSetup& setup) {
    if (setup.sigmas.size() != 4 || setup.betas.size() != 4)
        throw ConfigError("token setup needs exactly four states");
    const int d = setup.sigmas[0].rows();
    for (const auto& sigma : setup.sigmas)
        if (sigma.rows() != d || sigma.cols() != d)
            throw ConfigError("token states must share one basis");

    const Mat I3 = Mat::identity(3);
    Mat emp = Mat::zeros(3, 3);
    emp(2, 2) = 1.0;

    const int D = 9 * d;
    ErrorLossOperators ops{Mat::zeros(D, D), Mat::zeros(D, D), Mat::zeros(D, D), Mat::zeros(D, D)};
    for (int k = 0; k < 4; ++k) {
        const auto bp = squash3(perp(setup.betas[k]));
        const Mat Pk = numlin::outer(bp, bp);
        const Mat sc = setup.sigmas[k].conj();
        ops.E1 += kron(kron(Pk * cxd(0.125), I3), sc);
        ops.E2 += kron(kron(I3, Pk * cxd(0.125)), sc);
        ops.L1 += kron(kron(emp * cxd(0.25), I3), sc);
        ops.L2 += kron(kron(I3, emp * cxd(0.25)), sc);
    }
    return ops;
}

NoiseToleranceResult noise_tolerance(const TokenSetup& setup, double allowed_loss) {
    if (allowed_loss < 0.0 || allowed_loss > 1.0)
        throw ConfigError("noise_tolerance: allowed loss outside [0,1]");
    const auto ops = build_error_loss_operators(setup);
    const int d = setup.sigmas[0].rows();

    numlin::SdpProblem p;
    p.objective = ops.E1;
    p.maximize = false;
    p.partial_trace_eq = numlin::PartialTraceConstraint{9, Mat::identity(d)};
    p.ineq.push_back({ops.E2 - ops.E1, 0.0});      // Tr(E2 J) <= Tr(E1 J)
    // A strictly zero loss bound leaves the primal without an interior point
    // (Tr(L J) > 0 for every J > 0); the tiny floor keeps the interior-point
    // iteration well posed and shifts the optimum by O(1e-8).
    const double l_eff = std::max(allowed_loss, 1e-7);
    p.ineq.push_back({ops.L1, l_eff});
    p.ineq.push_back({ops.L2, l_eff});

    const auto sol = numlin::sdp_solve(p);
    if (sol.status == numlin::SdpStatus::max_iterations)
        throw SolverError("token SDP did not converge for " + setup.label);
    NoiseToleranceResult r;
    r.min_error = std::max(sol.primal_value, 0.0);
    r.gap = sol.gap;
    r.status = sol.status;
    r.iterations = sol.iterations;
    return r;
}

NoiseToleranceResult noise_tolerance(const TokenSetup& setup) {
    return noise_tolerance(setup, setup.honest_loss);
}

BestPdsTolerance best_rp_pds_tolerance() {
    auto tol_of_mu = [](double mu) { return noise_tolerance(rp_pds_setup(mu)).min_error; };
    constexpr double lo = 0.05, hi = 1.5;
    constexpr int grid = 16;
    BestPdsTolerance best{lo, -1.0};
    for (int i = 0; i < grid; ++i) {
        const double mu = lo + (hi - lo) * i / (grid - 1);
        const double t = tol_of_mu(mu);
        if (t > best.tolerance) best = {mu, t};
    }
    const double step = (hi - lo) / (grid - 1);
    double a = std::max(lo, best.mu - step), b = std::min(hi, best.mu + step);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), dd = a + gr * (b - a);
    double fc = tol_of_mu(c), fd = tol_of_mu(dd);
    while (b - a > 1e-2) {
        if (fc > fd) {
            b = dd; dd = c; fd = fc;
            c = b - gr * (b - a); fc = tol_of_mu(c);
        } else {
            a = c; c = dd; fc = fd;
            dd = a + gr * (b - a); fd = tol_of_mu(dd);
        }
    }
    const double mu = 0.5 * (a + b);
    const double t = tol_of_mu(mu);
    if (t > best.tolerance) best = {mu, t};
    return best;
}

std::optional<double> threshold_collection(Pumping pumping, double target, double eta_lo,
                                           double eta_hi) {
    auto diff = [&](double eta) {
        return noise_tolerance(qds_setup(pumping, eta)).min_error - target;
    };
    double lo = eta_lo, hi = eta_hi;
    double flo = diff(lo), fhi = diff(hi);
    if (flo * fhi > 0.0) return std::nullopt;
    while (hi - lo > 0.005) {
        const double mid = 0.5 * (lo + hi);
        const double fm = diff(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace qsb::tokens
