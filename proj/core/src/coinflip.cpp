#include "qsb/coinflip.hpp"

#include <algorithm>
#include <cmath>

#include "qsb/errors.hpp"
#include "qsb/sdp.hpp"
#include "qsb/fock.hpp"

namespace qsb::coinflip {

namespace {

constexpr double kPi = 3.14159265358979323846;

// y-reflectivity MZI acting on exactly k input photons (no loss mode).
fock::PureState mzi_fock_input(int k, double phi, double y) {
    fock::PureState st;
    st.basis = fock::fock_basis(2, 3);
    st.amplitudes.assign(st.basis.dim(), 0.0);
    st.amplitudes[st.basis.index({k, 0})] = 1.0;
    st = fock::apply_beamsplitter(st, 0, 1, y);
    st = fock::apply_phase(st, 1, phi);
    st = fock::apply_beamsplitter(st, 0, 1, y);
    return st;
}

} // namespace

double protocol_phase(int alpha, int c) {
    if (alpha == 0 && c == 0) return 0.0;
    if (alpha == 1 && c == 0) return kPi;
    if (alpha == 0 && c == 1) return kPi / 2.0;
    return 3.0 * kPi / 2.0;
}

CoinFlipStates coinflip_states(const SourceModel& source, double y) {
    if (y < 0.5 || y > 1.0) throw ConfigError("coinflip: y outside [1/2, 1]");
    if (source.kind != SourceModel::Kind::qds)
        throw ConfigError(
            "coin-flip state construction is defined for QDS sources; phase-randomized PDS "
            "enters through the incoherent case bound");
    const auto pop = source.pop.as_array();
    auto sigma_ac = [&](int alpha, int c) -> Mat {
        const double phi = protocol_phase(alpha, c);
        if (!source.pop.coherent)
            return fock::encode_state(pop, source.eta, phi, y, false).rho;
        // Coherent source: maximally pure in the photon-number basis.
        const auto thin = sources::thinned_populations(pop, source.eta);
        fock::PureState psi;
        psi.basis = fock::fock_basis(2, 3);
        psi.amplitudes.assign(psi.basis.dim(), 0.0);
        for (int k = 0; k <= 3; ++k) {
            if (thin[k] <= 0.0) continue;
            const auto chi = mzi_fock_input(k, phi, y);
            for (int i = 0; i < psi.basis.dim(); ++i)
                psi.amplitudes[i] += std::sqrt(thin[k]) * chi.amplitudes[i];
        }
        return fock::density_from_pure(psi).rho;
    };
    CoinFlipStates st;
    st.sigma0 = (sigma_ac(0, 0) + sigma_ac(1, 0)) * cxd(0.5);
    st.sigma1 = (sigma_ac(0, 1) + sigma_ac(1, 1)) * cxd(0.5);
    return st;
}

double alice_cheat_bound(double y) {
    if (y < 0.5 || y > 1.0) throw ConfigError("alice_cheat_bound: y outside [1/2, 1]");
    return 0.75 + 0.5 * std::sqrt(y * (1.0 - y));
}

double bob_cheat_bound_incoherent(const sources::EffectiveCoefficients& c, double N, double y) {
    if (N < 1.0) throw ConfigError("bob_cheat_bound_incoherent: N must be >= 1");
    const double a1 = std::pow(c.P0, N);
    const double a2 = std::pow(c.P0 + c.P1, N) - a1;
    const double a3 = N * c.P_multi * std::pow(c.P0, N - 1.0);
    const double a4 = N * c.P_multi * (std::pow(c.P0 + c.P1, N - 1.0) - std::pow(c.P0, N - 1.0));
    const double rest = std::max(0.0, 1.0 - (a1 + a2 + a3 + a4));
    return 0.5 * a1 + y * (a2 + a3) + (-2.0 * y * y + 4.0 * y - 1.0) * a4 + rest;
}

double usd_probability(const Mat& sigma0, const Mat& sigma1) {
    const int d = sigma0.rows();
    if (sigma1.rows() != d || sigma0.cols() != d || sigma1.cols() != d)
        throw ConfigError("usd_probability: states must share one basis");
    // M0 must annihilate sigma1 (and vice versa): restrict each POVM element
    // to the kernel of the state it must never fire on.
    const Mat K1 = numlin::hermitian_kernel(sigma1);
    const Mat K0 = numlin::hermitian_kernel(sigma0);
    const int k1 = K1.cols(), k0 = K0.cols();
    if (k1 == 0 && k0 == 0) return 0.0;

    const int m = k1 + k0 + d;
    auto place = [&](Mat& big, const Mat& block, int off) {
        for (int i = 0; i < block.rows(); ++i)
            for (int j = 0; j < block.cols(); ++j) big(off + i, off + j) = block(i, j);
    };

    numlin::SdpProblem p;
    p.maximize = true;
    p.objective = Mat::zeros(m, m);
    if (k1 > 0) place(p.objective, (K1.dagger() * sigma0 * K1) * cxd(0.5), 0);
    if (k0 > 0) place(p.objective, (K0.dagger() * sigma1 * K0) * cxd(0.5), k1);

    // Completeness K1 X K1^dag + K0 Y K0^dag + S = 1 as d^2 Hermitian
    // constraints on the diagonal blocks (off-diagonal blocks of the variable
    // are irrelevant: principal submatrices of a PSD matrix are PSD).
    auto add_constraint = [&](const Mat& h, double rhs) {
        Mat a = Mat::zeros(m, m);
        if (k1 > 0) place(a, K1.dagger() * h * K1, 0);
        if (k0 > 0) place(a, K0.dagger() * h * K0, k1);
        place(a, h, k1 + k0);
        p.eq.push_back({a.hermitize(), rhs});
    };
    for (int a = 0; a < d; ++a) {
        for (int b = a; b < d; ++b) {
            Mat hre = Mat::zeros(d, d);
            hre(a, b) += 0.5;
            hre(b, a) += 0.5;
            add_constraint(hre, a == b ? 1.0 : 0.0);
            if (a != b) {
                Mat him = Mat::zeros(d, d);
                him(a, b) += cxd(0.0, 0.5);
                him(b, a) += cxd(0.0, -0.5);
                add_constraint(him, 0.0);
            }
        }
    }

    const auto sol = numlin::sdp_solve(p);
    if (sol.status == numlin::SdpStatus::max_iterations)
        throw SolverError("USD SDP did not converge");
    return std::clamp(sol.primal_value, 0.0, 1.0);
}

double helstrom(const Mat& sigma0, const Mat& sigma1) {
    return 0.5 + 0.25 * numlin::trace_norm(sigma0 - sigma1);
}

double bob_cheat_bound_coherent(double p_usd, double p_hel, double N) {
    if (N < 1.0) throw ConfigError("bob_cheat_bound_coherent: N must be >= 1");
    const double miss = std::pow(1.0 - p_usd, N - 1.0);
    return (1.0 - miss) + miss * p_hel;
}

double honest_click_probability(const SourceModel& source, const qkd::ChannelParams& channel,
                                double distance_km) {
    channel.validate();
    const double eta = channel.eta_d * qkd::channel_transmittance(distance_km, channel);
    double vac = 0.0;
    if (source.kind == SourceModel::Kind::qds) {
        const auto p = source.pop.as_array();
        for (int n = 0; n <= 3; ++n) vac += p[n] * std::pow(1.0 - eta, n);
    } else {
        vac = std::exp(-source.pds.mu * eta);
    }
    const double p_click = 1.0 - vac;
    return 1.0 - (1.0 - p_click) * (1.0 - channel.Y0);
}

double honest_abort(double p_click, double N, double e) {
    const double z = std::pow(1.0 - p_click, N);
    return z + (1.0 - z) * e / 2.0;
}

double pulses_for_abort_target(double p_click, double z_target) {
    if (p_click <= 0.0 || p_click >= 1.0)
        throw AssumptionError("no pulse count achieves the abort target: p_click outside (0,1)");
    if (z_target <= 0.0 || z_target >= 1.0)
        throw ConfigError("pulses_for_abort_target: z_target outside (0,1)");
    return std::log(z_target) / std::log(1.0 - p_click);
}

double classical_bound(double p_ab) {
    if (p_ab < 0.0 || p_ab > 1.0) throw ConfigError("classical_bound: P_ab outside [0,1]");
    return 1.0 - std::sqrt(p_ab / 2.0);
}

BalanceResult balance(const std::function<double(double)>& bob_of_y) {
    BalanceResult r;
    const double d_hi = alice_cheat_bound(1.0) - bob_of_y(1.0);
    if (d_hi > 0.0) {
        // Bob's bound stays below Alice's: no balancing root.
        r.balanced = false;
        r.y = 1.0;
        r.p_alice = alice_cheat_bound(1.0);
        r.p_bob = bob_of_y(1.0);
        r.cheat = r.p_alice;
        return r;
    }
    double lo = 0.5, hi = 1.0;
    while (hi - lo > 1e-4) {
        const double mid = 0.5 * (lo + hi);
        (alice_cheat_bound(mid) - bob_of_y(mid) >= 0.0 ? lo : hi) = mid;
    }
    r.balanced = true;
    r.y = 0.5 * (lo + hi);
    r.p_alice = alice_cheat_bound(r.y);
    r.p_bob = bob_of_y(r.y);
    r.cheat = std::max(r.p_alice, r.p_bob);
    return r;
}

SweepPoint evaluate_point(const SourceModel& source, const qkd::ChannelParams& channel,
                          double distance_km, double e, double z_target) {
    SweepPoint pt;
    pt.distance_km = distance_km;
    const double p_click = honest_click_probability(source, channel, distance_km);
    pt.N = pulses_for_abort_target(p_click, z_target);
    if (pt.N < 1.0) pt.N = 1.0;
    // `e` is the error-rate contribution to P_ab ("of which 1.5% come from
    // the error rate"): P_ab = Z + (1-Z) e_rate/2 with (1-Z) e_rate/2 = e.
    const double e_rate = 2.0 * e / (1.0 - z_target);
    pt.p_ab = honest_abort(p_click, pt.N, e_rate);
    pt.classical = classical_bound(pt.p_ab);

    std::function<double(double)> bob;
    if (source.phase_randomized()) {
        pt.attack_label = "incoherent-cases";
        const auto c = source.kind == SourceModel::Kind::qds
                           ? sources::qds_effective_coefficients(source.pop, source.eta)
                           : sources::poisson_coefficients(source.pds.mu);
        bob = [c, N = pt.N](double y) { return bob_cheat_bound_incoherent(c, N, y); };
    } else {
        pt.attack_label = "usd-helstrom";
        bob = [&source, N = pt.N](double y) {
            const auto st = coinflip_states(source, y);
            return bob_cheat_bound_coherent(usd_probability(st.sigma0, st.sigma1),
                                            helstrom(st.sigma0, st.sigma1), N);
        };
    }
    const auto b = balance(bob);
    pt.balanced = b.balanced;
    pt.y = b.y;
    pt.p_alice = b.p_alice;
    pt.p_bob = b.p_bob;
    pt.cheat = b.cheat;
    pt.advantage = pt.cheat < pt.classical;
    return pt;
}

std::optional<double> advantage_distance(const SourceModel& source,
                                         const qkd::ChannelParams& channel, double e,
                                         double z_target, double max_km) {
    auto good = [&](double km) { return evaluate_point(source, channel, km, e, z_target).advantage; };
    if (!good(0.0)) return std::nullopt;
    // Scan for the loss of advantage, then bisect the boundary.
    const double step = 5.0;
    double lo = 0.0, hi = -1.0;
    for (double km = step; km <= max_km + 1e-9; km += step) {
        if (good(km)) {
            lo = km;
        } else {
            hi = km;
            break;
        }
    }
    if (hi < 0.0) return max_km;
    while (hi - lo > 0.01) {
        const double mid = 0.5 * (lo + hi);
        (good(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace qsb::coinflip
