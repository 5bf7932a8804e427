// qsb::coinflip -- strong coin flipping: parametric protocol states, Alice's
// closed-form cheating bound, Bob's incoherent case-analysis bound, the
// coherent USD+Helstrom attack, honest abort, the classical bound, and
// protocol balancing.
#pragma once

#include <functional>
#include <optional>

#include "qsb/qkd.hpp"
#include "qsb/sources.hpp"

namespace qsb::coinflip {

using numlin::Mat;
using numlin::cxd;
using sources::SourceModel;

// Equal mixtures over Alice's bit alpha of the (y, eta, phi)-encoded states,
// one per Bob's declared bit c -- the two states a dishonest Bob must
// discriminate.
struct CoinFlipStates {
    Mat sigma0;
    Mat sigma1;
};

// Phase settings per (alpha, c): (0,0)->0, (1,0)->pi, (0,1)->pi/2, (1,1)->3pi/2.
double protocol_phase(int alpha, int c);

// Incoherent sources use the loss-mode-traced MZI encoding; a coherent (RE)
// source emits states maximally pure in the photon-number basis, built as
// sum_k sqrt(P_eta(k)) |chi_k(phi,y)> with k-resolved binomial thinning.
CoinFlipStates coinflip_states(const SourceModel& source, double y);

// P <= 3/4 + 1/2 sqrt(y(1-y)).
double alice_cheat_bound(double y);

// Case analysis A1..A4 over N pulses; N may be fractional (the analysis never
// forces integer N).
double bob_cheat_bound_incoherent(const sources::EffectiveCoefficients& c, double N, double y);

// Optimal unambiguous discrimination: max 1/2[Tr(M0 s0) + Tr(M1 s1)] with
// Tr(M0 s1) = Tr(M1 s0) = 0, M0 + M1 + M_inc = 1, all PSD.  Solved in the
// kernel-restricted parameterization M0 = K1 X K1^dag, M1 = K0 Y K0^dag.
double usd_probability(const Mat& sigma0, const Mat& sigma1);

// 1/2 + 1/4 ||s0 - s1||_1.
double helstrom(const Mat& sigma0, const Mat& sigma1);

// USD on the first N-1 states, Helstrom on the last.
double bob_cheat_bound_coherent(double p_usd, double p_hel, double N);

// Honest Bob's per-pulse click probability: channel + detector thinning of
// the raw source photon-number distribution, then dark-count adjustment.
double honest_click_probability(const SourceModel& source, const qkd::ChannelParams& channel,
                                double distance_km);

// P_ab = Z + (1-Z) e/2 with Z = (1 - p_click)^N.
double honest_abort(double p_click, double N, double e);

// N with (1 - p_click)^N = z_target.
double pulses_for_abort_target(double p_click, double z_target);

// 1 - sqrt(P_ab / 2); rejects P_ab outside [0,1].
double classical_bound(double p_ab);

struct BalanceResult {
    bool balanced = false;
    double y = 1.0;
    double p_alice = 0.75;
    double p_bob = 0.0;
    double cheat = 0.75; // max of the two at the returned y
};

// Bisection of alice(y) - bob(y) on y in [1/2, 1] to 1e-4. When Bob's bound
// stays below Alice's everywhere the protocol is reported unbalanced at y=1.
BalanceResult balance(const std::function<double(double)>& bob_of_y);

struct SweepPoint {
    double distance_km = 0.0;
    double N = 0.0;
    double y = 1.0;
    double p_alice = 0.75;
    double p_bob = 0.0;
    double cheat = 0.75;
    double p_ab = 0.0;
    double classical = 1.0;
    bool advantage = false;
    bool balanced = false;
    const char* attack_label = "";
};

// Balanced protocol at one distance with N set so the no-click contribution
// to the honest abort hits z_target; `e` is the error-rate contribution to
// the abort probability, so P_ab = z_target + e (defaults: 2.5% total).
SweepPoint evaluate_point(const SourceModel& source, const qkd::ChannelParams& channel,
                          double distance_km, double e = 0.015, double z_target = 0.01);

// Largest distance (to +-0.05 km) where the balanced cheating probability
// stays below the classical bound; none if it never does.
std::optional<double> advantage_distance(const SourceModel& source,
                                         const qkd::ChannelParams& channel, double e = 0.015,
                                         double z_target = 0.01, double max_km = 200.0);

} // namespace qsb::coinflip
