// qsb::qkd -- secret-key-rate engines: BB84 without decoys, BB84 with
// infinite decoys, and twin-field QKD, plus the distance-crossing helper
// used to compare source families.
#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qsb/sources.hpp"

namespace qsb::qkd {

using sources::SourceModel;

struct ChannelParams {
    double eta_d = 1.0;            // detector efficiency
    double Y0 = 1e-9;              // dark-count probability per pulse
    double loss_db_per_km = 0.21;  // single-mode telecom fiber
    double e_d = 0.02;             // alignment error probability
    double e0 = 0.5;               // error of a dark count
    double f = 1.2;                // error-correction inefficiency

    void validate() const;
};

struct TwinFieldParams {
    int m = 16;           // phase slices
    double d = 1.0;       // duty cycle
    double e_s = 0.01275; // phase-slicing error

    void validate() const;
};

enum class Decoy { none, infinite };

struct KeyRateResult {
    double rate = 0.0; // secret bits per pulse, clamped at 0
    double Q = 0.0;    // total gain
    double E = 0.0;    // total QBER
    double Q1 = 0.0;   // single-photon gain estimate
    double e1 = 0.0;   // single-photon error estimate
};

struct YieldTable {
    std::vector<double> Y;  // per-photon-number yields
    std::vector<double> Qk; // per-photon-number gains
    std::vector<double> ek; // per-photon-number error rates
    double Q = 0.0;         // total gain
    double E = 0.0;         // total QBER
};

double channel_transmittance(double distance_km, const ChannelParams& channel);

// Y_k = Y0 + (1-Y0)[1-(1-eta)^k] with eta = eta_d * eta_t;
// Q_k = Y_k P(k); e_k = (e0 Y0 + e_d [1-(1-eta)^k]) / Y_k.
YieldTable yields_gains_qber(const std::vector<double>& coeffs, const ChannelParams& channel,
                             double eta_t);

KeyRateResult key_rate_bb84(const SourceModel& source, const ChannelParams& channel,
                            double distance_km, Decoy decoy);

KeyRateResult key_rate_twinfield(const SourceModel& source, const ChannelParams& channel,
                                 double distance_km, const TwinFieldParams& tf);

struct BestPds {
    double mu = 0.0;
    double rate = 0.0;
};

// Best randomized-phase PDS rate at a fixed distance: coarse grid over
// mu in [1e-4, 1.5] followed by golden-section refinement (the curve has a
// zero plateau at long distance, so a pure local search can collapse).
BestPds best_pds_rate(const ChannelParams& channel, double distance_km, Decoy decoy);
BestPds best_pds_rate_twinfield(const ChannelParams& channel, double distance_km,
                                const TwinFieldParams& tf);

// First distance where a >= b after being below, refined by bisection on the
// callable curves to +-0.5 km; none when no such crossing exists on the grid.
std::optional<double> crossing_distance(const std::function<double(double)>& curve_a,
                                        const std::function<double(double)>& curve_b,
                                        const std::vector<double>& grid_km);
// Sampled variant (linear interpolation between grid points).
std::optional<double> crossing_distance(const std::vector<double>& a, const std::vector<double>& b,
                                        const std::vector<double>& grid_km);

} // namespace qsb::qkd
