#include "qsb/qkd.hpp"

#include <algorithm>
#include <cmath>

#include "qsb/errors.hpp"
#include "qsb/numlin.hpp"

namespace qsb::qkd {

using numlin::binary_entropy;

void ChannelParams::validate() const {
    if (eta_d < 0.0 || eta_d > 1.0) throw ConfigError("channel: eta_d outside [0,1]");
    if (Y0 < 0.0 || Y0 > 1.0) throw ConfigError("channel: Y0 outside [0,1]");
    if (e_d < 0.0 || e_d > 1.0) throw ConfigError("channel: e_d outside [0,1]");
    if (e0 < 0.0 || e0 > 1.0) throw ConfigError("channel: e0 outside [0,1]");
    if (loss_db_per_km < 0.0) throw ConfigError("channel: negative fiber loss");
    if (f < 1.0) throw ConfigError("channel: error-correction inefficiency f must be >= 1");
}

void TwinFieldParams::validate() const {
    if (m < 1) throw ConfigError("twin-field: m must be >= 1");
    if (d <= 0.0 || d > 1.0) throw ConfigError("twin-field: duty cycle d outside (0,1]");
    if (e_s < 0.0 || e_s > 1.0) throw ConfigError("twin-field: e_s outside [0,1]");
}

double channel_transmittance(double distance_km, const ChannelParams& channel) {
    if (distance_km < 0.0) throw ConfigError("negative distance");
    return std::pow(10.0, -channel.loss_db_per_km * distance_km / 10.0);
}

YieldTable yields_gains_qber(const std::vector<double>& coeffs, const ChannelParams& channel,
                             double eta_t) {
    const double eta = channel.eta_d * eta_t;
    YieldTable t;
    const int kmax = static_cast<int>(coeffs.size());
    t.Y.resize(kmax);
    t.Qk.resize(kmax);
    t.ek.resize(kmax);
    double eq = 0.0;
    for (int k = 0; k < kmax; ++k) {
        const double click = 1.0 - std::pow(1.0 - eta, k);
        t.Y[k] = channel.Y0 + (1.0 - channel.Y0) * click;
        t.Qk[k] = t.Y[k] * coeffs[k];
        t.ek[k] = t.Y[k] > 0.0 ? (channel.e0 * channel.Y0 + channel.e_d * click) / t.Y[k] : 0.0;
        t.Q += t.Qk[k];
        eq += t.ek[k] * t.Qk[k];
    }
    t.E = t.Q > 0.0 ? eq / t.Q : 0.0;
    return t;
}

namespace {

// Shared rate assembly once the single-photon estimates are fixed.
KeyRateResult assemble(const YieldTable& t, double Q1, double e1, double f, double prefactor) {
    KeyRateResult r;
    r.Q = t.Q;
    r.E = t.E;
    r.Q1 = Q1;
    r.e1 = e1;
    if (Q1 > 0.0 && e1 <= 0.5) {
        const double bracket = Q1 * (1.0 - binary_entropy(e1)) - f * t.Q * binary_entropy(t.E);
        r.rate = std::max(0.0, prefactor * bracket);
    }
    return r;
}

KeyRateResult rate_from_coeffs(const std::vector<double>& coeffs, const ChannelParams& channel,
                               double eta_t, Decoy decoy, double e_align, double prefactor) {
    ChannelParams ch = channel;
    ch.e_d = e_align;
    const auto t = yields_gains_qber(coeffs, ch, eta_t);
    double Q1 = 0.0, e1 = 1.0;
    if (decoy == Decoy::none) {
        // Pessimistic bound: all multiphoton emissions leak (Eq. F5).
        double p_multi = 0.0;
        for (std::size_t k = 2; k < coeffs.size(); ++k) p_multi += coeffs[k];
        Q1 = t.Q - p_multi;
        if (Q1 > 0.0) e1 = t.E * t.Q / Q1;
    } else {
        const double eta = ch.eta_d * eta_t;
        const double Y1 = ch.Y0 + (1.0 - ch.Y0) * eta;
        Q1 = Y1 * (coeffs.size() > 1 ? coeffs[1] : 0.0);
        e1 = (ch.e0 * ch.Y0 + ch.e_d * eta) / Y1;
    }
    return assemble(t, Q1, e1, ch.f, prefactor);
}

} // namespace

KeyRateResult key_rate_bb84(const SourceModel& source, const ChannelParams& channel,
                            double distance_km, Decoy decoy) {
    channel.validate();
    if (!source.phase_randomized())
        throw AssumptionError(
            "BB84 security requires a phase-randomized source: the states' global phase must be "
            "uniformly randomized, which does not hold for " + source.describe());
    const auto coeffs = sources::photon_number_coefficients(source);
    const double eta_t = channel_transmittance(distance_km, channel);
    return rate_from_coeffs(coeffs, channel, eta_t, decoy, channel.e_d, 0.5);
}

KeyRateResult key_rate_twinfield(const SourceModel& source, const ChannelParams& channel,
                                 double distance_km, const TwinFieldParams& tf) {
    channel.validate();
    tf.validate();
    if (source.kind == SourceModel::Kind::qds) {
        if (!source.pop.coherent)
            throw AssumptionError(
                "twin-field QKD needs an accessible optical phase and must be implemented with "
                "RE QDS; incoherent pumping (" + source.describe() + ") is rejected");
        if (source.pop.p0 <= 0.0 || source.pop.p1 >= 1.0)
            throw AssumptionError("twin-field QKD: a p1=1 source has no accessible phase to encode");
    }
    const auto coeffs = sources::photon_number_coefficients(source);
    // Each pulse travels only half the distance to the middle node.
    const double eta_half = std::sqrt(channel_transmittance(distance_km, channel));
    const double prefactor = tf.d / (2.0 * tf.m);
    return rate_from_coeffs(coeffs, channel, eta_half, Decoy::infinite, channel.e_d + tf.e_s,
                            prefactor);
}

namespace {

BestPds best_over_mu(const std::function<double(double)>& rate_of_mu) {
    constexpr double lo = 1e-4, hi = 1.5;
    constexpr int grid = 60;
    double best_mu = lo, best_rate = -1.0;
    for (int i = 0; i < grid; ++i) {
        const double mu = lo + (hi - lo) * i / (grid - 1);
        const double r = rate_of_mu(mu);
        if (r > best_rate) {
            best_rate = r;
            best_mu = mu;
        }
    }
    // Golden-section refinement around the grid optimum.
    const double step = (hi - lo) / (grid - 1);
    double a = std::max(lo, best_mu - step), b = std::min(hi, best_mu + step);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = rate_of_mu(c), fd = rate_of_mu(d);
    while (b - a > 1e-5) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - gr * (b - a); fc = rate_of_mu(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + gr * (b - a); fd = rate_of_mu(d);
        }
    }
    const double mu = 0.5 * (a + b);
    const double r = rate_of_mu(mu);
    if (r >= best_rate) return {mu, r};
    return {best_mu, best_rate};
}

} // namespace

BestPds best_pds_rate(const ChannelParams& channel, double distance_km, Decoy decoy) {
    return best_over_mu([&](double mu) {
        return key_rate_bb84(sources::pds_source(mu), channel, distance_km, decoy).rate;
    });
}

BestPds best_pds_rate_twinfield(const ChannelParams& channel, double distance_km,
                                const TwinFieldParams& tf) {
    return best_over_mu([&](double mu) {
        return key_rate_twinfield(sources::pds_source(mu), channel, distance_km, tf).rate;
    });
}

std::optional<double> crossing_distance(const std::function<double(double)>& curve_a,
                                        const std::function<double(double)>& curve_b,
                                        const std::vector<double>& grid_km) {
    auto diff = [&](double x) { return curve_a(x) - curve_b(x); };
    for (std::size_t i = 1; i < grid_km.size(); ++i) {
        if (diff(grid_km[i - 1]) < 0.0 && diff(grid_km[i]) >= 0.0) {
            double lo = grid_km[i - 1], hi = grid_km[i];
            while (hi - lo > 0.5) {
                const double mid = 0.5 * (lo + hi);
                (diff(mid) >= 0.0 ? hi : lo) = mid;
            }
            return 0.5 * (lo + hi);
        }
    }
    return std::nullopt;
}

std::optional<double> crossing_distance(const std::vector<double>& a, const std::vector<double>& b,
                                        const std::vector<double>& grid_km) {
    if (a.size() != b.size() || a.size() != grid_km.size())
        throw ConfigError("crossing_distance: curves must share the distance grid");
    for (std::size_t i = 1; i < a.size(); ++i) {
        const double d0 = a[i - 1] - b[i - 1], d1 = a[i] - b[i];
        if (d0 < 0.0 && d1 >= 0.0) {
            const double frac = d1 == d0 ? 0.0 : -d0 / (d1 - d0);
            return grid_km[i - 1] + frac * (grid_km[i] - grid_km[i - 1]);
        }
    }
    return std::nullopt;
}

} // namespace qsb::qkd
