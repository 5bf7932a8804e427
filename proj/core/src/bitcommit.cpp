#include "qsb/bitcommit.hpp"

#include <algorithm>
#include <cmath>

#include "qsb/errors.hpp"
#include "qsb/numlin.hpp"

namespace qsb::bitcommit {

namespace {

double log2v(double x) { return std::log2(x); }

double p_at(const std::vector<double>& p, std::size_t k) { return k < p.size() ? p[k] : 0.0; }

double p_multi(const std::vector<double>& p) {
    double s = 0.0;
    for (std::size_t k = 2; k < p.size(); ++k) s += p[k];
    return s;
}

} // namespace

void BitCommitParams::validate() const {
    if (epsilon <= 0.0 || epsilon >= 1.0) throw ConfigError("bitcommit: epsilon outside (0,1)");
    if (beta <= 0.0 || beta > 0.01) throw ConfigError("bitcommit: beta outside (0, 0.01]");
    if (gamma <= 0.0 || gamma > 0.01) throw ConfigError("bitcommit: gamma outside (0, 0.01]");
    if (S < 0.0) throw ConfigError("bitcommit: negative storage size");
    if (e < 0.0 || e > 1.0) throw ConfigError("bitcommit: error rate outside [0,1]");
    if (p_x.empty() || p_x_etac.empty())
        throw ConfigError("bitcommit: photon-number distributions missing");
}

double l_prime(double epsilon, double* s_star) {
    auto f = [epsilon](double s) {
        return -(log2v(1.0 + std::pow(2.0, s)) - 1.0 - s) / s - 3.0 * epsilon / s;
    };
    // Log-spaced grid on (0,1], then golden-section refinement.
    constexpr int grid = 400;
    double best_s = 1.0, best_f = f(1.0);
    for (int i = 0; i < grid; ++i) {
        const double s = std::pow(10.0, -4.0 + 4.0 * i / (grid - 1));
        const double v = f(s);
        if (v > best_f) {
            best_f = v;
            best_s = s;
        }
    }
    double a = best_s / 2.0, b = std::min(1.0, best_s * 2.0);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > 1e-10) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - gr * (b - a); fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + gr * (b - a); fd = f(d);
        }
    }
    const double s = 0.5 * (a + b);
    if (s_star) *s_star = s;
    return f(s);
}

BitCommitReport security_parameters(const BitCommitParams& p) {
    p.validate();
    BitCommitReport r;
    r.m2 = p_at(p.p_x, 1) - p_at(p.p_x_etac, 0) + p_at(p.p_x, 0) - 3.0 * p.gamma;
    r.m3 = p.m3_vacuum_reading ? 1.0 - p_at(p.p_x_etac, 0) : p_multi(p.p_x_etac);
    r.L_prime = l_prime(p.epsilon, &r.s_star);

    r.delta = 2.0 * (p.e + p.beta / std::sqrt(1.0 - 2.0 * p.beta)) /
              (1.0 - 4.0 * std::sqrt(5.0) * p.beta);
    if (r.delta >= 0.5)
        throw ConfigError("bitcommit: delta >= 1/2, outside the entropy-bound domain");
    r.lambda = numlin::binary_entropy(r.delta) + 3.0 * p.beta * p.beta;

    r.condition_margin = r.m2 * r.L_prime - r.m3 * r.lambda;
    r.secure = r.m2 > 0.0 && r.condition_margin > 0.0;

    r.M1 = log2v(2.0 / p.epsilon) / (2.0 * p.gamma * p.gamma);
    r.M2 = r.m2 > 0.0 ? log2v(1.0 / p.epsilon) / (p.epsilon * r.m2) : 0.0;
    r.M3 = r.m3 - p.gamma > 0.0
               ? log2v(2.0 / p.epsilon) / ((r.m3 - p.gamma) * p.beta * p.beta)
               : 0.0;
    r.M4 = r.condition_margin > 0.0 ? p.S / r.condition_margin : 0.0;
    if (r.secure) r.N_min = std::max({r.M1, r.M2, r.M3, r.M4});
    return r;
}

BitCommitParams params_for(const SourceModel& source, double eta_c,
                           const BitCommitParams& defaults) {
    if (eta_c < 0.0 || eta_c > 1.0) throw ConfigError("bitcommit: eta_c outside [0,1]");
    if (!source.phase_randomized())
        throw AssumptionError(
            "bit-commitment analysis assumes phase-randomized inputs; only RP-PDS and LA/TPE "
            "QDS sources are supported, got " + source.describe());
    BitCommitParams p = defaults;
    p.p_x = sources::photon_number_coefficients(source);
    if (source.kind == SourceModel::Kind::qds) {
        const auto thinned =
            sources::thinned_populations(source.pop.as_array(), source.eta * eta_c);
        p.p_x_etac.assign(thinned.begin(), thinned.end());
    } else {
        SourceModel attenuated = source;
        attenuated.pds.mu *= eta_c;
        p.p_x_etac = sources::photon_number_coefficients(attenuated);
    }
    return p;
}

} // namespace qsb::bitcommit
