#include "qsb/sources.hpp"

#include <cmath>

#include "qsb/errors.hpp"

namespace qsb::sources {

namespace {

double binom(int n, int k) {
    double f = 1.0;
    for (int i = 0; i < k; ++i) f = f * (n - i) / (i + 1);
    return f;
}

} // namespace

const char* to_string(Pumping p) {
    switch (p) {
        case Pumping::RE: return "RE";
        case Pumping::LA: return "LA";
        default: return "TPE";
    }
}

Pumping pumping_from_string(const std::string& name) {
    if (name == "RE" || name == "re") return Pumping::RE;
    if (name == "LA" || name == "la") return Pumping::LA;
    if (name == "TPE" || name == "tpe") return Pumping::TPE;
    throw ConfigError("unknown pumping scheme: " + name);
}

QdPopulations preset(Pumping p) {
    QdPopulations q;
    q.pumping = p;
    switch (p) {
        case Pumping::RE:  // 3 ps pulse, resonant excitation (coherent)
            q.p1 = 0.9275;
            q.p2 = 0.0091;
            q.p3 = 1e-8;
            q.coherent = true;
            break;
        case Pumping::LA:  // 8 ps, phonon-assisted
            q.p1 = 0.8219;
            q.p2 = 0.0180;
            q.p3 = 1e-7;
            q.coherent = false;
            break;
        case Pumping::TPE: // 12 ps, two-photon excitation (p3 = 0 exactly)
            q.p1 = 0.9514;
            q.p2 = 0.0012;
            q.p3 = 0.0;
            q.coherent = false;
            break;
    }
    q.p0 = 1.0 - q.p1 - q.p2 - q.p3;
    return q;
}

QdPopulations populations_from_correlations(double b_tilde, double p2_meas, double p3_meas,
                                            Pumping pumping) {
    QdPopulations q;
    q.pumping = pumping;
    q.coherent = (pumping == Pumping::RE);
    q.p1 = b_tilde - 2.0 * p2_meas - 3.0 * p3_meas;
    q.p2 = p2_meas - p3_meas;
    q.p3 = p3_meas;
    q.p0 = 1.0 - q.p1 - q.p2 - q.p3;
    for (double p : {q.p0, q.p1, q.p2, q.p3})
        if (p < -1e-12 || p > 1.0 + 1e-12)
            throw ConfigError("populations_from_correlations: inconsistent measurement inputs");
    return q;
}

BrightnessPurity brightness_purity(const QdPopulations& pop) {
    BrightnessPurity r;
    r.B = pop.p1 + pop.p2 + pop.p3;
    if (r.B > 0.0) {
        r.P = pop.p1 / r.B;
    } else {
        r.purity_defined = false;
    }
    return r;
}

EffectiveCoefficients poisson_coefficients(double mu) {
    if (mu < 0.0) throw ConfigError("poisson_coefficients: negative mean photon number");
    EffectiveCoefficients c;
    c.P0 = std::exp(-mu);
    c.P1 = mu * std::exp(-mu);
    c.P_multi = 1.0 - (1.0 + mu) * std::exp(-mu);
    return c;
}

std::array<double, 4> thinned_populations(const std::array<double, 4>& p, double eta) {
    std::array<double, 4> out{0.0, 0.0, 0.0, 0.0};
    for (int n = 0; n <= 3; ++n)
        for (int k = 0; k <= n; ++k)
            out[k] += p[n] * binom(n, k) * std::pow(eta, k) * std::pow(1.0 - eta, n - k);
    return out;
}

EffectiveCoefficients qds_effective_coefficients(const QdPopulations& pop, double eta) {
    if (eta < 0.0 || eta > 1.0)
        throw ConfigError("qds_effective_coefficients: eta outside [0,1]");
    const auto t = thinned_populations(pop.as_array(), eta);
    EffectiveCoefficients c;
    c.P0 = t[0];
    c.P1 = t[1];
    c.P_multi = t[2] + t[3];
    return c;
}

std::array<cxd, 2> bb84_qubit(int k) {
    const double s = 1.0 / std::sqrt(2.0);
    switch (k & 3) {
        case 0: return {s, s};                // |+>
        case 1: return {s, cxd(0.0, s)};      // |+i>
        case 2: return {s, -s};               // |->
        default: return {s, cxd(0.0, -s)};    // |-i>
    }
}

std::array<cxd, 4> pds_fixed_phase_state(double alpha, int k) {
    if (alpha < 0.0) throw ConfigError("pds_fixed_phase_state: negative alpha");
    const double x = alpha * alpha;
    // weight of the photon-number residue class n = j (mod 4) in a coherent
    // state of mean photon number x: e^{-x} (cosh x +/- cos x)/2 etc.
    const double pref = 0.5 * std::exp(-x);
    const std::array<double, 4> b = {
        std::sqrt(std::max(pref * (std::cosh(x) + std::cos(x)), 0.0)),
        std::sqrt(std::max(pref * (std::sinh(x) + std::sin(x)), 0.0)),
        std::sqrt(std::max(pref * (std::cosh(x) - std::cos(x)), 0.0)),
        std::sqrt(std::max(pref * (std::sinh(x) - std::sin(x)), 0.0))};
    const cxd ik = std::pow(cxd(0.0, 1.0), k);
    std::array<cxd, 4> v;
    cxd ph = 1.0;
    for (int j = 0; j < 4; ++j) {
        v[j] = b[j] * ph;  // phase pattern 1, i^k, (i^k)^2, (i^k)^3
        ph *= ik;
    }
    return v;
}

Mat pds_randomized_state(double mu, int k) {
    const auto c = poisson_coefficients(mu);
    Mat rho = Mat::zeros(7, 7);
    rho(0, 0) = c.P0;                          // |v><v|
    const auto q = bb84_qubit(k);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) rho(1 + i, 1 + j) = c.P1 * q[i] * std::conj(q[j]);
    rho(3 + (k & 3), 3 + (k & 3)) = c.P_multi; // distinguishable multiphoton flag
    return rho;
}

double source_efficiency(const PdsModel& model) {
    return 1.0 - std::exp(-model.mu);
}

double source_efficiency(const QdPopulations& pop, double eta) {
    const auto p = pop.as_array();
    double vac = 0.0;
    for (int n = 0; n <= 3; ++n) vac += p[n] * std::pow(1.0 - eta, n);
    return 1.0 - vac;
}

std::string SourceModel::describe() const {
    if (kind == Kind::pds) {
        return std::string(pds.phase == PdsPhase::randomized ? "RP-PDS" : "FP-PDS") +
               " mu=" + std::to_string(pds.mu);
    }
    return std::string(to_string(pop.pumping)) + " QDS eta=" + std::to_string(eta) +
           (pop.coherent ? " (coherent)" : " (incoherent)");
}

SourceModel qds_source(Pumping p, double eta) {
    if (eta < 0.0 || eta > 1.0) throw ConfigError("qds_source: eta outside [0,1]");
    SourceModel s;
    s.kind = SourceModel::Kind::qds;
    s.pop = preset(p);
    s.eta = eta;
    return s;
}

SourceModel pds_source(double mu, PdsPhase phase) {
    if (mu < 0.0) throw ConfigError("pds_source: negative mu");
    SourceModel s;
    s.kind = SourceModel::Kind::pds;
    s.pds.mu = mu;
    s.pds.phase = phase;
    return s;
}

std::vector<double> photon_number_coefficients(const SourceModel& s, int pds_cutoff) {
    if (s.kind == SourceModel::Kind::qds) {
        const auto t = thinned_populations(s.pop.as_array(), s.eta);
        return {t[0], t[1], t[2], t[3]};
    }
    std::vector<double> p(pds_cutoff + 1);
    const double mu = s.pds.mu;
    double term = std::exp(-mu);
    for (int k = 0; k <= pds_cutoff; ++k) {
        p[k] = term;
        term *= mu / (k + 1);
    }
    return p;
}

} // namespace qsb::sources
