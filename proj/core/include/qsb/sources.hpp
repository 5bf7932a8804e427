// qsb::sources -- photon-number source models: quantum-dot populations from
// measured correlation quantities, Table II presets, Poisson coefficient
// families (fixed-phase 4-dim states, randomized-phase 7-dim states),
// loss-thinned quantum-dot coefficients, and the shared source-efficiency
// definition.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "qsb/numlin.hpp"

namespace qsb::sources {

using numlin::Mat;
using numlin::cxd;

enum class Pumping { RE, LA, TPE };

const char* to_string(Pumping p);
Pumping pumping_from_string(const std::string& name);

struct QdPopulations {
    double p0 = 1.0, p1 = 0.0, p2 = 0.0, p3 = 0.0;
    Pumping pumping = Pumping::RE;
    bool coherent = true; // resonant excitation keeps photon-number coherence

    std::array<double, 4> as_array() const { return {p0, p1, p2, p3}; }
};

enum class PdsPhase { fixed, randomized };

struct PdsModel {
    double mu = 0.0;
    PdsPhase phase = PdsPhase::randomized;
};

// Vacuum / single / multi (>=2) photon probabilities after loss grouping.
struct EffectiveCoefficients {
    double P0 = 1.0, P1 = 0.0, P_multi = 0.0;
};

// Table II presets (optimal pulse configurations: RE 3 ps, LA 8 ps, TPE 12 ps).
QdPopulations preset(Pumping p);

// Eq. A17 inversion: p1 = B~ - 2 P2 - 3 P3, p2 = P2 - P3, p3 = P3.
// Rejects inconsistent measurement inputs (any p_i outside [0,1]).
QdPopulations populations_from_correlations(double b_tilde, double p2_meas, double p3_meas,
                                            Pumping pumping);

// B = p1+p2+p3 (brightness), P = p1/B (single-photon purity).
struct BrightnessPurity {
    double B = 0.0;
    double P = 0.0;
    bool purity_defined = true;
};
BrightnessPurity brightness_purity(const QdPopulations& pop);

EffectiveCoefficients poisson_coefficients(double mu);

// Full binomial thinning of {p_n} by eta, grouped into (0, 1, >=2).
EffectiveCoefficients qds_effective_coefficients(const QdPopulations& pop, double eta);

// k-resolved binomial thinning (k = 0..3).
std::array<double, 4> thinned_populations(const std::array<double, 4>& p, double eta);

// Fixed-phase PDS state of index k in the 4-dim orthonormal basis {b0..b3}
// (Eq. B3/B4 coefficients with the i, -1, -i phase pattern); alpha is the
// amplitude of the phase-carrying mode.
std::array<cxd, 4> pds_fixed_phase_state(double alpha, int k);

// Phase-randomized PDS state of index k in the 7-dim basis
// {v, q0, q1, m0..m3}: P(0)|v><v| + P(1)|qubit_k><qubit_k| + P(>=2)|m_k><m_k|.
Mat pds_randomized_state(double mu, int k);

// BB84 qubit state of index k ({+, +i, -, -i}) as a 2-vector.
std::array<cxd, 2> bb84_qubit(int k);

double source_efficiency(const PdsModel& model);
double source_efficiency(const QdPopulations& pop, double eta);

// Unified source descriptor used by protocol modules and the CLI.
struct SourceModel {
    enum class Kind { qds, pds } kind = Kind::qds;
    QdPopulations pop;   // valid when kind == qds
    double eta = 1.0;    // QDS collection efficiency
    PdsModel pds;        // valid when kind == pds

    bool phase_randomized() const {
        return kind == Kind::pds ? pds.phase == PdsPhase::randomized : !pop.coherent;
    }
    std::string describe() const;
};

SourceModel qds_source(Pumping p, double eta);
SourceModel pds_source(double mu, PdsPhase phase = PdsPhase::randomized);

// Photon-number coefficients seen by the channel: exact for QDS (k <= 3),
// Poisson tail to `cutoff` for PDS.
std::vector<double> photon_number_coefficients(const SourceModel& s, int pds_cutoff = 40);

} // namespace qsb::sources
