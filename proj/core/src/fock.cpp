#include "qsb/fock.hpp"

#include <cmath>
#include <sstream>

namespace qsb::fock {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

double binom(int n, int k) {
    return factorial(n) / (factorial(k) * factorial(n - k));
}

} // namespace

int FockBasis::index(const std::vector<int>& occ) const {
    for (size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == occ) return int(i);
    return -1;
}

std::string FockBasis::label_string(int i) const {
    std::string s = "|";
    for (size_t m = 0; m < labels[i].size(); ++m) {
        if (m) s += " ";
        s += std::to_string(labels[i][m]);
    }
    return s + ">";
}

FockBasis fock_basis(int modes, int max_total) {
    if (modes < 1 || max_total < 0)
        throw ConfigError("fock_basis: invalid dimensions");
    FockBasis b;
    b.modes = modes;
    b.max_total = max_total;
    std::vector<int> occ(modes, 0);
    // Lexicographic enumeration (counting with a per-position budget).
    while (true) {
        int total = 0;
        for (int v : occ) total += v;
        if (total <= max_total) b.labels.push_back(occ);
        int pos = modes - 1;
        while (pos >= 0 && occ[pos] == max_total) occ[pos--] = 0;
        if (pos < 0) break;
        ++occ[pos];
    }
    std::sort(b.labels.begin(), b.labels.end());
    return b;
}

double PureState::norm() const {
    double s = 0.0;
    for (const auto& a : amplitudes) s += std::norm(a);
    return std::sqrt(s);
}

PureState apply_beamsplitter(const PureState& state, int mode_a, int mode_b, double r) {
    const auto& basis = state.basis;
    if (mode_a == mode_b || mode_a < 0 || mode_b < 0 || mode_a >= basis.modes ||
        mode_b >= basis.modes)
        throw ConfigError("apply_beamsplitter: invalid mode indices");
    if (r < 0.0 || r > 1.0) throw ConfigError("apply_beamsplitter: reflectivity outside [0,1]");

    const double sr = std::sqrt(r), st = std::sqrt(1.0 - r);
    PureState out;
    out.basis = basis;
    out.amplitudes.assign(basis.dim(), 0.0);

    // a_k^dag -> sr a_k^dag + st a_l^dag ; a_l^dag -> st a_k^dag - sr a_l^dag.
    // Expand each monomial (a^dag)^na (b^dag)^nb with the standard sqrt(n!)
    // occupation normalization.
    for (int idx = 0; idx < basis.dim(); ++idx) {
        const cxd amp = state.amplitudes[idx];
        if (amp == 0.0) continue;
        const auto& occ = basis.labels[idx];
        const int na = occ[mode_a], nb = occ[mode_b];
        const double pref = 1.0 / std::sqrt(factorial(na) * factorial(nb));
        for (int i = 0; i <= na; ++i) {
            for (int j = 0; j <= nb; ++j) {
                const int ka = i + j;          // photons ending in mode_a
                const int kb = na + nb - ka;   // photons ending in mode_b
                const double coeff = binom(na, i) * binom(nb, j) *
                                     std::pow(sr, i) * std::pow(st, na - i) *
                                     std::pow(st, j) * std::pow(-sr, nb - j);
                if (coeff == 0.0) continue;
                std::vector<int> focc = occ;
                focc[mode_a] = ka;
                focc[mode_b] = kb;
                const int fidx = basis.index(focc);
                if (fidx < 0)
                    throw ConfigError("apply_beamsplitter: photon-number cutoff violated");
                out.amplitudes[fidx] +=
                    amp * pref * coeff * std::sqrt(factorial(ka) * factorial(kb));
            }
        }
    }
    return out;
}

PureState apply_phase(const PureState& state, int mode, double phi) {
    if (mode < 0 || mode >= state.basis.modes)
        throw ConfigError("apply_phase: invalid mode index");
    PureState out = state;
    for (int idx = 0; idx < state.basis.dim(); ++idx) {
        const int n = state.basis.labels[idx][mode];
        out.amplitudes[idx] *= std::exp(cxd(0.0, n * phi));
    }
    return out;
}

DensityMatrix density_from_pure(const PureState& state) {
    DensityMatrix dm;
    dm.basis = state.basis;
    dm.rho = numlin::outer(state.amplitudes, state.amplitudes);
    return dm;
}

DensityMatrix partial_trace(const DensityMatrix& state, const std::vector<int>& keep) {
    const auto& basis = state.basis;
    if (keep.empty()) throw ConfigError("partial_trace: keep set must be nonempty");
    for (int k : keep)
        if (k < 0 || k >= basis.modes) throw ConfigError("partial_trace: invalid mode index");

    FockBasis out_basis = fock_basis(int(keep.size()), basis.max_total);
    DensityMatrix out;
    out.basis = out_basis;
    out.rho = Mat::zeros(out_basis.dim(), out_basis.dim());

    std::vector<int> traced;
    for (int m = 0; m < basis.modes; ++m)
        if (std::find(keep.begin(), keep.end(), m) == keep.end()) traced.push_back(m);

    auto project = [&](const std::vector<int>& occ, const std::vector<int>& modes) {
        std::vector<int> sub;
        sub.reserve(modes.size());
        for (int m : modes) sub.push_back(occ[m]);
        return sub;
    };

    for (int i = 0; i < basis.dim(); ++i)
        for (int j = 0; j < basis.dim(); ++j) {
            if (project(basis.labels[i], traced) != project(basis.labels[j], traced)) continue;
            const int oi = out_basis.index(project(basis.labels[i], keep));
            const int oj = out_basis.index(project(basis.labels[j], keep));
            out.rho(oi, oj) += state.rho(i, j);
        }
    return out;
}

DensityMatrix encode_state(const std::array<double, 4>& populations, double eta, double phi,
                           double y, bool coherent) {
    double sum = 0.0;
    for (double p : populations) {
        if (p < -1e-12) throw ConfigError("encode_state: negative population");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ConfigError("encode_state: populations must sum to 1");
    if (eta < 0.0 || eta > 1.0) throw ConfigError("encode_state: eta outside [0,1]");
    if (y < 0.0 || y > 1.0) throw ConfigError("encode_state: y outside [0,1]");

    const int max_total = 3;
    PureState psi;
    psi.basis = fock_basis(3, max_total);
    psi.amplitudes.assign(psi.basis.dim(), 0.0);
    for (int n = 0; n <= max_total; ++n) {
        if (populations[n] == 0.0) continue;
        std::vector<int> occ = {n, 0, 0};
        psi.amplitudes[psi.basis.index(occ)] = std::sqrt(populations[n]);
    }

    psi = apply_beamsplitter(psi, 0, 2, eta);  // collection loss into mode 2
    psi = apply_beamsplitter(psi, 0, 1, y);
    psi = apply_phase(psi, 1, phi);
    psi = apply_beamsplitter(psi, 0, 1, y);

    DensityMatrix traced = partial_trace(density_from_pure(psi), {0, 1});
    if (!coherent) {
        const auto& b = traced.basis;
        for (int i = 0; i < b.dim(); ++i)
            for (int j = 0; j < b.dim(); ++j) {
                int ni = 0, nj = 0;
                for (int v : b.labels[i]) ni += v;
                for (int v : b.labels[j]) nj += v;
                if (ni != nj) traced.rho(i, j) = 0.0;
            }
    }
    return traced;
}

std::string to_text(const DensityMatrix& dm) {
    std::ostringstream os;
    os.precision(17);
    for (int i = 0; i < dm.basis.dim(); ++i) {
        if (i) os << " ";
        os << dm.basis.label_string(i);
    }
    os << "\n";
    for (int i = 0; i < dm.basis.dim(); ++i) {
        for (int j = 0; j < dm.basis.dim(); ++j) {
            if (j) os << " ";
            os << dm.rho(i, j).real() << "," << dm.rho(i, j).imag();
        }
        os << "\n";
    }
    return os.str();
}

} // namespace qsb::fock
