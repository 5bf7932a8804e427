// Dense primal-dual interior-point SDP solver with Nesterov-Todd scaling.
//
// The public interface (sdp.hpp) accepts complex Hermitian data; internally
// the problem is converted to one real symmetric PSD block via the standard
// embedding A -> [[Re A, -Im A], [Im A, Re A]] (which doubles traces), with
// inequality slacks appended as extra diagonal dimensions and the optional
// partial-trace equality expanded into sparse per-entry constraints.
#include "qsb/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>

namespace qsb::numlin {

namespace {

// ----- dense real symmetric helpers (row-major std::vector<double>) -----

using RVec = std::vector<double>;

RVec rmat_mul(const RVec& a, const RVec& b, int n) {
    RVec r(size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const double v = a[size_t(i) * n + k];
            if (v == 0.0) continue;
            const double* brow = &b[size_t(k) * n];
            double* rrow = &r[size_t(i) * n];
            for (int j = 0; j < n; ++j) rrow[j] += v * brow[j];
        }
    return r;
}

void rsymmetrize(RVec& a, int n) {
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double v = 0.5 * (a[size_t(i) * n + j] + a[size_t(j) * n + i]);
            a[size_t(i) * n + j] = v;
            a[size_t(j) * n + i] = v;
        }
}

// Cholesky A = L L^T (lower).  Returns false if A is not positive definite.
bool rchol(const RVec& a, int n, RVec& l) {
    l.assign(size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = a[size_t(i) * n + j];
            for (int k = 0; k < j; ++k) s -= l[size_t(i) * n + k] * l[size_t(j) * n + k];
            if (i == j) {
                if (s <= 0.0 || !std::isfinite(s)) return false;
                l[size_t(i) * n + i] = std::sqrt(s);
            } else {
                l[size_t(i) * n + j] = s / l[size_t(j) * n + j];
            }
        }
    }
    return true;
}

bool ris_pd(const RVec& a, int n) {
    RVec l;
    return rchol(a, n, l);
}

// Solve L L^T x = b in place.
void rchol_solve(const RVec& l, int n, RVec& x) {
    for (int i = 0; i < n; ++i) {
        double s = x[i];
        for (int k = 0; k < i; ++k) s -= l[size_t(i) * n + k] * x[k];
        x[i] = s / l[size_t(i) * n + i];
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = x[i];
        for (int k = i + 1; k < n; ++k) s -= l[size_t(k) * n + i] * x[k];
        x[i] = s / l[size_t(i) * n + i];
    }
}

// Cyclic Jacobi for real symmetric matrices; eigenvalues ascending.
void rsym_eig(RVec a, int n, RVec& w, RVec& v) {
    v.assign(size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i) v[size_t(i) * n + i] = 1.0;
    double fro2 = 0.0;
    for (double x : a) fro2 += x * x;
    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a[size_t(p) * n + q] * a[size_t(p) * n + q];
        if (off < 1e-26 * std::max(1.0, fro2)) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a[size_t(p) * n + q];
                if (std::abs(apq) < 1e-300) continue;
                const double app = a[size_t(p) * n + p];
                const double aqq = a[size_t(q) * n + q];
                const double tau = (app - aqq) / (2.0 * apq);
                const double t = (tau >= 0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (int i = 0; i < n; ++i) {
                    const double aip = a[size_t(i) * n + p], aiq = a[size_t(i) * n + q];
                    a[size_t(i) * n + p] = c * aip + s * aiq;
                    a[size_t(i) * n + q] = -s * aip + c * aiq;
                }
                for (int j = 0; j < n; ++j) {
                    const double apj = a[size_t(p) * n + j], aqj = a[size_t(q) * n + j];
                    a[size_t(p) * n + j] = c * apj + s * aqj;
                    a[size_t(q) * n + j] = -s * apj + c * aqj;
                }
                for (int i = 0; i < n; ++i) {
                    const double vip = v[size_t(i) * n + p], viq = v[size_t(i) * n + q];
                    v[size_t(i) * n + p] = c * vip + s * viq;
                    v[size_t(i) * n + q] = -s * vip + c * viq;
                }
            }
        }
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        return a[size_t(i) * n + i] < a[size_t(j) * n + j];
    });
    w.resize(n);
    RVec vs(size_t(n) * n);
    for (int k = 0; k < n; ++k) {
        w[k] = a[size_t(order[k]) * n + order[k]];
        for (int i = 0; i < n; ++i) vs[size_t(i) * n + k] = v[size_t(i) * n + order[k]];
    }
    v.swap(vs);
}

// Q f(w) Q^T for a spectral decomposition.
RVec rspectral_fn(const RVec& v, const RVec& w, int n, double (*fn)(double)) {
    RVec r(size_t(n) * n, 0.0);
    for (int k = 0; k < n; ++k) {
        const double f = fn(w[k]);
        if (f == 0.0) continue;
        for (int i = 0; i < n; ++i) {
            const double vik = v[size_t(i) * n + k] * f;
            if (vik == 0.0) continue;
            for (int j = 0; j < n; ++j) r[size_t(i) * n + j] += vik * v[size_t(j) * n + k];
        }
    }
    return r;
}

double fn_sqrt(double x) { return std::sqrt(std::max(x, 1e-300)); }
double fn_invsqrt(double x) { return 1.0 / std::sqrt(std::max(x, 1e-300)); }
double fn_inv(double x) { return 1.0 / ((x > 1e-300 || x < -1e-300) ? x : 1e-300); }

struct Triplet {
    int r, c;
    double v;
};

struct RealConstraint {
    std::vector<Triplet> entries;   // all nonzero entries (both triangles)
    std::vector<int> rows;          // sorted unique nonzero row indices
    double rhs = 0.0;
};

void finalize_rows(RealConstraint& c) {
    c.rows.clear();
    for (const auto& t : c.entries) c.rows.push_back(t.r);
    std::sort(c.rows.begin(), c.rows.end());
    c.rows.erase(std::unique(c.rows.begin(), c.rows.end()), c.rows.end());
}

double ctr(const RealConstraint& c, const RVec& x, int n) {
    double s = 0.0;
    for (const auto& t : c.entries) s += t.v * x[size_t(t.c) * n + t.r];
    return s;
}

// Largest step alpha in (0,1] keeping X + alpha dX positive definite:
// with X = L L^T, alpha = -1 / lambda_min(L^{-1} dX L^{-T}) when that
// eigenvalue is negative.  A tiny ridge is added if roundoff has pushed the
// iterate onto the cone boundary, so boundary iterates still admit a nonzero
// step along interior directions.
double max_step(const RVec& x, const RVec& dx, int n) {
    RVec xr = x;
    RVec l;
    double maxdiag = 1e-300;
    for (int i = 0; i < n; ++i) maxdiag = std::max(maxdiag, std::abs(x[size_t(i) * n + i]));
    double ridge = 0.0;
    while (!rchol(xr, n, l)) {
        ridge = (ridge == 0.0) ? 1e-14 * maxdiag : ridge * 100.0;
        if (ridge > maxdiag) return 0.0;
        for (int i = 0; i < n; ++i) xr[size_t(i) * n + i] = x[size_t(i) * n + i] + ridge;
    }
    // U = L^{-1} dX (forward solve down the columns of dX).
    RVec u = dx;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            double s = u[size_t(i) * n + j];
            for (int k = 0; k < i; ++k) s -= l[size_t(i) * n + k] * u[size_t(k) * n + j];
            u[size_t(i) * n + j] = s / l[size_t(i) * n + i];
        }
    // S = U L^{-T}: forward solve on the rows of U.
    RVec s = u;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double v = s[size_t(i) * n + j];
            for (int k = 0; k < j; ++k) v -= s[size_t(i) * n + k] * l[size_t(j) * n + k];
            s[size_t(i) * n + j] = v / l[size_t(j) * n + j];
        }
    rsymmetrize(s, n);
    RVec ws, qs;
    rsym_eig(s, n, ws, qs);
    const double lam_min = ws.front();
    if (!std::isfinite(lam_min)) return 0.0;
    if (lam_min >= -1e-12) return 1.0;
    return std::min(1.0, -1.0 / lam_min);
}

struct RealResult {
    RVec x;
    RVec y;
    double pobj = 0.0, dobj = 0.0;
    double pinf = 0.0, dinf = 0.0;
    SdpStatus status = SdpStatus::max_iterations;
    int iterations = 0;
};

// Equality-form solver: min C.X s.t. Tr(A_i X) = b_i, X PSD (dim n).
RealResult solve_real(const RVec& cobj, const std::vector<RealConstraint>& cons, int n,
                      const SdpOptions& opts) {
    const int m = int(cons.size());
    RealResult out;
    const bool verbose = std::getenv("QSB_SDP_VERBOSE") != nullptr;

    double maxb = 0.0;
    for (const auto& c : cons) maxb = std::max(maxb, std::abs(c.rhs));
    double cmax = 0.0;
    for (double v : cobj) cmax = std::max(cmax, std::abs(v));

    const double tau = 10.0 * std::max(1.0, maxb);
    RVec x(size_t(n) * n, 0.0), z(size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        x[size_t(i) * n + i] = tau;
        z[size_t(i) * n + i] = 10.0 * std::max(1.0, cmax);
    }
    RVec y(m, 0.0);

    RVec wx, qx, ws, qs;     // eigen data
    RVec mfac;               // Schur Cholesky factor
    int slow_steps = 0;

    for (int iter = 1; iter <= opts.max_iterations; ++iter) {
        // Residuals.
        RVec rd = cobj; // C - Z - A^T y
        for (size_t i = 0; i < rd.size(); ++i) rd[i] -= z[i];
        for (int i = 0; i < m; ++i)
            for (const auto& t : cons[i].entries) rd[size_t(t.r) * n + t.c] -= y[i] * t.v;
        RVec rp(m);
        for (int i = 0; i < m; ++i) rp[i] = cons[i].rhs - ctr(cons[i], x, n);

        double pobj = 0.0;
        for (size_t i = 0; i < x.size(); ++i) pobj += cobj[i] * x[i];
        double dobj = 0.0;
        for (int i = 0; i < m; ++i) dobj += cons[i].rhs * y[i];
        double gap = 0.0;
        for (size_t i = 0; i < x.size(); ++i) gap += x[i] * z[i]; // Tr(XZ)
        const double mu = gap / n;

        double pinf = 0.0;
        for (double r : rp) pinf = std::max(pinf, std::abs(r));
        pinf /= (1.0 + maxb);
        double dinf = 0.0;
        for (double r : rd) dinf = std::max(dinf, std::abs(r));
        dinf /= (1.0 + cmax);
        const double relgap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

        out.x = x;
        out.y = y;
        out.pobj = pobj;
        out.dobj = dobj;
        out.pinf = pinf;
        out.dinf = dinf;
        out.iterations = iter - 1;

        if (verbose) {
            RVec wdbg, qdbg;
            rsym_eig(x, n, wdbg, qdbg);
            const double xmin = wdbg.front();
            rsym_eig(z, n, wdbg, qdbg);
            const double zmin = wdbg.front();
            std::fprintf(stderr,
                         "[sdp] it=%3d pobj=%+.6e dobj=%+.6e pinf=%.2e dinf=%.2e mu=%.2e "
                         "xmin=%.2e zmin=%.2e\n",
                         iter, pobj, dobj, pinf, dinf, mu, xmin, zmin);
        }
        if (pinf <= opts.feas_tol && dinf <= opts.feas_tol && relgap <= opts.gap_tol) {
            out.status = SdpStatus::solved;
            return out;
        }
        // Divergence heuristics: interpret as infeasibility of the pair.
        double trx = 0.0;
        for (int i = 0; i < n; ++i) trx += x[size_t(i) * n + i];
        if (!std::isfinite(trx) || !std::isfinite(gap) || trx > 1e10 * n * tau ||
            slow_steps >= 8) {
            out.status = SdpStatus::infeasible;
            return out;
        }

        // Nesterov-Todd scaling point W: W Z W = X.
        rsym_eig(x, n, wx, qx);
        RVec xh = rspectral_fn(qx, wx, n, fn_sqrt);
        RVec xinv = rspectral_fn(qx, wx, n, fn_inv);
        RVec s = rmat_mul(rmat_mul(xh, z, n), xh, n);
        rsymmetrize(s, n);
        rsym_eig(s, n, ws, qs);
        RVec sinvh = rspectral_fn(qs, ws, n, fn_invsqrt);
        RVec w = rmat_mul(rmat_mul(xh, sinvh, n), xh, n);
        rsymmetrize(w, n);
        RVec zinv = rmat_mul(rmat_mul(w, xinv, n), w, n);
        rsymmetrize(zinv, n);

        // Schur complement M_ij = Tr(A_i W A_j W), assembled sparsely.
        std::vector<RVec> bws(m);
        for (int j = 0; j < m; ++j) {
            RVec t(size_t(n) * n, 0.0);
            for (const auto& e : cons[j].entries) {
                const double* wrow = &w[size_t(e.c) * n];
                double* trow = &t[size_t(e.r) * n];
                for (int k = 0; k < n; ++k) trow[k] += e.v * wrow[k];
            }
            RVec b(size_t(n) * n, 0.0);
            for (int r : cons[j].rows) {
                const double* trow = &t[size_t(r) * n];
                for (int i = 0; i < n; ++i) {
                    const double wir = w[size_t(i) * n + r];
                    if (wir == 0.0) continue;
                    double* brow = &b[size_t(i) * n];
                    for (int k = 0; k < n; ++k) brow[k] += wir * trow[k];
                }
            }
            bws[j] = std::move(b);
        }
        RVec mmat(size_t(m) * m, 0.0);
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) {
                double v = 0.0;
                for (const auto& e : cons[i].entries) v += e.v * bws[j][size_t(e.c) * n + e.r];
                mmat[size_t(i) * m + j] = v;
                mmat[size_t(j) * m + i] = v;
            }
        // Factor M (with a jitter fallback against near-dependence).
        double jitter = 0.0;
        double mdiag = 1e-300;
        for (int i = 0; i < m; ++i) mdiag = std::max(mdiag, mmat[size_t(i) * m + i]);
        while (!rchol(mmat, m, mfac)) {
            jitter = (jitter == 0.0) ? 1e-14 * mdiag : jitter * 100.0;
            if (jitter > 1e-4 * mdiag) {
                if (verbose) std::fprintf(stderr, "[sdp] Schur factorization failed at it=%d\n", iter);
                out.status = SdpStatus::max_iterations;
                return out;
            }
            for (int i = 0; i < m; ++i) mmat[size_t(i) * m + i] += jitter;
        }

        RVec wrdw = rmat_mul(rmat_mul(w, rd, n), w, n);
        rsymmetrize(wrdw, n);

        // Direction for a given centering sigma.
        auto direction = [&](double sigma, RVec& dx, RVec& dz, RVec& dy) {
            dy.assign(m, 0.0);
            for (int i = 0; i < m; ++i) {
                double v = rp[i] + ctr(cons[i], wrdw, n) + ctr(cons[i], x, n);
                if (sigma != 0.0) v -= sigma * mu * ctr(cons[i], zinv, n);
                dy[i] = v;
            }
            rchol_solve(mfac, m, dy);
            dz = rd;
            for (int i = 0; i < m; ++i)
                for (const auto& t : cons[i].entries) dz[size_t(t.r) * n + t.c] -= dy[i] * t.v;
            rsymmetrize(dz, n);
            RVec wdzw = rmat_mul(rmat_mul(w, dz, n), w, n);
            dx.assign(size_t(n) * n, 0.0);
            for (size_t i = 0; i < dx.size(); ++i) dx[i] = sigma * mu * zinv[i] - x[i] - wdzw[i];
            rsymmetrize(dx, n);
        };

        // Predictor (affine) step fixes the centering parameter.
        RVec dx, dz, dy;
        direction(0.0, dx, dz, dy);
        const double ap_aff = max_step(x, dx, n);
        const double ad_aff = max_step(z, dz, n);
        double gap_aff = 0.0;
        for (size_t i = 0; i < x.size(); ++i)
            gap_aff += (x[i] + ap_aff * dx[i]) * (z[i] + ad_aff * dz[i]);
        double sigma = std::pow(std::max(gap_aff, 0.0) / gap, 3.0);
        sigma = std::clamp(sigma, 1e-6, 0.999999);

        // Corrector with the adapted sigma (reuses the Schur factorization).
        direction(sigma, dx, dz, dy);
        const double ap = 0.98 * max_step(x, dx, n);
        const double ad = 0.98 * max_step(z, dz, n);
        for (size_t i = 0; i < x.size(); ++i) x[i] += ap * dx[i];
        for (size_t i = 0; i < z.size(); ++i) z[i] += ad * dz[i];
        for (int i = 0; i < m; ++i) y[i] += ad * dy[i];

        if (verbose) {
            RVec xz = rmat_mul(x, z, n);
            double trxz = 0.0;
            for (int i = 0; i < n; ++i) trxz += xz[size_t(i) * n + i];
            double asym_x = 0.0, asym_z = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    asym_x = std::max(asym_x,
                                      std::abs(x[size_t(i) * n + j] - x[size_t(j) * n + i]));
                    asym_z = std::max(asym_z,
                                      std::abs(z[size_t(i) * n + j] - z[size_t(j) * n + i]));
                }
            std::fprintf(stderr,
                         "[sdp]        ap=%.3e ad=%.3e sigma=%.3e jitter=%.1e trxz=%.3e "
                         "asym=%.1e/%.1e\n",
                         ap, ad, sigma, jitter, trxz, asym_x, asym_z);
        }
        slow_steps = (std::max(ap, ad) < 1e-8) ? slow_steps + 1 : 0;
    }
    out.status = SdpStatus::max_iterations;
    return out;
}

} // namespace

const char* to_string(SdpStatus s) {
    switch (s) {
        case SdpStatus::solved: return "solved";
        case SdpStatus::infeasible: return "infeasible";
        default: return "max_iterations";
    }
}

SdpSolution sdp_solve(const SdpProblem& problem, const SdpOptions& opts) {
    const int n = problem.objective.rows();
    if (problem.objective.cols() != n)
        throw ConfigError("sdp_solve: objective must be square");
    if (!problem.objective.is_hermitian(1e-10))
        throw ConfigError("sdp_solve: objective must be Hermitian");

    // Collect complex equality constraints (explicit + partial trace).
    std::vector<LinearConstraint> eqs = problem.eq;
    if (problem.partial_trace_eq) {
        const auto& pt = *problem.partial_trace_eq;
        const int e = pt.env_dim;
        if (e <= 0 || n % e != 0)
            throw ConfigError("sdp_solve: partial-trace environment dimension must divide the variable dimension");
        const int t = n / e;
        if (pt.target.rows() != t || pt.target.cols() != t)
            throw ConfigError("sdp_solve: partial-trace target has wrong dimension");
        for (int a = 0; a < t; ++a)
            for (int b = a; b < t; ++b) {
                LinearConstraint re;
                re.matrix = Mat::zeros(n, n);
                for (int k = 0; k < e; ++k) {
                    re.matrix(k * t + a, k * t + b) += 0.5;
                    re.matrix(k * t + b, k * t + a) += 0.5;
                }
                re.rhs = pt.target(a, b).real();
                eqs.push_back(std::move(re));
                if (a != b) {
                    LinearConstraint im;
                    im.matrix = Mat::zeros(n, n);
                    for (int k = 0; k < e; ++k) {
                        im.matrix(k * t + a, k * t + b) += cxd(0.0, 0.5);
                        im.matrix(k * t + b, k * t + a) += cxd(0.0, -0.5);
                    }
                    im.rhs = pt.target(a, b).imag();
                    eqs.push_back(std::move(im));
                }
            }
    }

    const int nslack = int(problem.ineq.size());
    const int nr = 2 * n + nslack;
    const double obj_sign = problem.maximize ? -1.0 : 1.0;

    // Embed a complex Hermitian matrix into real triplets at block offset 0.
    auto embed = [&](const Mat& a, RealConstraint& c) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const cxd v = a(i, j);
                if (v.real() != 0.0) {
                    c.entries.push_back({i, j, v.real()});
                    c.entries.push_back({i + n, j + n, v.real()});
                }
                if (v.imag() != 0.0) {
                    c.entries.push_back({i, j + n, -v.imag()});
                    c.entries.push_back({i + n, j, v.imag()});
                }
            }
    };

    RVec cobj(size_t(nr) * nr, 0.0);
    {
        RealConstraint tmp;
        embed(problem.objective, tmp);
        for (const auto& t : tmp.entries) cobj[size_t(t.r) * nr + t.c] = obj_sign * t.v;
    }

    std::vector<RealConstraint> cons;
    cons.reserve(eqs.size() + problem.ineq.size());
    for (const auto& e : eqs) {
        if (e.matrix.rows() != n || !e.matrix.is_hermitian(1e-10))
            throw ConfigError("sdp_solve: equality constraint matrix invalid");
        RealConstraint c;
        embed(e.matrix, c);
        c.rhs = 2.0 * e.rhs; // Tr(embed(A) embed(X)) = 2 Tr(A X)
        finalize_rows(c);
        cons.push_back(std::move(c));
    }
    for (int j = 0; j < nslack; ++j) {
        const auto& iq = problem.ineq[j];
        if (iq.matrix.rows() != n || !iq.matrix.is_hermitian(1e-10))
            throw ConfigError("sdp_solve: inequality constraint matrix invalid");
        RealConstraint c;
        embed(iq.matrix, c);
        c.entries.push_back({2 * n + j, 2 * n + j, 1.0});
        c.rhs = 2.0 * iq.rhs;
        finalize_rows(c);
        cons.push_back(std::move(c));
    }

    // Fix row maps; note embedded entries were appended in (r,c,v) form already.
    const RealResult rr = solve_real(cobj, cons, nr, opts);

    SdpSolution sol;
    sol.status = rr.status;
    sol.iterations = rr.iterations;
    sol.primal_residual = rr.pinf;
    sol.dual_residual = rr.dinf;
    sol.X = Mat(n, n);
    if (!rr.x.empty()) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double re = 0.5 * (rr.x[size_t(i) * nr + j] + rr.x[size_t(i + n) * nr + j + n]);
                const double im = 0.5 * (rr.x[size_t(i + n) * nr + j] - rr.x[size_t(i) * nr + j + n]);
                sol.X(i, j) = cxd(re, im);
            }
        sol.X = sol.X.hermitize();
    }
    sol.primal_value = obj_sign * rr.pobj / 2.0;
    sol.dual_value = obj_sign * rr.dobj / 2.0;
    sol.gap = std::abs(sol.primal_value - sol.dual_value);
    return sol;
}

} // namespace qsb::numlin
