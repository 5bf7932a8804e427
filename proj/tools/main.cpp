// qsb -- command-line front end over the qsb core library.
//
// Subcommands: bb84, decoy, twinfield, tokens, coinflip, bitcommit, figures,
// selftest.  Results are written as CSV with a commented metadata header that
// echoes the configuration and the recorded analysis assumptions, so every
// artifact is self-describing.  Sweeps run on a worker pool; rows are gathered
// by index, so the output is byte-identical for any worker count.
//
// Exit codes: 0 success, 2 config error, 3 assumption-violation rejection,
// 4 solver failure.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "qsb/bitcommit.hpp"
#include "qsb/coinflip.hpp"
#include "qsb/errors.hpp"
#include "qsb/fock.hpp"
#include "qsb/qkd.hpp"
#include "qsb/sdp.hpp"
#include "qsb/sources.hpp"
#include "qsb/tokens.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

// Recorded analysis assumptions embedded in every CSV (self-describing output).
const char* kAssumptionLog[] = {
    "dark-count error e0 = 1/2",
    "entropies and code lengths in bits (log base 2)",
    "unnormalized Choi convention: Tr_out J = 1_in",
    "bit-commitment m3 = P_{x eta_c}(>=2) (vacuum reading available via m3_vacuum)",
    "Mach-Zehnder beamsplitter H^(r) = [[sqrt r, sqrt(1-r)], [sqrt(1-r), -sqrt r]]",
    "coin flipping: honest click probability excludes collection efficiency;"
    " P_ab = z_target + e with e the error-rate contribution",
    "token SDP allowed loss floored at 1e-7 (interior-point strict feasibility)",
};

struct Cli {
    std::string source = "tpe";
    double eta = 1.0;
    double mu = 0.1;
    double distance = 0.0;
    double etac = 1.0;
    std::vector<std::string> sweep; // VAR MIN MAX STEPS
    std::string out;
    int workers = 1;

    // channel overrides
    qsb::qkd::ChannelParams channel;
    qsb::qkd::TwinFieldParams tf;

    // bit-commitment overrides
    qsb::bitcommit::BitCommitParams bc;
    bool m3_vacuum = false;

    std::string figure; // figures subcommand id
};

struct SweepSpec {
    std::string var;
    double lo = 0.0, hi = 0.0;
    int steps = 0;
    std::vector<double> values;
};

SweepSpec parse_sweep(const std::vector<std::string>& raw,
                      const std::vector<std::string>& allowed) {
    SweepSpec s;
    if (raw.size() != 4) throw qsb::ConfigError("--sweep expects VAR MIN MAX STEPS");
    s.var = raw[0];
    bool ok = false;
    for (const auto& a : allowed) ok = ok || a == s.var;
    if (!ok) {
        std::string msg = "sweep variable '" + s.var + "' not valid here; expected one of:";
        for (const auto& a : allowed) msg += " " + a;
        throw qsb::ConfigError(msg);
    }
    try {
        s.lo = std::stod(raw[1]);
        s.hi = std::stod(raw[2]);
        s.steps = std::stoi(raw[3]);
    } catch (const std::exception&) {
        throw qsb::ConfigError("--sweep bounds must be numeric");
    }
    if (!(s.lo <= s.hi) || !std::isfinite(s.lo) || !std::isfinite(s.hi))
        throw qsb::ConfigError("--sweep requires finite MIN <= MAX");
    if (s.steps < 2) throw qsb::ConfigError("--sweep requires STEPS >= 2");
    s.values.resize(s.steps);
    for (int i = 0; i < s.steps; ++i)
        s.values[i] = s.lo + (s.hi - s.lo) * double(i) / double(s.steps - 1);
    return s;
}

qsb::sources::SourceModel make_source(const Cli& cli) {
    using namespace qsb::sources;
    const std::string& s = cli.source;
    if (s == "re" || s == "re-coherent") return qds_source(Pumping::RE, cli.eta);
    if (s == "la") return qds_source(Pumping::LA, cli.eta);
    if (s == "tpe") return qds_source(Pumping::TPE, cli.eta);
    if (s == "pds" || s == "rp-pds") return pds_source(cli.mu, PdsPhase::randomized);
    if (s == "fp-pds") return pds_source(cli.mu, PdsPhase::fixed);
    throw qsb::ConfigError("unknown source preset '" + s +
                           "' (expected re, la, tpe, rp-pds, fp-pds)");
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Run fn(i) for i in [0, n) on `workers` threads; output order is fixed by
// index, so the result is independent of the worker count.
template <typename Fn>
std::vector<std::string> pool_rows(int n, int workers, Fn fn) {
    std::vector<std::string> rows(n);
    if (workers < 1) throw qsb::ConfigError("--workers must be >= 1");
    workers = std::min(workers, n);
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex err_mu;
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                rows[i] = fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (int w = 0; w < workers; ++w) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return rows;
}

struct CsvDocument {
    std::vector<std::pair<std::string, std::string>> meta;
    std::string header;
    std::vector<std::string> rows;
};

void write_csv(const std::string& path, const CsvDocument& doc) {
    std::ostringstream os;
    os << "# qsb-toolkit " << kVersion << "\n";
    for (const auto& [k, v] : doc.meta) os << "# " << k << ": " << v << "\n";
    for (const char* a : kAssumptionLog) os << "# assumption: " << a << "\n";
    os << doc.header << "\n";
    for (const auto& r : doc.rows) os << r << "\n";

    if (path.empty() || path == "-") {
        std::cout << os.str();
        return;
    }
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw qsb::ConfigError("cannot open output file " + tmp.string());
        f << os.str();
        if (!f) throw qsb::ConfigError("short write on " + tmp.string());
    }
    fs::rename(tmp, target); // atomic publish
    std::cerr << "wrote " << target.string() << " (" << doc.rows.size() << " rows)\n";
}

std::string channel_echo(const qsb::qkd::ChannelParams& c) {
    std::ostringstream os;
    os << "eta_d=" << fmt(c.eta_d) << " Y0=" << fmt(c.Y0) << " loss_db_per_km="
       << fmt(c.loss_db_per_km) << " e_d=" << fmt(c.e_d) << " e0=" << fmt(c.e0)
       << " f=" << fmt(c.f);
    return os.str();
}

// ---------------------------------------------------------------------------
// subcommand runners
// ---------------------------------------------------------------------------

CsvDocument run_qkd(const Cli& cli, const std::string& name) {
    const auto source = make_source(cli);
    cli.channel.validate();
    SweepSpec sweep;
    if (!cli.sweep.empty()) {
        sweep = parse_sweep(cli.sweep, {"distance"});
    } else {
        sweep.var = "distance";
        sweep.values = {cli.distance};
    }

    auto rate_at = [&](double km) {
        if (name == "twinfield") {
            cli.tf.validate();
            return qsb::qkd::key_rate_twinfield(source, cli.channel, km, cli.tf);
        }
        const auto decoy = name == "decoy" ? qsb::qkd::Decoy::infinite : qsb::qkd::Decoy::none;
        return qsb::qkd::key_rate_bb84(source, cli.channel, km, decoy);
    };

    CsvDocument doc;
    doc.meta = {{"subcommand", name},
                {"source", source.describe()},
                {"channel", channel_echo(cli.channel)},
                {"sweep", sweep.var + " over " + std::to_string(sweep.values.size()) + " points"}};
    if (name == "twinfield")
        doc.meta.emplace_back("twinfield", "m=" + std::to_string(cli.tf.m) +
                                               " d=" + fmt(cli.tf.d) + " e_s=" + fmt(cli.tf.e_s));
    doc.header = "distance_km,rate,Q,E,Q1,e1";
    doc.rows = pool_rows(int(sweep.values.size()), cli.workers, [&](int i) {
        const double km = sweep.values[i];
        const auto r = rate_at(km);
        return fmt(km) + "," + fmt(r.rate) + "," + fmt(r.Q) + "," + fmt(r.E) + "," + fmt(r.Q1) +
               "," + fmt(r.e1);
    });
    return doc;
}

CsvDocument run_tokens(const Cli& cli) {
    const auto source = make_source(cli);
    const bool is_pds = source.kind == qsb::sources::SourceModel::Kind::pds;
    SweepSpec sweep;
    if (!cli.sweep.empty()) {
        sweep = parse_sweep(cli.sweep, {"eta", "mu", "loss"});
    } else {
        sweep.var = is_pds ? "mu" : "eta";
        sweep.values = {is_pds ? cli.mu : cli.eta};
    }

    auto setup_for = [&](double v) {
        using namespace qsb::tokens;
        if (sweep.var == "eta") {
            if (is_pds) throw qsb::ConfigError("eta sweep applies to quantum-dot sources only");
            return qds_setup(source.pop.pumping, v);
        }
        if (sweep.var == "mu") {
            if (!is_pds) throw qsb::ConfigError("mu sweep applies to PDS sources only");
            return source.pds.phase == qsb::sources::PdsPhase::randomized ? rp_pds_setup(v)
                                                                          : fp_pds_setup(v);
        }
        // loss sweep: fixed source, vary the allowed loss
        if (is_pds)
            return source.pds.phase == qsb::sources::PdsPhase::randomized ? rp_pds_setup(cli.mu)
                                                                          : fp_pds_setup(cli.mu);
        return qds_setup(source.pop.pumping, cli.eta);
    };

    CsvDocument doc;
    doc.meta = {{"subcommand", "tokens"},
                {"source", source.describe()},
                {"sweep", sweep.var + " over " + std::to_string(sweep.values.size()) + " points"}};
    doc.header = sweep.var + ",noise_tolerance,duality_gap,iterations,status";
    doc.rows = pool_rows(int(sweep.values.size()), cli.workers, [&](int i) {
        const double v = sweep.values[i];
        const auto setup = setup_for(v);
        const auto r = sweep.var == "loss" ? qsb::tokens::noise_tolerance(setup, v)
                                           : qsb::tokens::noise_tolerance(setup);
        return fmt(v) + "," + fmt(r.min_error) + "," + fmt(r.gap) + "," +
               std::to_string(r.iterations) + "," + qsb::numlin::to_string(r.status);
    });
    return doc;
}

CsvDocument run_coinflip(const Cli& cli) {
    const auto source = make_source(cli);
    cli.channel.validate();
    SweepSpec sweep;
    if (!cli.sweep.empty()) {
        sweep = parse_sweep(cli.sweep, {"distance"});
    } else {
        sweep.var = "distance";
        sweep.values = {cli.distance};
    }

    CsvDocument doc;
    doc.meta = {{"subcommand", "coinflip"},
                {"source", source.describe()},
                {"channel", channel_echo(cli.channel)},
                {"protocol", "P_ab = 0.025 (z_target = 0.01, e = 0.015)"},
                {"sweep", sweep.var + " over " + std::to_string(sweep.values.size()) + " points"}};
    doc.header = "distance_km,N,y,p_alice,p_bob,cheat,p_ab,classical,balanced,advantage,attack";
    doc.rows = pool_rows(int(sweep.values.size()), cli.workers, [&](int i) {
        const auto p = qsb::coinflip::evaluate_point(source, cli.channel, sweep.values[i]);
        return fmt(p.distance_km) + "," + fmt(p.N) + "," + fmt(p.y) + "," + fmt(p.p_alice) + "," +
               fmt(p.p_bob) + "," + fmt(p.cheat) + "," + fmt(p.p_ab) + "," + fmt(p.classical) +
               "," + (p.balanced ? "1" : "0") + "," + (p.advantage ? "1" : "0") + "," +
               p.attack_label;
    });
    return doc;
}

CsvDocument run_bitcommit(const Cli& cli) {
    const auto base_source = make_source(cli);
    const bool is_pds = base_source.kind == qsb::sources::SourceModel::Kind::pds;
    SweepSpec sweep;
    if (!cli.sweep.empty()) {
        sweep = parse_sweep(cli.sweep, {"eta", "mu", "etac"});
    } else {
        sweep.var = "etac";
        sweep.values = {cli.etac};
    }

    qsb::bitcommit::BitCommitParams defaults = cli.bc;
    defaults.m3_vacuum_reading = cli.m3_vacuum;

    auto report_at = [&](double v) {
        auto source = base_source;
        double etac = cli.etac;
        if (sweep.var == "eta") {
            if (is_pds) throw qsb::ConfigError("eta sweep applies to quantum-dot sources only");
            source = qsb::sources::qds_source(source.pop.pumping, v);
        } else if (sweep.var == "mu") {
            if (!is_pds) throw qsb::ConfigError("mu sweep applies to PDS sources only");
            source = qsb::sources::pds_source(v, source.pds.phase);
        } else {
            etac = v;
        }
        const auto params = qsb::bitcommit::params_for(source, etac, defaults);
        return qsb::bitcommit::security_parameters(params);
    };

    CsvDocument doc;
    doc.meta = {{"subcommand", "bitcommit"},
                {"source", base_source.describe()},
                {"params", "epsilon=" + fmt(defaults.epsilon) + " beta=" + fmt(defaults.beta) +
                               " gamma=" + fmt(defaults.gamma) + " S=" + fmt(defaults.S) +
                               " e=" + fmt(defaults.e) +
                               (defaults.m3_vacuum_reading ? " m3=vacuum-reading" : " m3=P(>=2)")},
                {"sweep", sweep.var + " over " + std::to_string(sweep.values.size()) + " points"}};
    doc.header = sweep.var + ",m2,m3,L_prime,delta,lambda,margin,secure,N_min";
    doc.rows = pool_rows(int(sweep.values.size()), cli.workers, [&](int i) {
        const double v = sweep.values[i];
        const auto r = report_at(v);
        return fmt(v) + "," + fmt(r.m2) + "," + fmt(r.m3) + "," + fmt(r.L_prime) + "," +
               fmt(r.delta) + "," + fmt(r.lambda) + "," + fmt(r.condition_margin) + "," +
               (r.secure ? "1" : "0") + "," + fmt(r.N_min);
    });
    return doc;
}

// ---------------------------------------------------------------------------
// figures: one CSV per plotted curve with the paper defaults baked in
// ---------------------------------------------------------------------------

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * double(i) / double(n - 1);
    return v;
}

void emit_plot_script(const std::filesystem::path& dir, const std::string& fig,
                      const std::vector<std::string>& csvs) {
    std::ostringstream os;
    os << "#!/usr/bin/env python3\n"
       << "\"\"\"Plot helper for " << fig << "; reads the sibling CSV files.\"\"\"\n"
       << "import csv\n"
       << "import matplotlib.pyplot as plt\n\n"
       << "for name in " << [&] {
              std::string lst = "[";
              for (size_t i = 0; i < csvs.size(); ++i)
                  lst += (i ? ", " : "") + ("\"" + csvs[i] + "\"");
              return lst + "]";
          }()
       << ":\n"
       << "    xs, ys = [], []\n"
       << "    with open(name) as f:\n"
       << "        rows = [r for r in csv.reader(l for l in f if not l.startswith('#'))]\n"
       << "    for row in rows[1:]:\n"
       << "        xs.append(float(row[0])); ys.append(float(row[1]))\n"
       << "    plt.plot(xs, ys, label=name.rsplit('/', 1)[-1])\n"
       << "plt.xlabel('sweep variable'); plt.ylabel('figure of merit')\n"
       << "plt.yscale('log') if '" << fig << "'.startswith('fig2') else None\n"
       << "plt.legend(); plt.title('" << fig << "')\n"
       << "plt.savefig('" << fig << ".png', dpi=150)\n";
    std::ofstream f(dir / ("plot_" + fig + ".py"));
    f << os.str();
}

int run_figures(const Cli& cli) {
    using namespace qsb;
    const std::filesystem::path dir = cli.out.empty() ? std::filesystem::path(".")
                                                      : std::filesystem::path(cli.out);
    std::filesystem::create_directories(dir);
    qkd::ChannelParams ch; // paper defaults
    const std::vector<double> etas = {0.01, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    std::vector<std::string> written;

    auto save = [&](const std::string& name, CsvDocument doc) {
        write_csv((dir / name).string(), doc);
        written.push_back(name);
    };
    auto qkd_curve = [&](const std::string& name, auto rate_at, const std::string& meta) {
        const auto grid = linspace(0.0, 200.0, 201);
        CsvDocument doc;
        doc.meta = {{"figure", cli.figure}, {"curve", meta}, {"channel", channel_echo(ch)}};
        doc.header = "distance_km,rate";
        doc.rows = pool_rows(int(grid.size()), cli.workers, [&](int i) {
            return fmt(grid[i]) + "," + fmt(rate_at(grid[i]));
        });
        save(name, std::move(doc));
    };

    if (cli.figure == "fig2a" || cli.figure == "fig2b") {
        const auto decoy = cli.figure == "fig2a" ? qkd::Decoy::none : qkd::Decoy::infinite;
        for (double eta : etas) {
            const auto src = sources::qds_source(sources::Pumping::TPE, eta);
            std::ostringstream name;
            name << cli.figure << "_qds_tpe_eta" << fmt(eta) << ".csv";
            qkd_curve(name.str(),
                      [&, src](double km) { return qkd::key_rate_bb84(src, ch, km, decoy).rate; },
                      "TPE QDS, collection " + fmt(eta));
        }
        qkd_curve(cli.figure + "_best_rp_pds.csv",
                  [&](double km) { return qkd::best_pds_rate(ch, km, decoy).rate; },
                  "best-mu RP-PDS");
    } else if (cli.figure == "fig2c") {
        qkd::TwinFieldParams tf;
        for (double eta : etas) {
            const auto src = sources::qds_source(sources::Pumping::RE, eta);
            std::ostringstream name;
            name << "fig2c_qds_re_eta" << fmt(eta) << ".csv";
            qkd_curve(name.str(),
                      [&, src](double km) {
                          return qkd::key_rate_twinfield(src, ch, km, tf).rate;
                      },
                      "RE QDS twin-field, collection " + fmt(eta));
        }
        qkd_curve("fig2c_best_rp_pds.csv",
                  [&](double km) { return qkd::best_pds_rate_twinfield(ch, km, tf).rate; },
                  "best-mu RP-PDS twin-field");
    } else if (cli.figure == "fig4a") {
        const auto grid = linspace(0.0, 0.6, 61);
        CsvDocument doc;
        doc.meta = {{"figure", "fig4a"}, {"curve", "ideal qubit tolerance vs allowed loss"}};
        doc.header = "loss,noise_tolerance";
        const auto setup = tokens::ideal_qubit_setup();
        doc.rows = pool_rows(int(grid.size()), cli.workers, [&](int i) {
            return fmt(grid[i]) + "," + fmt(tokens::noise_tolerance(setup, grid[i]).min_error);
        });
        save("fig4a_ideal_qubit.csv", std::move(doc));
    } else if (cli.figure == "fig4b") {
        const auto grid = linspace(0.05, 1.0, 39);
        for (auto p : {sources::Pumping::RE, sources::Pumping::LA, sources::Pumping::TPE}) {
            CsvDocument doc;
            doc.meta = {{"figure", "fig4b"},
                        {"curve", std::string(sources::to_string(p)) + " QDS vs collection"}};
            doc.header = "eta,noise_tolerance";
            doc.rows = pool_rows(int(grid.size()), cli.workers, [&](int i) {
                const auto r = tokens::noise_tolerance(tokens::qds_setup(p, grid[i]));
                return fmt(grid[i]) + "," + fmt(r.min_error);
            });
            save(std::string("fig4b_qds_") + sources::to_string(p) + ".csv", std::move(doc));
        }
        const auto best = tokens::best_rp_pds_tolerance();
        CsvDocument doc;
        doc.meta = {{"figure", "fig4b"}, {"curve", "best RP-PDS (dashed reference)"}};
        doc.header = "mu,noise_tolerance";
        doc.rows = {fmt(best.mu) + "," + fmt(best.tolerance)};
        save("fig4b_best_rp_pds.csv", std::move(doc));
    } else if (cli.figure == "fig4c") {
        const auto grid = linspace(0.02, 1.5, 51);
        for (bool fixed : {false, true}) {
            CsvDocument doc;
            doc.meta = {{"figure", "fig4c"},
                        {"curve", fixed ? "fixed-phase PDS vs mu" : "randomized-phase PDS vs mu"}};
            doc.header = "mu,noise_tolerance";
            doc.rows = pool_rows(int(grid.size()), cli.workers, [&](int i) {
                const auto setup =
                    fixed ? tokens::fp_pds_setup(grid[i]) : tokens::rp_pds_setup(grid[i]);
                return fmt(grid[i]) + "," + fmt(tokens::noise_tolerance(setup).min_error);
            });
            save(fixed ? "fig4c_fp_pds.csv" : "fig4c_rp_pds.csv", std::move(doc));
        }
    } else if (cli.figure == "fig8" || cli.figure == "fig9") {
        const auto pump = cli.figure == "fig8" ? sources::Pumping::TPE : sources::Pumping::LA;
        const double eta = cli.figure == "fig8" ? 0.01 : 0.1;
        const auto src = sources::qds_source(pump, eta);
        const auto grid = linspace(0.0, 100.0, 51);
        CsvDocument doc;
        doc.meta = {{"figure", cli.figure},
                    {"curve", std::string(sources::to_string(pump)) + " QDS, collection " +
                                  fmt(eta) + ", balanced, P_ab = 0.025"},
                    {"channel", channel_echo(ch)}};
        doc.header = "distance_km,cheat,classical,advantage";
        doc.rows = pool_rows(int(grid.size()), cli.workers, [&](int i) {
            const auto p = coinflip::evaluate_point(src, ch, grid[i]);
            return fmt(grid[i]) + "," + fmt(p.cheat) + "," + fmt(p.classical) + "," +
                   (p.advantage ? "1" : "0");
        });
        save(cli.figure + "_coinflip.csv", std::move(doc));
    } else if (cli.figure == "fig10") {
        bitcommit::BitCommitParams defaults; // epsilon=2e-5, beta=0.007, gamma=0.008
        for (auto p : {sources::Pumping::RE, sources::Pumping::LA, sources::Pumping::TPE}) {
            if (p == sources::Pumping::RE) continue; // coherent source rejected by the analysis
            const auto grid = linspace(0.02, 1.0, 50);
            CsvDocument doc;
            doc.meta = {{"figure", "fig10"},
                        {"curve", std::string(sources::to_string(p)) +
                                      " QDS margin vs collection, eta_c = 1"}};
            doc.header = "source_efficiency,margin,secure,N_min";
            doc.rows = pool_rows(int(grid.size()), cli.workers, [&](int i) {
                const auto src = sources::qds_source(p, grid[i]);
                const auto r = bitcommit::security_parameters(
                    bitcommit::params_for(src, 1.0, defaults));
                return fmt(sources::source_efficiency(src.pop, src.eta)) + "," +
                       fmt(r.condition_margin) + "," + (r.secure ? "1" : "0") + "," + fmt(r.N_min);
            });
            save(std::string("fig10_qds_") + sources::to_string(p) + ".csv", std::move(doc));
        }
        const auto grid = linspace(0.01, 3.0, 100);
        CsvDocument doc;
        doc.meta = {{"figure", "fig10"}, {"curve", "RP-PDS margin vs mu, eta_c = 1"}};
        doc.header = "source_efficiency,margin,secure,N_min";
        doc.rows = pool_rows(int(grid.size()), cli.workers, [&](int i) {
            const auto src = sources::pds_source(grid[i]);
            const auto r =
                bitcommit::security_parameters(bitcommit::params_for(src, 1.0, defaults));
            return fmt(sources::source_efficiency(src.pds)) + "," + fmt(r.condition_margin) +
                   "," + (r.secure ? "1" : "0") + "," + fmt(r.N_min);
        });
        save("fig10_rp_pds.csv", std::move(doc));
    } else {
        throw qsb::ConfigError("unknown figure id '" + cli.figure +
                               "' (expected fig2a, fig2b, fig2c, fig4a, fig4b, fig4c, fig8, "
                               "fig9, fig10)");
    }
    emit_plot_script(dir, cli.figure, written);
    return 0;
}

// ---------------------------------------------------------------------------
// selftest: fast sanity anchors
// ---------------------------------------------------------------------------

int run_selftest() {
    using namespace qsb;
    int failures = 0;
    auto check = [&](const std::string& name, double got, double want, double tol) {
        const bool ok = std::abs(got - want) <= tol;
        std::printf("%-44s %s (got %.10g, want %.10g)\n", name.c_str(),
                    ok ? "PASS" : "FAIL", got, want);
        failures += ok ? 0 : 1;
    };

    {
        numlin::SdpProblem prob;
        prob.objective = numlin::Mat(2, 2);
        prob.objective(0, 0) = 1.0;
        prob.objective(1, 1) = 2.0;
        numlin::LinearConstraint c;
        c.matrix = numlin::Mat::identity(2);
        c.rhs = 1.0;
        prob.eq.push_back(c);
        check("sdp: min diag(1,2) on trace-1", sdp_solve(prob).primal_value, 1.0, 1e-6);
    }
    {
        numlin::Mat s0(2, 2), s1(2, 2);
        s0(0, 0) = 1.0;
        s1(0, 0) = s1(0, 1) = s1(1, 0) = s1(1, 1) = 0.5;
        check("helstrom |0> vs |+>", coinflip::helstrom(s0, s1),
              0.5 + 0.25 * std::sqrt(2.0), 1e-9);
        check("usd |0> vs |+>", coinflip::usd_probability(s0, s1),
              1.0 - std::sqrt(0.5), 1e-6);
    }
    {
        qkd::ChannelParams ch;
        const auto src = sources::qds_source(sources::Pumping::TPE, 0.3);
        check("bb84 TPE eta=0.3 L=50 infinite decoys",
              qkd::key_rate_bb84(src, ch, 50.0, qkd::Decoy::infinite).rate,
              8.77517596622575e-03, 1e-12);
    }
    check("bitcommit L'(2e-5)", bitcommit::l_prime(2e-5), 0.495439942200, 1e-9);
    {
        const auto r = tokens::noise_tolerance(tokens::ideal_qubit_setup(), 0.5);
        check("tokens: ideal qubit tolerance at l=0.5", r.min_error, 0.0, 1e-6);
    }
    std::printf("%s\n", failures == 0 ? "selftest: all anchors pass" : "selftest: FAILURES");
    return failures == 0 ? 0 : 4;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qsb: security figures of merit for quantum-cryptographic primitives "
                 "under quantum-dot and Poisson photon sources"};
    app.set_version_flag("--version", kVersion);
    app.fallthrough();
    app.set_config("--config", "", "flat key=value config file (CLI flags override it)");

    Cli cli;
    app.add_option("--source", cli.source,
                   "source preset: re | la | tpe | rp-pds | fp-pds")
        ->capture_default_str();
    app.add_option("--eta", cli.eta, "quantum-dot collection efficiency")->capture_default_str();
    app.add_option("--mu", cli.mu, "PDS mean photon number")->capture_default_str();
    app.add_option("--distance", cli.distance, "fiber distance in km")->capture_default_str();
    app.add_option("--etac", cli.etac, "bit-commitment channel transmission")
        ->capture_default_str();
    app.add_option("--sweep", cli.sweep, "sweep spec: VAR MIN MAX STEPS")->expected(4);
    app.add_option("--out", cli.out, "output CSV path (figures: output directory); stdout if "
                                     "omitted");
    app.add_option("--workers", cli.workers, "worker threads for sweeps")->capture_default_str();

    app.add_option("--eta-d", cli.channel.eta_d, "detector efficiency")->capture_default_str();
    app.add_option("--y0", cli.channel.Y0, "dark-count probability")->capture_default_str();
    app.add_option("--loss-db-per-km", cli.channel.loss_db_per_km, "fiber loss")
        ->capture_default_str();
    app.add_option("--e-d", cli.channel.e_d, "misalignment error")->capture_default_str();
    app.add_option("--f", cli.channel.f, "error-correction inefficiency")->capture_default_str();
    app.add_option("--tf-slices", cli.tf.m, "twin-field phase slices")->capture_default_str();
    app.add_option("--tf-duty", cli.tf.d, "twin-field duty cycle")->capture_default_str();
    app.add_option("--tf-es", cli.tf.e_s, "twin-field phase-slicing error")
        ->capture_default_str();

    app.add_option("--epsilon", cli.bc.epsilon, "bit-commitment security parameter")
        ->capture_default_str();
    app.add_option("--beta", cli.bc.beta, "bit-commitment beta")->capture_default_str();
    app.add_option("--gamma", cli.bc.gamma, "bit-commitment gamma")->capture_default_str();
    app.add_option("--storage", cli.bc.S, "dishonest storage size S")->capture_default_str();
    app.add_option("--error", cli.bc.e, "bit-commitment honest error rate")
        ->capture_default_str();
    app.add_flag("--m3-vacuum", cli.m3_vacuum, "use the m3 = 1 - P(0) reading");

    auto* bb84 = app.add_subcommand("bb84", "BB84 without decoy states");
    auto* decoy = app.add_subcommand("decoy", "BB84 with infinite decoy states");
    auto* twinfield = app.add_subcommand("twinfield", "twin-field QKD");
    auto* tokens_cmd = app.add_subcommand("tokens", "unforgeable-token noise tolerance (SDP)");
    auto* coinflip_cmd = app.add_subcommand("coinflip", "strong coin-flipping cheating bounds");
    auto* bitcommit_cmd =
        app.add_subcommand("bitcommit", "bounded-storage bit-commitment margins");
    auto* figures = app.add_subcommand("figures", "reproduce a figure as a CSV bundle");
    figures->add_option("id", cli.figure, "figure id (fig2a ... fig10)")->required();
    auto* selftest = app.add_subcommand("selftest", "run fast sanity anchors");
    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (selftest->parsed()) return run_selftest();
        if (figures->parsed()) return run_figures(cli);
        CsvDocument doc;
        if (bb84->parsed()) doc = run_qkd(cli, "bb84");
        else if (decoy->parsed()) doc = run_qkd(cli, "decoy");
        else if (twinfield->parsed()) doc = run_qkd(cli, "twinfield");
        else if (tokens_cmd->parsed()) doc = run_tokens(cli);
        else if (coinflip_cmd->parsed()) doc = run_coinflip(cli);
        else if (bitcommit_cmd->parsed()) doc = run_bitcommit(cli);
        write_csv(cli.out, doc);
        return 0;
    } catch (const qsb::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const qsb::AssumptionError& e) {
        std::cerr << "assumption violated: " << e.what() << "\n";
        return 3;
    } catch (const qsb::SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
