// nsm — command-line front end for the verification library: dispersion
// roots, propagator evaluation, oracle sweeps, Lyapunov certificates,
// envelope-constant scans, decay-rate fits, and nonlinear runs. Every
// subcommand writes CSV files plus a manifest that reproduces the run
// byte-for-byte when fed back through --config.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "csv.hpp"
#include "svg_plot.hpp"

#include "nsm/bounds.hpp"
#include "nsm/greenfn.hpp"
#include "nsm/lyapunov.hpp"
#include "nsm/mode.hpp"
#include "nsm/nonlinear.hpp"
#include "nsm/norms.hpp"
#include "nsm/oracle.hpp"
#include "nsm/params.hpp"
#include "nsm/profile.hpp"
#include "nsm/rates.hpp"
#include "nsm/spectra.hpp"

#ifndef NSM_CLI_VERSION
#define NSM_CLI_VERSION "0.0.0"
#endif

namespace {

using nsmcli::CsvWriter;
using nsmcli::format_number;
using nsmcli::PlotSeries;
using nsmcli::PlotSpec;

// ---------------------------------------------------------------------------
// Small parsers for the grid/vector option syntax.

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (const char c : text) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

double parse_double(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw UsageError("cannot parse '" + text + "' as a number in " + what);
    }
}

/// Accepts "log:lo:hi:n", "lin:lo:hi:n", or a plain comma list "a,b,c".
std::vector<double> parse_grid(const std::string& spec, const std::string& what) {
    if (spec.rfind("log:", 0) == 0 || spec.rfind("lin:", 0) == 0) {
        const auto parts = split(spec, ':');
        if (parts.size() != 4)
            throw UsageError(what + ": expected " + parts[0] + ":lo:hi:n");
        const double lo = parse_double(parts[1], what);
        const double hi = parse_double(parts[2], what);
        const long n = std::lround(parse_double(parts[3], what));
        if (n < 2 || !(hi > lo)) throw UsageError(what + ": need hi > lo and n >= 2");
        if (parts[0] == "log" && !(lo > 0.0))
            throw UsageError(what + ": log grids need lo > 0");
        std::vector<double> g(static_cast<std::size_t>(n));
        for (long i = 0; i < n; ++i) {
            const double u = static_cast<double>(i) / static_cast<double>(n - 1);
            g[static_cast<std::size_t>(i)] =
                parts[0] == "log" ? lo * std::pow(hi / lo, u) : lo + (hi - lo) * u;
        }
        return g;
    }
    std::vector<double> g;
    for (const std::string& item : split(spec, ','))
        g.push_back(parse_double(item, what));
    if (g.empty()) throw UsageError(what + ": empty grid");
    return g;
}

nsm::Vec3 parse_vec3(const std::string& spec, const std::string& what) {
    const auto parts = split(spec, ',');
    if (parts.size() != 3) throw UsageError(what + ": expected x,y,z");
    return {parse_double(parts[0], what), parse_double(parts[1], what),
            parse_double(parts[2], what)};
}

std::pair<double, double> parse_window(const std::string& spec) {
    const auto parts = split(spec, ':');
    if (parts.size() != 2) throw UsageError("--window: expected lo:hi");
    const double lo = parse_double(parts[0], "--window");
    const double hi = parse_double(parts[1], "--window");
    if (!(hi > lo) || !(lo >= 0.0)) throw UsageError("--window: need 0 <= lo < hi");
    return {lo, hi};
}

/// Only gaussian shapes are exposed; "gaussian:<width>" sets the k-space width.
double parse_profile_width(const std::string& spec) {
    const auto parts = split(spec, ':');
    if (parts.size() != 2 || parts[0] != "gaussian")
        throw UsageError("--profile: expected gaussian:<width>");
    const double w = parse_double(parts[1], "--profile");
    if (!(w > 0.0)) throw UsageError("--profile: width must be positive");
    return w;
}

// ---------------------------------------------------------------------------
// Shared plumbing: parameter flags, output directory, manifests.

struct ParamOpts {
    std::string preset = "ref";
    double gamma = -1.0, beta = -1.0, mu = -1.0;  // <0 means "preset value"

    nsm::PhysParams resolve() const {
        if (preset != "ref")
            throw UsageError("--params: the only preset is 'ref'");
        nsm::PhysParams p = nsm::reference_params();
        if (gamma > 0.0) p.gamma = gamma;
        if (beta > 0.0) p.beta = beta;
        if (mu > 0.0) p.mu = mu;
        p.validate();
        return p;
    }
};

void add_param_flags(CLI::App* cmd, ParamOpts* opts) {
    cmd->add_option("--params", opts->preset, "parameter preset (ref)")
        ->capture_default_str();
    cmd->add_option("--gamma", opts->gamma, "acoustic speed override");
    cmd->add_option("--beta", opts->beta, "coupling frequency override");
    cmd->add_option("--mu", opts->mu, "viscosity override");
}

struct CommonOpts {
    std::string out_dir = ".";
    bool plots = true;
};

void add_common_flags(CLI::App* cmd, CommonOpts* opts) {
    cmd->add_option("--out", opts->out_dir, "output directory")
        ->capture_default_str();
    cmd->add_flag("--plots,!--no-plots", opts->plots,
                  "emit SVG figures and gnuplot scripts")
        ->capture_default_str();
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

/**
 * The manifest is a flat INI file with the resolved option values of the
 * run. Feeding it back via `nsm <command> --config <manifest>` reproduces
 * the CSV outputs byte for byte.
 */
void write_manifest(const std::string& out_dir, const std::string& command,
                    const std::vector<std::pair<std::string, std::string>>& kv) {
    const std::string path = join_path(out_dir, command + "_manifest.ini");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "# nsm run manifest; rerun: nsm " << command << " --config " << path
        << "\n";
    out << "[nsm]\nversion=" << NSM_CLI_VERSION << "\ncommand=" << command << "\n";
    out << "[" << command << "]\n";
    for (const auto& [key, value] : kv) out << key << "=" << value << "\n";
    if (!out) throw std::runtime_error("write failure on " + path);
}

int report_check(bool ok, const std::string& what) {
    if (ok) {
        std::printf("ok: %s\n", what.c_str());
        return 0;
    }
    std::fprintf(stderr, "check failed: %s\n", what.c_str());
    return 1;
}

// ---------------------------------------------------------------------------
// roots: exact cubic roots over an r grid.

struct RootsOpts {
    ParamOpts params;
    CommonOpts common;
    double a = -1.0;  // <0: derive from params as mu*beta
    std::string r_grid = "log:1e-3:1e3:200";
};

int cmd_roots(const RootsOpts& o) {
    const nsm::PhysParams p = o.params.resolve();
    const double a = o.a > 0.0 ? o.a : p.a();
    const std::vector<double> rs = parse_grid(o.r_grid, "--r-grid");
    std::filesystem::create_directories(o.common.out_dir);

    CsvWriter csv(join_path(o.common.out_dir, "roots.csv"),
                  "exact roots of the transverse dispersion cubic "
                  "z^3 + a r z^2 + (1+r) z + a r^2 over r = |k|^2/beta^2, a=" +
                      format_number(a),
                  {"r", "sigma", "re_chi", "im_chi", "S", "R", "kind"});

    double worst_vieta = 0.0;
    bool bracket_ok = true;
    std::vector<double> xs, sig, rechi, imchi;
    for (const double r : rs) {
        if (!(r > 0.0)) throw UsageError("--r-grid: r values must be positive");
        const nsm::CubicRoots c = nsm::em_cubic_roots(a, r);
        const char* kind = c.kind == nsm::RootKind::one_real     ? "one_real"
                           : c.kind == nsm::RootKind::three_real ? "three_real"
                                                                 : "degenerate";
        csv.row({format_number(r), format_number(c.lambda1.real()),
                 format_number(c.lambda2.real()),
                 format_number(std::abs(c.lambda2.imag())), format_number(c.S),
                 format_number(c.R), kind});

        const auto sum = c.lambda1 + c.lambda2 + c.lambda3;
        const auto prod = c.lambda1 * c.lambda2 * c.lambda3;
        worst_vieta = std::max(
            worst_vieta, std::abs(sum + a * r) / std::max(1.0, a * r));
        worst_vieta = std::max(
            worst_vieta, std::abs(prod + a * r * r) / std::max(1.0, a * r * r));
        if (c.kind == nsm::RootKind::one_real) {
            const double s = c.lambda1.real();
            if (!(s > -a * r && s < 0.0)) bracket_ok = false;
        }
        xs.push_back(r);
        sig.push_back(std::abs(c.lambda1.real()));
        rechi.push_back(std::abs(c.lambda2.real()));
        imchi.push_back(std::abs(c.lambda2.imag()));
    }

    if (o.common.plots) {
        PlotSpec spec;
        spec.title = "dispersion roots, a = " + format_number(a);
        spec.x_label = "r = |k|^2 / beta^2";
        spec.y_label = "|root component|";
        spec.log_x = spec.log_y = true;
        spec.series = {{"|sigma|", xs, sig}, {"|Re chi|", xs, rechi},
                       {"|Im chi|", xs, imchi}};
        nsmcli::write_svg(join_path(o.common.out_dir, "roots.svg"), spec);
        nsmcli::write_gnuplot_script(
            join_path(o.common.out_dir, "roots.gp"), "roots.csv", spec, 1,
            {{2, "sigma"}, {3, "re_chi"}, {4, "im_chi"}});
    }

    write_manifest(o.common.out_dir, "roots",
                   {{"params", o.params.preset},
                    {"a", format_number(a)},
                    {"r-grid", o.r_grid},
                    {"out", o.common.out_dir},
                    {"plots", o.common.plots ? "true" : "false"}});

    std::ostringstream sum;
    sum << "roots: " << rs.size() << " radii, worst Vieta residual "
        << worst_vieta << ", real-root bracket "
        << (bracket_ok ? "held" : "violated");
    return report_check(worst_vieta <= 1e-9 && bracket_ok, sum.str());
}

// ---------------------------------------------------------------------------
// green: evolve one seeded constrained mode and record component norms.

struct GreenOpts {
    ParamOpts params;
    CommonOpts common;
    std::string k = "0.5,0,0";
    std::string t_grid = "log:0.01:100:60";
    std::uint64_t seed = 911003;
};

int cmd_green(const GreenOpts& o) {
    const nsm::PhysParams p = o.params.resolve();
    const nsm::Vec3 k = parse_vec3(o.k, "--k");
    const std::vector<double> ts = parse_grid(o.t_grid, "--t-grid");
    std::filesystem::create_directories(o.common.out_dir);

    const nsm::FourierMode m0 = nsm::random_constrained_mode(k, p, o.seed);

    CsvWriter csv(join_path(o.common.out_dir, "green.csv"),
                  "component norms of a seeded constrained Fourier mode under "
                  "the linear propagator at k = (" +
                      o.k + ")",
                  {"t", "n_abs", "u_abs", "E_abs", "B_abs", "total"});
    std::vector<double> xs, an, au, aE, aB;
    for (const double t : ts) {
        if (!(t >= 0.0)) throw UsageError("--t-grid: times must be nonnegative");
        const nsm::FourierMode m = nsm::apply_green(m0, p, t);
        const double nn = std::abs(m.n);
        const double nu = std::sqrt(nsm::norm2(m.u));
        const double nE = std::sqrt(nsm::norm2(m.E));
        const double nB = std::sqrt(nsm::norm2(m.B));
        csv.numeric_row({t, nn, nu, nE, nB, m.norm()});
        xs.push_back(t);
        an.push_back(nn);
        au.push_back(nu);
        aE.push_back(nE);
        aB.push_back(nB);
    }

    // Suite checks: identity at t = 0 and one semigroup split.
    const double id_gap = (nsm::apply_green(m0, p, 0.0) - m0).norm() /
                          std::max(m0.norm(), 1e-300);
    const double t_probe = ts.back() > 0.0 ? ts.back() : 1.0;
    const nsm::FourierMode whole = nsm::apply_green(m0, p, t_probe);
    const nsm::FourierMode halves = nsm::apply_green(
        nsm::apply_green(m0, p, 0.5 * t_probe), p, 0.5 * t_probe);
    const double comp_gap =
        (halves - whole).norm() / std::max(whole.norm(), 1e-300);

    if (o.common.plots) {
        PlotSpec spec;
        spec.title = "propagator response at k = (" + o.k + ")";
        spec.x_label = "t";
        spec.y_label = "component norm";
        spec.log_x = spec.log_y = true;
        spec.series = {{"n", xs, an}, {"u", xs, au}, {"E", xs, aE}, {"B", xs, aB}};
        nsmcli::write_svg(join_path(o.common.out_dir, "green.svg"), spec);
        nsmcli::write_gnuplot_script(join_path(o.common.out_dir, "green.gp"),
                                     "green.csv", spec, 1,
                                     {{2, "n"}, {3, "u"}, {4, "E"}, {5, "B"}});
    }

    write_manifest(o.common.out_dir, "green",
                   {{"params", o.params.preset},
                    {"k", o.k},
                    {"t-grid", o.t_grid},
                    {"seed", std::to_string(o.seed)},
                    {"out", o.common.out_dir},
                    {"plots", o.common.plots ? "true" : "false"}});

    std::ostringstream sum;
    sum << "green: identity gap " << id_gap << ", semigroup gap " << comp_gap;
    return report_check(id_gap <= 1e-14 && comp_gap <= 1e-10, sum.str());
}

// ---------------------------------------------------------------------------
// verify-oracle: propagator vs brute-force ODE integration.

struct VerifyOpts {
    ParamOpts params;
    CommonOpts common;
    std::string k_grid = "log:1e-2:1e2:25";
    std::string t_grid = "0.1,1,10,100";
    int n_dirs = 4;
    int n_modes = 3;
    double tol = 1e-12;
    double threshold = 1e-7;
    std::uint64_t seed = 911003;
};

int cmd_verify_oracle(const VerifyOpts& o) {
    const nsm::PhysParams p = o.params.resolve();
    const std::vector<double> mags = parse_grid(o.k_grid, "--k-grid");
    const std::vector<double> ts = parse_grid(o.t_grid, "--t-grid");
    if (o.n_dirs < 1 || o.n_dirs > 8) throw UsageError("--dirs: need 1..8");
    std::filesystem::create_directories(o.common.out_dir);

    static const nsm::Vec3 dirs[8] = {
        {1, 0, 0}, {0, 1, 0}, {0, 0, 1},
        {std::numbers::inv_sqrt3, std::numbers::inv_sqrt3, std::numbers::inv_sqrt3},
        {0.6, 0.8, 0.0}, {0.0, 0.6, 0.8}, {0.8, 0.0, 0.6}, {0.36, 0.48, 0.8}};
    std::vector<nsm::Vec3> ks;
    for (const double m : mags)
        for (int d = 0; d < o.n_dirs; ++d) ks.push_back(nsm::scale(dirs[d], m));

    const nsm::OdeReport rep =
        nsm::verify_green_vs_oracle(p, ks, ts, o.n_modes, o.seed, o.tol);

    CsvWriter csv(join_path(o.common.out_dir, "verify_oracle.csv"),
                  "propagator vs brute-force ODE oracle: worst relative "
                  "disagreement over the sampled (k, t, mode) grid",
                  {"max_rel_error", "worst_t", "worst_k_x", "worst_k_y",
                   "worst_k_z", "n_samples", "tolerance_used"});
    csv.numeric_row({rep.max_rel_error, rep.worst_t, rep.worst_k[0],
                     rep.worst_k[1], rep.worst_k[2],
                     static_cast<double>(rep.n_samples), rep.tolerance_used});

    write_manifest(o.common.out_dir, "verify-oracle",
                   {{"params", o.params.preset},
                    {"k-grid", o.k_grid},
                    {"t-grid", o.t_grid},
                    {"dirs", std::to_string(o.n_dirs)},
                    {"modes", std::to_string(o.n_modes)},
                    {"tol", format_number(o.tol)},
                    {"threshold", format_number(o.threshold)},
                    {"seed", std::to_string(o.seed)},
                    {"out", o.common.out_dir},
                    {"plots", o.common.plots ? "true" : "false"}});

    std::ostringstream sum;
    sum << "verify-oracle: max rel error " << rep.max_rel_error << " over "
        << rep.n_samples << " samples (threshold " << o.threshold << ")";
    return report_check(rep.max_rel_error <= o.threshold, sum.str());
}

// ---------------------------------------------------------------------------
// lyapunov: weight selection and per-wavenumber dissipation margins.

struct LyapunovOpts {
    ParamOpts params;
    CommonOpts common;
    std::string k_grid = "log:1e-2:1e2:60";
    double kappa1 = -1.0, kappa2 = -1.0;  // <0: run the grid search
    std::uint64_t seed = 911003;
};

int cmd_lyapunov(const LyapunovOpts& o) {
    const nsm::PhysParams p = o.params.resolve();
    const std::vector<double> ks = parse_grid(o.k_grid, "--k-grid");
    std::filesystem::create_directories(o.common.out_dir);

    nsm::LyapunovWeights w;
    if (o.kappa1 >= 0.0 || o.kappa2 >= 0.0) {
        if (!(o.kappa1 >= 0.0 && o.kappa2 >= 0.0))
            throw UsageError("--kappa1/--kappa2 must be given together");
        w.kappa1 = o.kappa1;
        w.kappa2 = o.kappa2;
        w.validate();
    } else {
        w = nsm::choose_weights(p, ks, o.seed);
    }

    const std::vector<double> t_grid = {0.0, 0.25, 0.5, 1.0, 2.0,
                                        5.0, 10.0, 20.0, 50.0, 100.0};
    static const nsm::Vec3 dirs[3] = {{1, 0, 0}, {0.6, 0.8, 0.0}, {0.36, 0.48, 0.8}};

    CsvWriter csv(join_path(o.common.out_dir, "lyapunov.csv"),
                  "dissipation margin of the weighted energy functional per "
                  "wavenumber, kappa = (" +
                      format_number(w.kappa1) + ", " + format_number(w.kappa2) + ")",
                  {"k", "margin"});
    std::vector<double> xs, ms;
    double min_margin = std::numeric_limits<double>::infinity();
    for (const double kn : ks) {
        double margin = std::numeric_limits<double>::infinity();
        for (int d = 0; d < 3; ++d) {
            const nsm::FourierMode m0 = nsm::random_constrained_mode(
                nsm::scale(dirs[d], kn), p, o.seed + static_cast<std::uint64_t>(d));
            margin = std::min(margin, nsm::dissipation_check(p, w, m0, t_grid));
        }
        csv.numeric_row({kn, margin});
        xs.push_back(kn);
        ms.push_back(margin);
        min_margin = std::min(min_margin, margin);
    }

    if (o.common.plots) {
        PlotSpec spec;
        spec.title = "dissipation margin, kappa = (" + format_number(w.kappa1) +
                     ", " + format_number(w.kappa2) + ")";
        spec.x_label = "|k|";
        spec.y_label = "margin";
        spec.log_x = true;
        spec.series = {{"margin", xs, ms}};
        nsmcli::write_svg(join_path(o.common.out_dir, "lyapunov.svg"), spec);
        nsmcli::write_gnuplot_script(join_path(o.common.out_dir, "lyapunov.gp"),
                                     "lyapunov.csv", spec, 1, {{2, "margin"}});
    }

    write_manifest(o.common.out_dir, "lyapunov",
                   {{"params", o.params.preset},
                    {"k-grid", o.k_grid},
                    {"kappa1", format_number(w.kappa1)},
                    {"kappa2", format_number(w.kappa2)},
                    {"seed", std::to_string(o.seed)},
                    {"out", o.common.out_dir},
                    {"plots", o.common.plots ? "true" : "false"}});

    std::ostringstream sum;
    sum << "lyapunov: kappa (" << w.kappa1 << ", " << w.kappa2
        << "), min margin " << min_margin << " over " << ks.size() << " wavenumbers";
    return report_check(min_margin > 0.0, sum.str());
}

// ---------------------------------------------------------------------------
// bounds: envelope-constant scan.

struct BoundsOpts {
    ParamOpts params;
    CommonOpts common;
    double t_max = 1600.0;
    std::string k_grid = "0.05,0.15,1,5,30,60";
    int n_modes = 2;
    std::uint64_t seed = 12345;
};

int cmd_bounds(const BoundsOpts& o) {
    const nsm::PhysParams p = o.params.resolve();
    if (!(o.t_max > 10.0)) throw UsageError("--t-max: need t_max > 10");
    const std::vector<double> ks = parse_grid(o.k_grid, "--k-grid");
    std::filesystem::create_directories(o.common.out_dir);

    std::vector<double> ts = {0.0, 0.5, 2.0, 10.0, 50.0};
    for (double t = 200.0; t < o.t_max; t *= 2.0) ts.push_back(t);
    ts.push_back(o.t_max);

    const nsm::BoundScanReport rep =
        nsm::bound_ratio_scan(p, ts, ks, o.n_modes, o.seed);

    CsvWriter csv(join_path(o.common.out_dir, "bounds.csv"),
                  "fitted prefactors of the pointwise propagator envelopes "
                  "per (regime, response, source) channel",
                  {"regime", "response", "source", "C_fit", "C_fit_half",
                   "max_at_window_end"});
    bool all_finite = true;
    for (const nsm::ChannelFit& f : rep.fits) {
        csv.row({f.regime, f.response, f.source, format_number(f.C_fit),
                 format_number(f.C_fit_half), format_number(f.max_at_window_end)});
        if (!std::isfinite(f.C_fit)) all_finite = false;
    }

    write_manifest(o.common.out_dir, "bounds",
                   {{"params", o.params.preset},
                    {"t-max", format_number(o.t_max)},
                    {"k-grid", o.k_grid},
                    {"modes", std::to_string(o.n_modes)},
                    {"seed", std::to_string(o.seed)},
                    {"out", o.common.out_dir},
                    {"plots", o.common.plots ? "true" : "false"}});

    std::ostringstream sum;
    sum << "bounds: " << rep.fits.size() << " channels, max C " << rep.max_C_fit
        << ", drift " << 100.0 * rep.worst_drift << "%, structural residual "
        << rep.structural_residual;
    return report_check(all_finite && rep.worst_drift <= 0.10 &&
                            rep.structural_residual <= 1e-10,
                        sum.str());
}

// ---------------------------------------------------------------------------
// decay: radial-quadrature norms and a power-law fit for one component.

struct DecayOpts {
    ParamOpts params;
    CommonOpts common;
    std::string component = "u";
    std::string profile = "gaussian:1.0";
    std::string source = "auto";
    std::string window = "50:500";
    std::string t_grid;  // defaults to log over the window
    int points = 96;
    double k_max = 0.0;  // 0: profile support radius
    double expect = std::numeric_limits<double>::quiet_NaN();
    double rate_tol = 0.05;
};

int cmd_decay(const DecayOpts& o) {
    const nsm::PhysParams p = o.params.resolve();
    const auto [win_lo, win_hi] = parse_window(o.window);
    const double width = parse_profile_width(o.profile);
    std::filesystem::create_directories(o.common.out_dir);

    const std::vector<std::string> components = {"n", "u", "E", "B", "gradB"};
    if (std::find(components.begin(), components.end(), o.component) ==
        components.end())
        throw UsageError("--component: one of n,u,E,B,gradB");

    // The source channels seeded by the profile. "auto" picks the source
    // whose contribution dominates the requested component at late times.
    std::string source = o.source;
    if (source == "auto")
        source = (o.component == "n" || o.component == "E") ? "u" : "B";
    nsm::RadialProfile prof;
    prof.shape = nsm::gaussian_shape(width);
    if (source == "all") {
        prof.w_n = prof.w_u = prof.w_E = prof.w_B = 1.0;
    } else {
        for (const std::string& ch : split(source, ',')) {
            if (ch == "n") prof.w_n = 1.0;
            else if (ch == "u") prof.w_u = 1.0;
            else if (ch == "E") prof.w_E = 1.0;
            else if (ch == "B") prof.w_B = 1.0;
            else throw UsageError("--source: channels are n,u,E,B (or auto, all)");
        }
    }

    const std::string t_spec =
        o.t_grid.empty() ? "log:" + format_number(win_lo) + ":" +
                               format_number(win_hi) + ":25"
                         : o.t_grid;
    const std::vector<double> ts = parse_grid(t_spec, "--t-grid");
    const double k_max = o.k_max > 0.0 ? o.k_max : prof.shape.support_radius();

    const nsm::NormSeries series =
        nsm::l2_norm_evolution(p, prof, ts, {o.points, k_max});

    CsvWriter scsv(join_path(o.common.out_dir, "decay_series.csv"),
                   "L2 norms of each field under the linear flow, radial "
                   "quadrature over a gaussian profile (width " +
                       format_number(width) + ", source " + source + ")",
                   {"t", "n", "u", "E", "B", "grad_B"});
    for (std::size_t i = 0; i < ts.size(); ++i)
        scsv.numeric_row({ts[i], series.n[i], series.u[i], series.E[i],
                          series.B[i], series.grad_B[i]});

    const std::vector<double>& values = o.component == "n"   ? series.n
                                        : o.component == "u" ? series.u
                                        : o.component == "E" ? series.E
                                        : o.component == "B" ? series.B
                                                             : series.grad_B;
    std::vector<std::pair<double, double>> fit_series;
    for (std::size_t i = 0; i < ts.size(); ++i)
        fit_series.emplace_back(ts[i], values[i]);
    const nsm::DecayFit fit = nsm::fit_decay_exponent(fit_series, win_lo, win_hi);

    CsvWriter fcsv(join_path(o.common.out_dir, "decay.csv"),
                   "fitted late-time decay exponent of ||" + o.component +
                       "|| against (1+t)",
                   {"component", "exponent", "residual_rms", "window_lo",
                    "window_hi", "n_points", "source", "width"});
    fcsv.row({o.component, format_number(fit.exponent),
              format_number(fit.residual_rms), format_number(fit.window_min),
              format_number(fit.window_max), std::to_string(fit.n_points), source,
              format_number(width)});

    if (o.common.plots) {
        std::vector<double> fit_line;
        for (const double t : ts)
            fit_line.push_back(
                std::exp(fit.log_prefactor + fit.exponent * std::log1p(t)));
        PlotSpec spec;
        spec.title = "||" + o.component + "|| decay, fitted exponent " +
                     format_number(fit.exponent);
        spec.x_label = "t";
        spec.y_label = "L2 norm";
        spec.log_x = spec.log_y = true;
        spec.series = {{o.component, ts, values}, {"fit", ts, fit_line}};
        nsmcli::write_svg(join_path(o.common.out_dir, "decay.svg"), spec);
        const int column = 2 + static_cast<int>(std::find(components.begin(),
                                                          components.end(),
                                                          o.component) -
                                                components.begin());
        nsmcli::write_gnuplot_script(join_path(o.common.out_dir, "decay.gp"),
                                     "decay_series.csv", spec, 1,
                                     {{column, o.component}});
    }

    write_manifest(o.common.out_dir, "decay",
                   {{"params", o.params.preset},
                    {"component", o.component},
                    {"profile", o.profile},
                    {"source", o.source},
                    {"window", o.window},
                    {"t-grid", t_spec},
                    {"points", std::to_string(o.points)},
                    {"k-max", format_number(k_max)},
                    {"out", o.common.out_dir},
                    {"plots", o.common.plots ? "true" : "false"}});

    std::ostringstream sum;
    sum << "decay: ||" << o.component << "|| ~ (1+t)^" << fit.exponent
        << " on [" << win_lo << ", " << win_hi << "] (source " << source
        << ", rms " << fit.residual_rms << ")";
    bool ok = std::isfinite(fit.exponent);
    if (std::isfinite(o.expect)) {
        ok = ok && std::abs(fit.exponent - o.expect) <= o.rate_tol;
        sum << ", expected " << o.expect << " +- " << o.rate_tol;
    }
    return report_check(ok, sum.str());
}

// ---------------------------------------------------------------------------
// simulate: nonlinear run with per-step diagnostics.

struct SimulateOpts {
    ParamOpts params;
    CommonOpts common;
    int n = 32;
    double box = 2.0 * std::numbers::pi;
    double dt = 0.05;
    double t_end = 20.0;
    double amplitude = 1e-3;
    double width = 1.0;
    std::string source = "all";
    int stride = 4;
    int order = 4;
};

int cmd_simulate(const SimulateOpts& o) {
    const nsm::PhysParams p = o.params.resolve();
    nsm::GridConfig cfg;
    cfg.n_per_axis = o.n;
    cfg.box_length = o.box;
    cfg.dt = o.dt;
    cfg.t_end = o.t_end;
    cfg.amplitude = o.amplitude;
    cfg.validate();
    std::filesystem::create_directories(o.common.out_dir);

    nsm::RadialProfile prof;
    prof.shape = nsm::gaussian_shape(o.width);
    if (o.source == "all") {
        prof.w_n = prof.w_u = prof.w_E = prof.w_B = 1.0;
    } else {
        for (const std::string& ch : split(o.source, ',')) {
            if (ch == "n") prof.w_n = 1.0;
            else if (ch == "u") prof.w_u = 1.0;
            else if (ch == "E") prof.w_E = 1.0;
            else if (ch == "B") prof.w_B = 1.0;
            else throw UsageError("--source: channels are n,u,E,B (or all)");
        }
    }

    const nsm::SimSeries run = nsm::simulate(p, cfg, prof, o.stride, o.order);

    CsvWriter csv(join_path(o.common.out_dir, "simulate.csv"),
                  "per-step diagnostics of the band-limited pseudospectral "
                  "run (grid " +
                      std::to_string(o.n) + "^3, dt " + format_number(o.dt) + ")",
                  {"t", "mass", "norm_rho", "norm_v", "norm_E", "norm_B", "E_N",
                   "D_N", "E_N_high", "D_N_high", "gauss_residual",
                   "div_B_residual"});
    for (std::size_t i = 0; i < run.t.size(); ++i)
        csv.numeric_row({run.t[i], run.mass[i], run.norm_rho[i], run.norm_v[i],
                         run.norm_E[i], run.norm_B[i], run.energy[i].E_N,
                         run.energy[i].D_N, run.energy[i].E_N_h,
                         run.energy[i].D_N_h, run.gauss_residual[i],
                         run.div_B_residual[i]});

    if (o.common.plots && !run.t.empty()) {
        std::vector<double> e, d;
        for (const nsm::EnergyReport& r : run.energy) {
            e.push_back(r.E_N);
            d.push_back(r.D_N);
        }
        PlotSpec spec;
        spec.title = "energy and dissipation functionals, N = " +
                     std::to_string(o.order);
        spec.x_label = "t";
        spec.y_label = "functional value";
        spec.log_y = true;
        spec.series = {{"E_N", run.t, e}, {"D_N", run.t, d}};
        nsmcli::write_svg(join_path(o.common.out_dir, "simulate.svg"), spec);
        nsmcli::write_gnuplot_script(join_path(o.common.out_dir, "simulate.gp"),
                                     "simulate.csv", spec, 1,
                                     {{7, "E_N"}, {8, "D_N"}});
    }

    write_manifest(o.common.out_dir, "simulate",
                   {{"params", o.params.preset},
                    {"n", std::to_string(o.n)},
                    {"box", format_number(o.box)},
                    {"dt", format_number(o.dt)},
                    {"t-end", format_number(o.t_end)},
                    {"amplitude", format_number(o.amplitude)},
                    {"width", format_number(o.width)},
                    {"source", o.source},
                    {"stride", std::to_string(o.stride)},
                    {"order", std::to_string(o.order)},
                    {"out", o.common.out_dir},
                    {"plots", o.common.plots ? "true" : "false"}});

    if (run.aborted) {
        std::fprintf(stderr, "simulate: aborted at t = %g: %s\n",
                     run.t.empty() ? 0.0 : run.t.back(),
                     run.abort_reason.c_str());
        return 1;
    }
    double max_res = 0.0;
    for (std::size_t i = 0; i < run.t.size(); ++i)
        max_res = std::max({max_res, run.gauss_residual[i], run.div_B_residual[i]});
    double worst_rise = 0.0;
    for (std::size_t i = 1; i < run.energy.size(); ++i)
        worst_rise = std::max(worst_rise,
                              run.energy[i].E_N - run.energy[i - 1].E_N);
    const double e0 = run.energy.empty() ? 0.0 : run.energy.front().E_N;

    std::ostringstream sum;
    sum << "simulate: " << run.t.size() << " samples to t = " << run.t.back()
        << ", mass drift " << run.mass_drift_rel << ", max residual " << max_res
        << ", worst energy rise " << worst_rise;
    return report_check(run.mass_drift_rel <= 1e-12 && max_res <= 1e-10 &&
                            worst_rise <= 1e-8 * e0,
                        sum.str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nsm: semi-analytic verification toolkit for a dissipative "
                 "fluid-electromagnetic system (set NSM_THREADS to cap "
                 "parallelism)"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value config file; flags override");
    app.allow_config_extras(true);

    RootsOpts roots;
    CLI::App* c_roots = app.add_subcommand(
        "roots", "exact dispersion-cubic roots over an r grid -> roots.csv");
    add_param_flags(c_roots, &roots.params);
    add_common_flags(c_roots, &roots.common);
    c_roots->add_option("--a", roots.a, "cubic parameter a (default mu*beta)");
    c_roots->add_option("--r-grid", roots.r_grid,
                        "log:lo:hi:n | lin:lo:hi:n | comma list")
        ->capture_default_str();

    GreenOpts green;
    CLI::App* c_green = app.add_subcommand(
        "green", "evolve a seeded constrained mode -> green.csv "
                 "(t,n_abs,u_abs,E_abs,B_abs,total)");
    add_param_flags(c_green, &green.params);
    add_common_flags(c_green, &green.common);
    c_green->add_option("--k", green.k, "wavevector x,y,z")->capture_default_str();
    c_green->add_option("--t-grid", green.t_grid, "evaluation times")
        ->capture_default_str();
    c_green->add_option("--seed", green.seed, "mode seed")->capture_default_str();

    VerifyOpts verify;
    CLI::App* c_verify = app.add_subcommand(
        "verify-oracle", "propagator vs ODE oracle -> verify_oracle.csv "
                         "(max_rel_error,worst_t,worst_k_*,n_samples,tol)");
    add_param_flags(c_verify, &verify.params);
    add_common_flags(c_verify, &verify.common);
    c_verify->add_option("--k-grid", verify.k_grid, "wavenumber magnitudes")
        ->capture_default_str();
    c_verify->add_option("--t-grid", verify.t_grid, "evaluation times")
        ->capture_default_str();
    c_verify->add_option("--dirs", verify.n_dirs, "directions per magnitude (1..8)")
        ->capture_default_str();
    c_verify->add_option("--modes", verify.n_modes, "random modes per wavevector")
        ->capture_default_str();
    c_verify->add_option("--tol", verify.tol, "oracle integrator tolerance")
        ->capture_default_str();
    c_verify->add_option("--threshold", verify.threshold,
                         "pass threshold on the worst relative error")
        ->capture_default_str();
    c_verify->add_option("--seed", verify.seed, "mode seed")->capture_default_str();

    LyapunovOpts lyap;
    CLI::App* c_lyap = app.add_subcommand(
        "lyapunov", "weight search + per-k dissipation margins -> lyapunov.csv "
                    "(k,margin)");
    add_param_flags(c_lyap, &lyap.params);
    add_common_flags(c_lyap, &lyap.common);
    c_lyap->add_option("--k-grid", lyap.k_grid, "wavenumber grid")
        ->capture_default_str();
    c_lyap->add_option("--kappa1", lyap.kappa1, "fix kappa1 instead of searching");
    c_lyap->add_option("--kappa2", lyap.kappa2, "fix kappa2 instead of searching");
    c_lyap->add_option("--seed", lyap.seed, "mode seed")->capture_default_str();

    BoundsOpts bounds;
    CLI::App* c_bounds = app.add_subcommand(
        "bounds", "envelope-constant scan -> bounds.csv "
                  "(regime,response,source,C_fit,C_fit_half,max_at_window_end)");
    add_param_flags(c_bounds, &bounds.params);
    add_common_flags(c_bounds, &bounds.common);
    c_bounds->add_option("--t-max", bounds.t_max, "scan horizon")
        ->capture_default_str();
    c_bounds->add_option("--k-grid", bounds.k_grid, "wavenumber magnitudes")
        ->capture_default_str();
    c_bounds->add_option("--modes", bounds.n_modes, "random modes per wavevector")
        ->capture_default_str();
    c_bounds->add_option("--seed", bounds.seed, "mode seed")->capture_default_str();

    DecayOpts decay;
    CLI::App* c_decay = app.add_subcommand(
        "decay", "decay-exponent fit -> decay.csv + decay_series.csv "
                 "(t,n,u,E,B,grad_B)");
    add_param_flags(c_decay, &decay.params);
    add_common_flags(c_decay, &decay.common);
    c_decay->add_option("--component", decay.component, "n|u|E|B|gradB")
        ->capture_default_str();
    c_decay->add_option("--profile", decay.profile, "gaussian:<k-space width>")
        ->capture_default_str();
    c_decay->add_option("--source", decay.source,
                        "seeded channels: auto|all|comma list of n,u,E,B")
        ->capture_default_str();
    c_decay->add_option("--window", decay.window, "fit window lo:hi")
        ->capture_default_str();
    c_decay->add_option("--t-grid", decay.t_grid,
                        "sample times (default log over the window)");
    c_decay->add_option("--points", decay.points, "radial points per panel")
        ->capture_default_str();
    c_decay->add_option("--k-max", decay.k_max,
                        "quadrature cut (default: profile support)");
    c_decay->add_option("--expect", decay.expect, "check the exponent against this");
    c_decay->add_option("--rate-tol", decay.rate_tol, "tolerance for --expect")
        ->capture_default_str();

    SimulateOpts sim;
    CLI::App* c_sim = app.add_subcommand(
        "simulate", "nonlinear pseudospectral run -> simulate.csv "
                    "(t,mass,norms,functionals,residuals)");
    add_param_flags(c_sim, &sim.params);
    add_common_flags(c_sim, &sim.common);
    c_sim->add_option("--n", sim.n, "grid points per axis (power of two)")
        ->capture_default_str();
    c_sim->add_option("--box", sim.box, "box length")->capture_default_str();
    c_sim->add_option("--dt", sim.dt, "time step")->capture_default_str();
    c_sim->add_option("--t-end", sim.t_end, "final time")->capture_default_str();
    c_sim->add_option("--amplitude", sim.amplitude, "initial-data scale")
        ->capture_default_str();
    c_sim->add_option("--width", sim.width, "profile k-space width")
        ->capture_default_str();
    c_sim->add_option("--source", sim.source, "seeded channels: all|comma list")
        ->capture_default_str();
    c_sim->add_option("--stride", sim.stride, "diagnostics stride (steps)")
        ->capture_default_str();
    c_sim->add_option("--order", sim.order, "energy-functional order N")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // --help exits 0; parse errors exit 2
    }

    try {
        if (c_roots->parsed()) return cmd_roots(roots);
        if (c_green->parsed()) return cmd_green(green);
        if (c_verify->parsed()) return cmd_verify_oracle(verify);
        if (c_lyap->parsed()) return cmd_lyapunov(lyap);
        if (c_bounds->parsed()) return cmd_bounds(bounds);
        if (c_decay->parsed()) return cmd_decay(decay);
        if (c_sim->parsed()) return cmd_simulate(sim);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;  // unreachable with require_subcommand(1)
}
