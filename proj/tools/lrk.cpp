// Command-line front end: dispersion, boundary, profile, entropy, scaling,
// oracle-check and sweep. JSON summary on stdout; CSV files with --out.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lrk/criticality.hpp"
#include "lrk/entanglement.hpp"
#include "lrk/entropy.hpp"
#include "lrk/hash.hpp"
#include "lrk/io.hpp"
#include "lrk/oracle.hpp"
#include "lrk/sweep.hpp"
#include "lrk/version.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Common {
    lrk::ModelParams params{};
    bool lock_beta = false;
    std::optional<double> tol;
    std::optional<int> d_max;
    int workers = 1;
    std::string out;

    lrk::ModelParams model() const { return lock_beta ? params.with_locked_decay() : params; }
    lrk::QuadratureConfig quad(lrk::QuadratureConfig q = {}) const {
        if (tol) q.abs_tol = *tol;
        q.validate();
        return q;
    }
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--mu", c.params.mu, "chemical potential")->capture_default_str();
    sub->add_option("--t", c.params.t, "hopping scale")->capture_default_str();
    sub->add_option("--delta", c.params.delta, "pairing scale")->capture_default_str();
    sub->add_option("--alpha", c.params.alpha, "hopping decay rate")->capture_default_str();
    sub->add_option("--beta", c.params.beta, "pairing decay rate")->capture_default_str();
    sub->add_flag("--lock-beta", c.lock_beta, "set beta = alpha");
    sub->add_option("--tol", c.tol, "quadrature absolute tolerance");
    sub->add_option("--dmax", c.d_max, "largest separation");
    sub->add_option("--workers", c.workers, "worker threads (sweep)")->check(CLI::PositiveNumber);
    sub->add_option("--out", c.out, "directory for CSV and summary files");
}

// Column-oriented table rendered both as CSV and as JSON arrays.
struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;

    void add(std::vector<json> r) { rows.push_back(std::move(r)); }

    lrk::CsvTable csv() const {
        lrk::CsvTable t(columns);
        for (const auto& r : rows) {
            std::vector<std::string> cells;
            for (const auto& v : r) {
                if (v.is_null()) cells.emplace_back();
                else if (v.is_boolean()) cells.emplace_back(v.get<bool>() ? "1" : "0");
                else if (v.is_string()) cells.push_back(v.get<std::string>());
                else if (v.is_number_integer()) cells.push_back(std::to_string(v.get<long long>()));
                else cells.push_back(lrk::format_double(v.get<double>()));
            }
            t.add_row(std::move(cells));
        }
        return t;
    }

    json columns_json() const {
        json out = json::object();
        for (std::size_t c = 0; c < columns.size(); ++c) {
            json col = json::array();
            for (const auto& r : rows) col.push_back(r[c]);
            out[columns[c]] = col;
        }
        return out;
    }
};

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json params_json(const lrk::ModelParams& p) {
    return {{"mu", p.mu}, {"t", p.t}, {"delta", p.delta}, {"alpha", p.alpha}, {"beta", p.beta}};
}

void emit(json summary, const std::vector<Table>& tables, const std::string& out) {
    if (out.empty()) {
        for (const auto& t : tables) summary[t.name] = t.columns_json();
    } else {
        fs::create_directories(out);
        json files = json::array();
        for (const auto& t : tables) {
            const auto text = t.csv().str();
            const auto name = t.name + ".csv";
            lrk::write_text_file(fs::path(out) / name, text);
            lrk::Fnv1a64 h;
            h.update(std::string_view(text));
            files.push_back({{"name", name}, {"fnv1a64", h.hex()}, {"rows", t.rows.size()}});
        }
        summary["files"] = files;
        lrk::write_text_file(fs::path(out) / "summary.json", summary.dump(2) + "\n");
    }
    std::cout << summary.dump(2) << "\n";
}

int run_dispersion(const Common& c, int points) {
    const auto p = c.model();
    p.validate();
    if (points < 2) throw lrk::InvalidInput("--points must be >= 2");
    Table t{"dispersion", {"k", "eps1", "eps2", "energy"}, {}};
    for (int i = 0; i < points; ++i) {
        const double k = std::numbers::pi * i / (points - 1);
        const auto s = lrk::band_energy(k, p);
        t.add({s.k, s.eps1, s.eps2, s.energy});
    }
    const auto g = lrk::global_gap(p);
    json summary{{"params", params_json(p)},
                 {"gap", {{"value", g.gap}, {"k_min", g.k_min}, {"closed", g.closed},
                          {"interior_closing", g.interior_closing}}}};
    emit(summary, {t}, c.out);
    return 0;
}

int run_boundary(const Common& c) {
    const auto p = c.model();
    p.validate();
    json alphas = json::array();
    for (const auto& b : lrk::phase_boundary(p)) {
        json entry{{"alpha_star", b.alpha_star}, {"branch", lrk::to_string(b.branch)},
                   {"closing_momentum", b.closing_momentum}};
        auto at = p;
        at.alpha = b.alpha_star;
        if (c.lock_beta) at.beta = at.alpha;
        entry["gap_at_alpha_star"] = lrk::global_gap(at).gap;
        for (double off : {-0.05, 0.05}) {
            auto q = at;
            q.alpha = b.alpha_star + off;
            if (c.lock_beta) q.beta = q.alpha;
            if (q.alpha > 0.0) entry[off < 0 ? "gap_below" : "gap_above"] = lrk::global_gap(q).gap;
        }
        alphas.push_back(entry);
    }
    json mus = json::array();
    for (const auto& m : lrk::critical_mu(p)) {
        mus.push_back({{"mu_star", m.mu_star}, {"branch", lrk::to_string(m.branch)},
                       {"closing_momentum", m.closing_momentum}});
    }
    json summary{{"params", params_json(p)}, {"alpha_star", alphas}, {"mu_star", mus}};
    if (alphas.size() == 1) summary["alpha_star_value"] = alphas[0]["alpha_star"];
    emit(summary, {}, c.out);
    return 0;
}

int run_profile(const Common& c, int tail_run) {
    const auto p = c.model();
    const int d_max = c.d_max.value_or(400);
    const auto prof = lrk::entanglement_profile(p, d_max, c.quad(), tail_run);
    Table t{"profile", {"d", "c_d", "tau_d", "c_partial", "tau_partial", "branch"}, {}};
    for (int d = 1; d <= prof.evaluated(); ++d) {
        const auto k = static_cast<std::size_t>(d - 1);
        t.add({d, prof.c_d[k], prof.tau_d[k], prof.c_partial[k], prof.tau_partial[k], prof.branch[k]});
    }
    const auto mono = lrk::check_monogamy(prof);
    json summary{{"params", params_json(p)},
                 {"d_max", d_max},
                 {"evaluated", prof.evaluated()},
                 {"xi_cut", prof.xi_cut},
                 {"xi_fit", num(prof.xi_fit)},
                 {"c_inf", prof.c_inf},
                 {"tau_inf", prof.tau_inf},
                 {"c_inf_error", prof.c_inf_error},
                 {"converged", prof.converged},
                 {"monogamy",
                  {{"ckw_holds", mono.ckw_holds}, {"sqrt_holds", mono.sqrt_holds},
                   {"ckw_margin", mono.ckw_margin}, {"sqrt_margin", mono.sqrt_margin},
                   {"findings", mono.findings}}}};
    if (prof.xi_cut >= 2) {
        const auto w = lrk::exponential_regime(prof);
        const auto fit = lrk::log_decay_fit(prof, w.lo, w.hi);
        summary["decay_fit"] = {{"d_lo", w.lo}, {"d_hi", w.hi}, {"slope", fit.slope}, {"r2", num(fit.r2)}};
    }
    if (std::isfinite(prof.xi_fit) && prof.xi_fit >= lrk::kKbiMinXi) {
        const auto kbi = lrk::check_kbi_relation(prof);
        summary["kbi"] = {{"r1", num(kbi.r1)}, {"r2", num(kbi.r2)}, {"r1_cut", num(kbi.r1_cut)},
                          {"within_band", kbi.within_band}};
    } else {
        summary["kbi"] = nullptr;
    }
    emit(summary, {t}, c.out);
    return 0;
}

int run_entropy(const Common& c, int l_max, int per_octave, std::optional<int> lo, std::optional<int> hi) {
    const auto p = c.model();
    const auto lengths = lrk::log_spaced_lengths(l_max, per_octave);
    const auto tbl = lrk::correlator_table(p, l_max, c.quad());
    const auto curve = lrk::entropy_curve(tbl, lengths, lo.value_or(std::max(1, l_max / 8)), hi.value_or(l_max));
    Table t{"entropy", {"l", "s_a"}, {}};
    for (std::size_t i = 0; i < curve.lengths.size(); ++i) t.add({curve.lengths[i], curve.s_a[i]});
    const auto& f = curve.fit;
    json summary{{"params", params_json(p)},
                 {"fit",
                  {{"c", f.c}, {"s0", f.s0}, {"residual", f.residual}, {"curvature", f.curvature},
                   {"curved", f.curved}, {"points", f.points}, {"window_lo", f.window_lo},
                   {"window_hi", f.window_hi}}}};
    emit(summary, {t}, c.out);
    return 0;
}

struct ScalingOptions {
    std::string side = "both";
    std::string axis = "alpha";
    double step = 1e-6;
    double log_lo = -11.0;
    double log_hi = -8.0;
    int samples = 12;
};

int run_scaling(const Common& c, const ScalingOptions& o) {
    const auto p = c.model();
    lrk::CriticalityConfig cfg;
    cfg.step = o.step;
    cfg.quad = c.quad(cfg.quad);
    if (o.axis == "alpha") cfg.axis = lrk::ScanAxis::alpha;
    else if (o.axis == "mu") cfg.axis = lrk::ScanAxis::mu;
    else throw lrk::InvalidInput("--axis must be alpha or mu");
    std::vector<lrk::Side> sides;
    if (o.side == "above" || o.side == "both") sides.push_back(lrk::Side::above);
    if (o.side == "below" || o.side == "both") sides.push_back(lrk::Side::below);
    if (sides.empty()) throw lrk::InvalidInput("--side must be above, below or both");
    const int d_max = c.d_max.value_or(8);
    const lrk::LogWindow w{o.log_lo, o.log_hi, o.samples};

    Table samples{"derivatives", {"side", "log_offset", "value", "d", "derivative", "error", "reliable", "kink"}, {}};
    Table fits{"scaling", {"side", "d", "k_d", "k_d_error", "intercept", "correlation", "residual", "points"}, {}};
    json summary{{"params", params_json(p)}, {"axis", o.axis}, {"window", {{"lo", w.lo}, {"hi", w.hi}, {"samples", w.samples}}},
                 {"step", o.step}};
    json per_side = json::object();
    for (auto side : sides) {
        const std::string name = side == lrk::Side::above ? "above" : "below";
        const auto scan = lrk::log_divergence_scan(p, d_max, side, w, cfg);
        summary["critical"] = scan.critical;
        for (std::size_t s = 0; s < scan.log_offsets.size(); ++s) {
            for (int d = 1; d <= d_max; ++d) {
                const auto& e = scan.derivatives[s][static_cast<std::size_t>(d - 1)];
                samples.add({name, scan.log_offsets[s], scan.values[s], d, e.value, e.error, e.reliable, e.kink});
            }
        }
        double min_corr = 1.0;
        for (const auto& f : scan.fits) {
            fits.add({name, f.d, f.k_d, f.k_d_error, f.intercept, f.correlation, f.residual, f.points});
            min_corr = std::min(min_corr, std::abs(f.correlation));
        }
        json entry{{"min_abs_correlation", min_corr}};
        if (scan.fits.size() >= 4) {
            const auto kd = lrk::kd_linear_fit(scan.fits);
            entry["q"] = kd.q;
            entry["q_prime"] = kd.q_prime;
            entry["kd_correlation"] = kd.correlation;
            entry["nonlinear"] = kd.nonlinear;
        }
        per_side[name] = entry;
    }
    summary["sides"] = per_side;
    emit(summary, {fits, samples}, c.out);
    return 0;
}

int run_oracle(const Common& c, int sites, int x_max) {
    const auto p = c.model();
    const auto report = lrk::oracle_validation(p, sites, x_max, c.d_max.value_or(8), c.quad());
    json checks = json::array();
    for (const auto& ch : report.checks) {
        checks.push_back({{"name", ch.name}, {"max_error", ch.max_error}, {"tolerance", ch.tolerance},
                          {"passed", ch.passed}});
    }
    json summary{{"params", params_json(p)}, {"n_sites", sites}, {"checks", checks}, {"passed", report.passed()}};
    emit(summary, {}, c.out);
    return report.passed() ? 0 : 2;
}

int run_sweep_cmd(const Common& c, const std::vector<std::string>& axes, const std::string& outputs, int budget,
                  int l_max, int tail_run) {
    lrk::SweepSpec spec;
    for (const auto& a : axes) spec.axes.push_back(lrk::parse_sweep_axis(a));
    spec.fixed = c.params;
    spec.lock_beta = c.lock_beta;
    spec.outputs.clear();
    std::stringstream ss(outputs);
    for (std::string item; std::getline(ss, item, ',');) {
        if (!item.empty()) spec.outputs.push_back(lrk::parse_sweep_output(item));
    }
    if (c.out.empty()) throw lrk::InvalidInput("sweep requires --out");
    spec.output_dir = c.out;
    spec.workers = c.workers;
    spec.budget = budget;
    spec.d_max = c.d_max.value_or(spec.d_max);
    spec.l_max = l_max;
    spec.tail_run = tail_run;
    spec.quad = c.quad();
    const auto r = lrk::run_sweep(spec);
    json files = json::array();
    for (const auto& f : r.files) files.push_back({{"name", f.name}, {"fnv1a64", f.hash}, {"rows", f.rows}});
    json summary{{"points", spec.points()}, {"files", files}, {"failures", r.failures.size()},
                 {"wall_seconds", r.wall_seconds}, {"manifest", (fs::path(c.out) / "manifest.json").string()}};
    std::cout << summary.dump(2) << "\n";
    return 0;
}

// Splices `key = value` entries from --config FILE in front of the
// subcommand's own arguments, so later command-line flags win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::optional<std::string> path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<long>(i));
            break;
        }
    }
    if (!path || args.size() < 2) return args;

    std::set<std::string> given;
    for (std::size_t i = 2; i < args.size(); ++i) {
        if (args[i].rfind("--", 0) == 0) given.insert(args[i].substr(2, args[i].find('=') - 2));
    }
    std::vector<std::string> injected;
    for (auto [key, value] : lrk::load_config(*path)) {
        std::replace(key.begin(), key.end(), '_', '-');
        if (given.contains(key)) {
            std::cerr << "notice: --" << key << " on the command line overrides config value '" << value << "'\n";
            continue;
        }
        injected.push_back("--" + key + "=" + value);
    }
    args.insert(args.begin() + 2, injected.begin(), injected.end());
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entanglement and criticality of the long-range p-wave chain"};
    app.set_version_flag("--version", lrk::kVersion);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);

    Common common;

    int points = 257;
    auto* dispersion = app.add_subcommand("dispersion", "E(k) table and global gap");
    add_common(dispersion, common);
    dispersion->add_option("--points", points, "momenta on [0, pi]")->capture_default_str();

    auto* boundary = app.add_subcommand("boundary", "analytic phase boundaries");
    add_common(boundary, common);

    int tail_run = 32;
    auto* profile = app.add_subcommand("profile", "concurrence profile, totals and bound checks");
    add_common(profile, common);
    profile->add_option("--tail-run", tail_run, "stop after this many trailing zeros (0 = never)")
        ->capture_default_str();

    int l_max = 256, per_octave = 4;
    std::optional<int> window_lo, window_hi;
    auto* entropy = app.add_subcommand("entropy", "block entropy and central charge");
    add_common(entropy, common);
    entropy->add_option("--lmax", l_max, "largest block")->capture_default_str();
    entropy->add_option("--per-octave", per_octave, "block sizes per doubling")->capture_default_str();
    entropy->add_option("--window-lo", window_lo, "fit window start (default lmax/8)");
    entropy->add_option("--window-hi", window_hi, "fit window end (default lmax)");

    ScalingOptions so;
    auto* scaling = app.add_subcommand("scaling", "derivative divergence fits and k_d = q d + q'");
    add_common(scaling, common);
    scaling->add_option("--side", so.side, "above, below or both")->capture_default_str();
    scaling->add_option("--axis", so.axis, "alpha or mu")->capture_default_str();
    scaling->add_option("--step", so.step, "finite-difference step")->capture_default_str();
    scaling->add_option("--log-lo", so.log_lo, "window start in ln|x - x*|")->capture_default_str();
    scaling->add_option("--log-hi", so.log_hi, "window end in ln|x - x*|")->capture_default_str();
    scaling->add_option("--samples", so.samples, "samples per side")->capture_default_str();

    int sites = 512, x_max = 20;
    auto* oracle = app.add_subcommand("oracle-check", "finite-ring validation report");
    add_common(oracle, common);
    oracle->add_option("--sites", sites, "ring size")->capture_default_str();
    oracle->add_option("--xmax", x_max, "largest |x| compared")->capture_default_str();

    std::vector<std::string> axes;
    std::string outputs = "gap";
    int budget = 10000, sweep_lmax = 64, sweep_tail = 16;
    auto* sweep = app.add_subcommand("sweep", "grid sweep with CSV output and manifest");
    add_common(sweep, common);
    sweep->add_option("--axis", axes, "name:start:stop:steps (at most twice)")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    sweep->add_option("--outputs", outputs, "comma list of gap,xi,profile,entropy,scaling")->capture_default_str();
    sweep->add_option("--budget", budget, "maximum grid points")->capture_default_str();
    sweep->add_option("--lmax", sweep_lmax, "largest block for entropy")->capture_default_str();
    sweep->add_option("--tail-run", sweep_tail, "profile early-stop run")->capture_default_str();

    try {
        auto args = expand_config(std::vector<std::string>(argv, argv + argc));
        // CLI11 wants the arguments after the program name in reverse order.
        std::vector<std::string> rest(args.rbegin(), args.rend() - 1);
        app.parse(rest);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const lrk::InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (*dispersion) return run_dispersion(common, points);
        if (*boundary) return run_boundary(common);
        if (*profile) return run_profile(common, tail_run);
        if (*entropy) return run_entropy(common, l_max, per_octave, window_lo, window_hi);
        if (*scaling) return run_scaling(common, so);
        if (*oracle) return run_oracle(common, sites, x_max);
        if (*sweep) return run_sweep_cmd(common, axes, outputs, budget, sweep_lmax, sweep_tail);
    } catch (const lrk::InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const lrk::NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
