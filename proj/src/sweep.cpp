#include "lrk/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "lrk/criticality.hpp"
#include "lrk/entanglement.hpp"
#include "lrk/entropy.hpp"
#include "lrk/hash.hpp"
#include "lrk/io.hpp"
#include "lrk/version.hpp"

namespace lrk {

std::string to_string(SweepOutput o) {
    switch (o) {
        case SweepOutput::gap: return "gap";
        case SweepOutput::xi: return "xi";
        case SweepOutput::profile: return "profile";
        case SweepOutput::entropy: return "entropy";
        case SweepOutput::scaling: return "scaling";
    }
    return "?";
}

SweepOutput parse_sweep_output(const std::string& name) {
    for (auto o : {SweepOutput::gap, SweepOutput::xi, SweepOutput::profile, SweepOutput::entropy,
                   SweepOutput::scaling}) {
        if (to_string(o) == name) return o;
    }
    throw InvalidInput("unknown sweep output '" + name + "'");
}

double SweepAxis::value(int i) const {
    if (steps == 1) return start;
    return start + (stop - start) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

SweepAxis parse_sweep_axis(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 4) throw InvalidInput("axis must be name:start:stop:steps, got '" + text + "'");
    SweepAxis a;
    a.name = parts[0];
    try {
        std::size_t used = 0;
        a.start = std::stod(parts[1], &used);
        if (used != parts[1].size()) throw std::invalid_argument("start");
        a.stop = std::stod(parts[2], &used);
        if (used != parts[2].size()) throw std::invalid_argument("stop");
        a.steps = std::stoi(parts[3], &used);
        if (used != parts[3].size()) throw std::invalid_argument("steps");
    } catch (const std::logic_error&) {
        throw InvalidInput("malformed axis '" + text + "'");
    }
    return a;
}

namespace {

double& field(ModelParams& p, const std::string& name) {
    if (name == "mu") return p.mu;
    if (name == "t") return p.t;
    if (name == "delta") return p.delta;
    if (name == "alpha") return p.alpha;
    if (name == "beta") return p.beta;
    throw InvalidInput("unknown sweep axis '" + name + "'");
}

}  // namespace

std::size_t SweepSpec::points() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= static_cast<std::size_t>(std::max(a.steps, 0));
    return n;
}

ModelParams SweepSpec::point(std::size_t index) const {
    ModelParams p = fixed;
    std::size_t rest = index;
    for (auto it = axes.rbegin(); it != axes.rend(); ++it) {
        const auto n = static_cast<std::size_t>(it->steps);
        field(p, it->name) = it->value(static_cast<int>(rest % n));
        rest /= n;
    }
    if (lock_beta) p.beta = p.alpha;
    return p;
}

void SweepSpec::validate() const {
    if (axes.size() > 2) throw InvalidInput("a sweep has at most 2 axes");
    for (const auto& a : axes) {
        ModelParams scratch;
        (void)field(scratch, a.name);
        if (a.steps < 2) throw InvalidInput("axis " + a.name + " needs at least 2 steps");
        if (!std::isfinite(a.start) || !std::isfinite(a.stop)) throw InvalidInput("axis bounds must be finite");
        if (lock_beta && a.name == "beta") throw InvalidInput("beta cannot be an axis when locked to alpha");
    }
    if (axes.size() == 2 && axes[0].name == axes[1].name) throw InvalidInput("sweep axes must differ");
    if (points() > static_cast<std::size_t>(budget)) {
        throw InvalidInput("sweep has " + std::to_string(points()) + " points, budget is " + std::to_string(budget));
    }
    if (workers < 1) throw InvalidInput("workers must be >= 1");
    if (outputs.empty()) throw InvalidInput("no sweep outputs requested");
    if (output_dir.empty()) throw InvalidInput("sweep needs an output directory");
    if (d_max < 1 || l_max < 4 || scaling_d_max < 1 || tail_run < 0) throw InvalidInput("invalid sweep sizes");
    quad.validate();
}

namespace {

const std::vector<std::string> kParamColumns{"index", "mu", "t", "delta", "alpha", "beta"};

std::vector<std::string> columns(std::initializer_list<std::string> extra) {
    auto c = kParamColumns;
    c.insert(c.end(), extra);
    return c;
}

std::vector<std::string> param_cells(std::size_t index, const ModelParams& p) {
    return {std::to_string(index), format_double(p.mu), format_double(p.t), format_double(p.delta),
            format_double(p.alpha), format_double(p.beta)};
}

std::vector<std::string> row(std::size_t index, const ModelParams& p, std::initializer_list<std::string> extra) {
    auto r = param_cells(index, p);
    r.insert(r.end(), extra);
    return r;
}

std::string flag(bool b) { return b ? "1" : "0"; }

struct Tables {
    CsvTable gap{columns({"gap", "k_min", "closed", "interior_closing", "alpha_star_plus", "alpha_star_minus"})};
    CsvTable xi{columns({"xi_cut", "xi_fit", "c_inf", "tau_inf", "converged", "ckw_holds", "sqrt_holds"})};
    CsvTable profile{columns({"d", "c_d", "tau_d", "c_partial", "tau_partial"})};
    CsvTable entropy{columns({"l", "s_a"})};
    CsvTable entropy_fit{columns({"c", "s0", "residual", "curved", "window_lo", "window_hi"})};
    CsvTable scaling{columns({"side", "d", "k_d", "correlation", "points", "q", "q_prime"})};
    std::vector<PointFailure> failures;

    void append(const Tables& o) {
        gap.append(o.gap);
        xi.append(o.xi);
        profile.append(o.profile);
        entropy.append(o.entropy);
        entropy_fit.append(o.entropy_fit);
        scaling.append(o.scaling);
        failures.insert(failures.end(), o.failures.begin(), o.failures.end());
    }
};

bool wants(const SweepSpec& s, SweepOutput o) {
    return std::find(s.outputs.begin(), s.outputs.end(), o) != s.outputs.end();
}

void guarded(Tables& t, std::size_t index, const std::string& what, const std::function<void()>& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        t.failures.push_back({index, what, e.what()});
    }
}

void evaluate_point(const SweepSpec& s, std::size_t index, Tables& out) {
    const ModelParams p = s.point(index);
    try {
        p.validate();
    } catch (const std::exception& e) {
        out.failures.push_back({index, "params", e.what()});
        return;
    }

    if (wants(s, SweepOutput::gap)) {
        guarded(out, index, "gap", [&] {
            const auto g = global_gap(p);
            std::string plus, minus;
            for (const auto& b : phase_boundary(p)) {
                (b.branch == BoundaryBranch::plus ? plus : minus) = format_double(b.alpha_star);
            }
            out.gap.add_row(row(index, p,
                                {format_double(g.gap), format_double(g.k_min), flag(g.closed),
                                 flag(g.interior_closing), plus, minus}));
        });
    }

    if (wants(s, SweepOutput::xi) || wants(s, SweepOutput::profile)) {
        guarded(out, index, "profile", [&] {
            const auto prof = entanglement_profile(p, s.d_max, s.quad, s.tail_run);
            if (wants(s, SweepOutput::xi)) {
                const auto mono = check_monogamy(prof);
                out.xi.add_row(row(index, p,
                                   {std::to_string(prof.xi_cut), format_double(prof.xi_fit),
                                    format_double(prof.c_inf), format_double(prof.tau_inf), flag(prof.converged),
                                    flag(mono.ckw_holds), flag(mono.sqrt_holds)}));
            }
            if (wants(s, SweepOutput::profile)) {
                for (int d = 1; d <= prof.evaluated(); ++d) {
                    const auto k = static_cast<std::size_t>(d - 1);
                    out.profile.add_row(row(index, p,
                                            {std::to_string(d), format_double(prof.c_d[k]),
                                             format_double(prof.tau_d[k]), format_double(prof.c_partial[k]),
                                             format_double(prof.tau_partial[k])}));
                }
            }
        });
    }

    if (wants(s, SweepOutput::entropy)) {
        guarded(out, index, "entropy", [&] {
            const auto lengths = log_spaced_lengths(s.l_max);
            const auto tbl = correlator_table(p, s.l_max, s.quad);
            const auto curve = entropy_curve(tbl, lengths, std::max(4, s.l_max / 8), s.l_max);
            for (std::size_t i = 0; i < curve.lengths.size(); ++i) {
                out.entropy.add_row(row(index, p, {std::to_string(curve.lengths[i]), format_double(curve.s_a[i])}));
            }
            const auto& f = curve.fit;
            out.entropy_fit.add_row(row(index, p,
                                        {format_double(f.c), format_double(f.s0), format_double(f.residual),
                                         flag(f.curved), std::to_string(f.window_lo), std::to_string(f.window_hi)}));
        });
    }

    if (wants(s, SweepOutput::scaling)) {
        for (auto side : {Side::above, Side::below}) {
            const std::string name = side == Side::above ? "above" : "below";
            guarded(out, index, "scaling_" + name, [&] {
                const auto scan = log_divergence_scan(p, s.scaling_d_max, side);
                std::optional<KdFit> kd;
                if (scan.fits.size() >= 4) kd = kd_linear_fit(scan.fits);
                for (const auto& f : scan.fits) {
                    out.scaling.add_row(row(index, p,
                                            {name, std::to_string(f.d), format_double(f.k_d),
                                             format_double(f.correlation), std::to_string(f.points),
                                             kd ? format_double(kd->q) : "", kd ? format_double(kd->q_prime) : ""}));
                }
            });
        }
    }
}

nlohmann::json spec_json(const SweepSpec& s) {
    nlohmann::json axes = nlohmann::json::array();
    for (const auto& a : s.axes) axes.push_back({{"name", a.name}, {"start", a.start}, {"stop", a.stop}, {"steps", a.steps}});
    nlohmann::json outputs = nlohmann::json::array();
    for (auto o : s.outputs) outputs.push_back(to_string(o));
    return {{"axes", axes},
            {"fixed",
             {{"mu", s.fixed.mu}, {"t", s.fixed.t}, {"delta", s.fixed.delta}, {"alpha", s.fixed.alpha},
              {"beta", s.fixed.beta}}},
            {"lock_beta", s.lock_beta},
            {"outputs", outputs},
            {"workers", s.workers},
            {"budget", s.budget},
            {"d_max", s.d_max},
            {"tail_run", s.tail_run},
            {"l_max", s.l_max},
            {"scaling_d_max", s.scaling_d_max}};
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
    spec.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t n = spec.points();
    const auto workers = static_cast<std::size_t>(std::min<std::size_t>(static_cast<std::size_t>(spec.workers), n));

    // Point i goes to worker i % workers; results are merged in grid order.
    std::vector<Tables> per_point(n);
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < n; i += workers) evaluate_point(spec, i, per_point[i]);
            });
        }
    }
    Tables all;
    for (const auto& t : per_point) all.append(t);

    std::filesystem::create_directories(spec.output_dir);
    SweepResult result;
    auto emit = [&](const std::string& name, const CsvTable& table) {
        const auto text = table.str();
        write_text_file(spec.output_dir / name, text);
        Fnv1a64 h;
        h.update(std::string_view(text));
        result.files.push_back({name, h.hex(), table.rows()});
    };
    if (wants(spec, SweepOutput::gap)) emit("gap.csv", all.gap);
    if (wants(spec, SweepOutput::xi)) emit("xi.csv", all.xi);
    if (wants(spec, SweepOutput::profile)) emit("profile.csv", all.profile);
    if (wants(spec, SweepOutput::entropy)) {
        emit("entropy.csv", all.entropy);
        emit("entropy_fit.csv", all.entropy_fit);
    }
    if (wants(spec, SweepOutput::scaling)) emit("scaling.csv", all.scaling);
    result.failures = std::move(all.failures);
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    nlohmann::json files = nlohmann::json::array();
    for (const auto& f : result.files) files.push_back({{"name", f.name}, {"fnv1a64", f.hash}, {"rows", f.rows}});
    nlohmann::json failures = nlohmann::json::array();
    for (const auto& f : result.failures) {
        failures.push_back({{"index", f.index}, {"output", f.output}, {"reason", f.reason}});
    }
    const nlohmann::json manifest{
        {"tool", "lrk"},
        {"version", kVersion},
        {"spec", spec_json(spec)},
        {"points", n},
        {"tolerances",
         {{"abs_tol", spec.quad.abs_tol},
          {"max_subdivisions", spec.quad.max_subdivisions},
          {"grid_size", spec.quad.grid_size}}},
        {"wall_seconds", result.wall_seconds},
        {"files", files},
        {"failures", failures}};
    write_text_file(spec.output_dir / "manifest.json", manifest.dump(2) + "\n");
    return result;
}

}  // namespace lrk
