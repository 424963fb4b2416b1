// Copyright (c) the semiflow contributors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: decides whether A f = G f' generates a
// quasicontractive semigroup of composition operators, builds the induced
// flows, and prints operator-norm and numerical-range diagnostics as JSON/CSV.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "semiflow/flow.hpp"
#include "semiflow/generator.hpp"
#include "semiflow/io.hpp"
#include "semiflow/operators.hpp"
#include "semiflow/series.hpp"

namespace {

using namespace semiflow;

constexpr int kExitGenerates = 0;
constexpr int kExitDoesNotGenerate = 1;
constexpr int kExitMarginal = 2;
constexpr int kExitBoundary = 3;
constexpr int kExitBadInput = 64;

std::size_t trunc_cap_from_env() {
    const char* s = std::getenv("SEMIFLOW_MAX_TRUNC");
    if (!s) return kDefaultTruncCap;
    char* end = nullptr;
    const long v = std::strtol(s, &end, 10);
    if (end == s || *end != '\0' || v < 8)
        throw std::invalid_argument("SEMIFLOW_MAX_TRUNC must be an integer >= 8");
    return std::size_t(v);
}

TruncatedSeries parse_series_arg(const std::string& lit) {
    return TruncatedSeries(parse_coefficients(lit));
}

WeightSequence resolve_space(const std::string& space, const std::string& custom) {
    if (!custom.empty()) {
        std::vector<double> vals;
        for (Complex c : parse_coefficients(custom)) {
            if (c.imag() != 0.0)
                throw std::invalid_argument("custom weights must be real");
            vals.push_back(c.real());
        }
        return WeightSequence::custom(std::move(vals));
    }
    return parse_weight_kind(space);
}

std::vector<double> parse_real_list(const std::string& lit) {
    std::vector<double> out;
    for (Complex c : parse_coefficients(lit)) out.push_back(c.real());
    return out;
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

struct CheckOptions {
    std::string generator;
    std::size_t grid_radii = 100, grid_angles = 100;
    double tol = 1e-9;
    std::string mode = "certified";
};

int run_check(const CheckOptions& o) {
    const TruncatedSeries G = parse_series_arg(o.generator);
    AnalyzeOptions opts;
    opts.grid.n_radii = o.grid_radii;
    opts.grid.n_angles = o.grid_angles;
    opts.tol = o.tol;
    opts.boundary_mode = o.mode == "sampled" ? BoundaryMode::Sampled : BoundaryMode::Certified;
    const ConditionReport report = analyze_generator(G, opts);
    std::cout << condition_report_json(G, report) << "\n";
    switch (report.verdict) {
        case GenerationVerdict::Generates: return kExitGenerates;
        case GenerationVerdict::Marginal: return kExitMarginal;
        case GenerationVerdict::DoesNotGenerate: return kExitDoesNotGenerate;
    }
    return kExitDoesNotGenerate;
}

// ---------------------------------------------------------------------------
// flow
// ---------------------------------------------------------------------------

struct FlowOptions {
    std::string generator;
    std::string z0 = "0";
    double t_end = 1.0;
    bool numeric = false;
    bool json = false;
    std::size_t samples = 256;
    double rel_tol = StepControl{}.rel_tol;
    double abs_tol = StepControl{}.abs_tol;
    double exit_margin = StepControl{}.exit_margin;
};

int run_flow(const FlowOptions& o) {
    const TruncatedSeries G = parse_series_arg(o.generator);
    const Complex z0 = parse_complex(o.z0);
    if (std::abs(z0) >= 1.0) throw std::invalid_argument("flow: |z0| must be < 1");
    if (!(o.t_end > 0.0)) throw std::invalid_argument("flow: t must be > 0");

    const SemiflowModel model = SemiflowModel::classify(G);
    StepControl ctrl;
    ctrl.rel_tol = o.rel_tol;
    ctrl.abs_tol = o.abs_tol;
    ctrl.exit_margin = o.exit_margin;

    Trajectory traj;
    if (model.is_closed_form() && !o.numeric) {
        traj.times.push_back(0.0);
        traj.points.push_back(z0);
        traj.speeds.push_back(2.0 * std::abs(G.eval(z0)) / (1.0 - std::norm(z0)));
        for (std::size_t i = 1; i <= o.samples; ++i) {
            const double t = o.t_end * double(i) / double(o.samples);
            Complex w;
            try {
                w = evaluate_flow(model, t, z0);
            } catch (const std::domain_error& e) {
                traj.status = Trajectory::Status::BoundaryExit;
                traj.note = e.what();
                break;
            }
            const double r = std::abs(w);
            traj.times.push_back(t);
            traj.points.push_back(w);
            traj.speeds.push_back(r < 1.0 ? 2.0 * std::abs(G.eval(w)) / ((1.0 - r) * (1.0 + r))
                                          : std::numeric_limits<double>::infinity());
            if (r >= 1.0 - ctrl.exit_margin) {
                traj.status = Trajectory::Status::BoundaryExit;
                traj.note = "trajectory reached the unit circle";
                break;
            }
        }
    } else {
        traj = integrate_flow(G, o.t_end, z0, ctrl);
    }

    if (o.json)
        std::cout << trajectory_json(traj, model.variant_name(), G) << "\n";
    else
        std::cout << trajectory_csv(traj);
    if (traj.status == Trajectory::Status::StepUnderflow)
        throw std::runtime_error("flow: integration failed (" + traj.note + ")");
    return traj.status == Trajectory::Status::BoundaryExit ? kExitBoundary : 0;
}

// ---------------------------------------------------------------------------
// dw
// ---------------------------------------------------------------------------

struct DwOptions {
    std::string generator;
    double move_tol = StepControl{}.dw_move_tol;
    double t_max = StepControl{}.dw_t_max;
};

int run_dw(const DwOptions& o) {
    const TruncatedSeries G = parse_series_arg(o.generator);
    const SemiflowModel model = SemiflowModel::classify(G);
    if (!model.is_closed_form()) {
        const ConditionCResult c = condition_c(G);
        if (!c.pass)
            throw std::runtime_error(
                "dw: generator fails the boundary test; the numeric flow has no attracting point");
    }
    StepControl ctrl;
    ctrl.dw_move_tol = o.move_tol;
    ctrl.dw_t_max = o.t_max;
    const DenjoyWolffResult dw = denjoy_wolff(model, ctrl);
    JsonWriter w;
    w.begin_object();
    w.key("variant").value(model.variant_name());
    w.key("alpha").value(dw.point);
    w.key("boundary").value(dw.boundary);
    w.key("converged").value(dw.converged);
    w.end_object();
    std::cout << w.take() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// factor
// ---------------------------------------------------------------------------

struct FactorOptions {
    std::string generator;
    std::string alpha;
    bool auto_alpha = false;
};

int run_factor(const FactorOptions& o) {
    const TruncatedSeries G = parse_series_arg(o.generator);
    Complex alpha;
    if (o.auto_alpha) {
        alpha = denjoy_wolff(SemiflowModel::classify(G)).point;
    } else if (!o.alpha.empty()) {
        alpha = parse_complex(o.alpha);
    } else {
        throw std::invalid_argument("factor: provide --alpha or --auto");
    }
    const BerksonPortaResult res = berkson_porta_factor(G, alpha, trunc_cap_from_env());
    std::cout << berkson_porta_json(alpha, res) << "\n";
    return res.pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// norm
// ---------------------------------------------------------------------------

struct NormOptions {
    std::string generator;
    std::string space = "hardy";
    std::string custom_weights;
    double t = 1.0;
    std::size_t N = 64;
    std::string dump_section;         // file path; CSV
    std::string dump_section_json;    // file path; JSON
};

int run_norm(const NormOptions& o) {
    const TruncatedSeries G = parse_series_arg(o.generator);
    const WeightSequence beta = resolve_space(o.space, o.custom_weights);
    const SemiflowModel model = SemiflowModel::classify(G);
    const TruncatedSeries phi = flow_series(model, o.t, o.N + 48);
    const FiniteSection sec = finite_section(FiniteSection::Kind::Composition, phi, o.N, beta);
    const double norm = operator_norm(sec);
    const Complex phi0 = evaluate_flow(model, o.t, Complex(0.0));

    std::optional<double> bound;
    if (beta.kind() == WeightSequence::Kind::Hardy) bound = hardy_norm_bound(phi0);
    if (beta.kind() == WeightSequence::Kind::Dirichlet) bound = dirichlet_norm_bound(phi0);

    if (!o.dump_section.empty()) {
        std::ofstream out(o.dump_section);
        if (!out) throw std::runtime_error("norm: cannot write " + o.dump_section);
        out << section_csv(sec);
    }
    if (!o.dump_section_json.empty()) {
        std::ofstream out(o.dump_section_json);
        if (!out) throw std::runtime_error("norm: cannot write " + o.dump_section_json);
        out << section_json(sec) << "\n";
    }

    JsonWriter w;
    w.begin_object();
    w.key("space").value(beta.name());
    w.key("t").value(o.t);
    w.key("N").value_int(static_cast<long long>(o.N));
    w.key("phi0").value(phi0);
    w.key("section_norm").value(norm);
    w.key("bound");
    if (bound) w.value(*bound); else w.value_null();
    w.key("tail_mass").value(sec.tail_mass);
    w.key("reliable").value(sec.reliable);
    w.end_object();
    std::cout << w.take() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// nrange
// ---------------------------------------------------------------------------

struct NrangeOptions {
    std::string generator;
    std::string space = "hardy";
    std::string custom_weights;
    std::string probe = "kernel";
    std::string f;
    double dir = 0.0;
    std::string radii = "0.9,0.99,0.999";
    std::size_t N = 2000;
    double theta = 0.0;
    double alpha_exp = 0.0;
    std::string sizes = "8,16,32,64";
    std::string ks = "0,4,16,64";
};

int run_nrange(const NrangeOptions& o) {
    const TruncatedSeries G = parse_series_arg(o.generator);
    const WeightSequence beta = resolve_space(o.space, o.custom_weights);

    if (o.probe == "kernel") {
        std::vector<std::pair<double, double>> rows;
        for (double r : parse_real_list(o.radii)) {
            const Complex w = std::polar(r, o.dir);
            rows.emplace_back(r, kernel_probe(G, w, beta, o.N).re_part);
        }
        std::cout << probe_sweep_csv(rows, "r");
        return 0;
    }
    if (o.probe == "fn") {
        // this probe family lives in H^2(n^{-alpha}); build the weights from
        // the exponent rather than from --space
        const auto sizes = parse_real_list(o.sizes);
        std::size_t max_n = 1;
        for (double n : sizes) max_n = std::max(max_n, std::size_t(n));
        const WeightSequence wn = o.alpha_exp == 0.0
                                      ? WeightSequence::hardy()
                                      : WeightSequence::power_decay(o.alpha_exp, max_n + 1);
        std::vector<std::pair<double, double>> rows;
        for (double n : sizes)
            rows.emplace_back(n, fN_probe(G, o.theta, std::size_t(n), o.alpha_exp, wn).re_part);
        std::cout << probe_sweep_csv(rows, "N");
        return 0;
    }
    if (o.probe == "shift") {
        if (o.f.empty()) throw std::invalid_argument("nrange: probe 'shift' needs -f");
        const TruncatedSeries f = parse_series_arg(o.f);
        std::vector<std::pair<double, double>> rows;
        for (double k : parse_real_list(o.ks))
            rows.emplace_back(k, dirichlet_shift_witness(f, std::size_t(k), G).re_part);
        std::cout << probe_sweep_csv(rows, "k");
        return 0;
    }
    if (o.probe == "rayleigh") {
        if (o.f.empty()) throw std::invalid_argument("nrange: probe 'rayleigh' needs -f");
        const Complex q = rayleigh_quotient(G, parse_series_arg(o.f), beta);
        JsonWriter w;
        w.begin_object();
        w.key("rayleigh").value(q);
        w.key("re_part").value(q.real());
        w.end_object();
        std::cout << w.take() << "\n";
        return 0;
    }
    throw std::invalid_argument("nrange: unknown probe '" + o.probe + "'");
}

// ---------------------------------------------------------------------------
// toeplitz
// ---------------------------------------------------------------------------

struct ToeplitzOptions {
    std::string f;
    std::size_t k_max = 4;
    std::string matrices_out;
};

int run_toeplitz(const ToeplitzOptions& o) {
    const TruncatedSeries f = parse_series_arg(o.f);
    const auto results = caratheodory_toeplitz(f, o.k_max);
    if (!o.matrices_out.empty()) {
        std::ofstream out(o.matrices_out);
        if (!out) throw std::runtime_error("toeplitz: cannot write " + o.matrices_out);
        out << toeplitz_matrices_csv(results);
    }
    std::cout << toeplitz_json(results) << "\n";
    return toeplitz_all_psd(results) ? 0 : 1;
}

// ---------------------------------------------------------------------------
// demo
// ---------------------------------------------------------------------------

int run_demo(unsigned seed, std::size_t count) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    JsonWriter w;
    w.begin_array();
    for (std::size_t i = 0; i < count; ++i) {
        std::string label;
        std::vector<Complex> coeffs;
        switch (i % 3) {
            case 0: {
                label = "contractive";
                const double decay = 0.5 + 0.5 * std::abs(unit(rng));
                coeffs = {Complex(0.05 * unit(rng), 0.05 * unit(rng)), Complex(-decay, unit(rng)),
                          Complex(0.1 * unit(rng), 0.1 * unit(rng))};
                break;
            }
            case 1: {
                label = "expanding";
                coeffs = {Complex(unit(rng), unit(rng)), Complex(std::abs(unit(rng)) + 0.2, 0.0),
                          Complex(unit(rng), unit(rng))};
                break;
            }
            default: {
                label = "root-obstructed";
                coeffs = {Complex(2.0 + std::abs(unit(rng)), 0.0), Complex(1.0, 0.0)};
                break;
            }
        }
        w.begin_object();
        w.key("label").value(label);
        w.key("generator").value(TruncatedSeries(coeffs));
        w.end_object();
    }
    w.end_array();
    std::cout << w.take() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// job files: {"command": ..., "generator": ..., "space": ..., "options": {...}}
// ---------------------------------------------------------------------------

std::vector<std::string> args_from_job(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open job file " + path);
    nlohmann::json job = nlohmann::json::parse(in);

    std::vector<std::string> args;
    args.push_back(job.at("command").get<std::string>());

    auto coeff_string = [](const nlohmann::json& j) -> std::string {
        if (j.is_string()) return j.get<std::string>();
        std::string s;
        for (const auto& pair : j) {
            if (!s.empty()) s += ",";
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g%+.17gi", pair.at(0).get<double>(),
                          pair.at(1).get<double>());
            s += buf;
        }
        return s;
    };

    if (job.contains("generator")) {
        args.emplace_back("-G");
        args.push_back(coeff_string(job["generator"]));
    }
    if (job.contains("f")) {
        args.emplace_back("-f");
        args.push_back(coeff_string(job["f"]));
    }
    if (job.contains("space")) {
        if (job["space"].is_string()) {
            args.emplace_back("--space");
            args.push_back(job["space"].get<std::string>());
        } else if (job["space"].contains("custom")) {
            std::string s;
            for (const auto& v : job["space"]["custom"]) {
                if (!s.empty()) s += ",";
                char buf[40];
                std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
                s += buf;
            }
            args.emplace_back("--space-custom");
            args.push_back(s);
        }
    }
    if (job.contains("options")) {
        for (const auto& [k, v] : job["options"].items()) {
            args.push_back("--" + k);
            if (v.is_boolean()) {
                if (!v.get<bool>()) args.pop_back();
            } else if (v.is_string()) {
                args.push_back(v.get<std::string>());
            } else {
                args.push_back(v.dump());
            }
        }
    }
    return args;
}

int dispatch(std::vector<std::string> args);

int run_cli(std::vector<std::string> args) {
    if (!args.empty() && args.front() == "--job") {
        if (args.size() != 2) throw std::invalid_argument("--job expects exactly one file");
        return dispatch(args_from_job(args[1]));
    }
    for (std::string& a : args)    // single-dash spelling used in the docs
        if (a == "-z0") a = "--z0";
    return dispatch(std::move(args));
}

int dispatch(std::vector<std::string> args) {
    CLI::App app{"numerical tests for semigroup generators of the form A f = G f'"};
    app.require_subcommand(1);

    int rc = 0;

    CheckOptions check;
    auto* c_check = app.add_subcommand(
        "check", "decide whether G generates a quasicontractive composition semigroup");
    c_check->add_option("-G,--generator", check.generator, "generator coefficients a0,a1,...")->required();
    c_check->add_option("--grid-radii", check.grid_radii, "condition (B) radial grid size");
    c_check->add_option("--grid-angles", check.grid_angles, "condition (B) angular grid size");
    c_check->add_option("--tol", check.tol, "verdict tolerance");
    c_check->add_option("--mode", check.mode, "boundary mode: certified|sampled")
        ->check(CLI::IsMember({"certified", "sampled"}));
    c_check->callback([&] { rc = run_check(check); });

    FlowOptions flow;
    auto* c_flow = app.add_subcommand("flow", "trajectory of dw/dt = G(w) as CSV");
    c_flow->add_option("-G,--generator", flow.generator)->required();
    c_flow->add_option("-z,--z0", flow.z0, "start point (complex literal)");
    c_flow->add_option("-t,--t-end", flow.t_end, "end time")->required();
    c_flow->add_flag("--numeric", flow.numeric, "force ODE integration");
    c_flow->add_flag("--json", flow.json, "emit JSON with metadata instead of CSV");
    c_flow->add_option("--samples", flow.samples, "closed-form sample count");
    c_flow->add_option("--rel-tol", flow.rel_tol, "integrator relative tolerance");
    c_flow->add_option("--abs-tol", flow.abs_tol, "integrator absolute tolerance");
    c_flow->add_option("--exit-margin", flow.exit_margin, "boundary-exit detection band");
    c_flow->callback([&] { rc = run_flow(flow); });

    DwOptions dw;
    auto* c_dw = app.add_subcommand("dw", "Denjoy-Wolff point of the flow");
    c_dw->add_option("-G,--generator", dw.generator)->required();
    c_dw->add_option("--move-tol", dw.move_tol, "numeric search stopping movement");
    c_dw->add_option("--t-max", dw.t_max, "numeric search horizon");
    c_dw->callback([&] { rc = run_dw(dw); });

    FactorOptions factor;
    auto* c_factor = app.add_subcommand("factor", "divide out (conj(a) z - 1)(z - a)");
    c_factor->add_option("-G,--generator", factor.generator)->required();
    c_factor->add_option("--alpha", factor.alpha, "Denjoy-Wolff point (complex literal)");
    c_factor->add_flag("--auto", factor.auto_alpha, "derive alpha from the flow");
    c_factor->callback([&] { rc = run_factor(factor); });

    NormOptions norm;
    auto* c_norm = app.add_subcommand("norm", "finite-section norm of C_{phi_t} and the bound");
    c_norm->add_option("-G,--generator", norm.generator)->required();
    c_norm->add_option("--space", norm.space, "hardy|dirichlet|bergman");
    c_norm->add_option("--space-custom", norm.custom_weights, "custom weights b0,b1,...");
    c_norm->add_option("-t,--t-end", norm.t)->required();
    c_norm->add_option("-N,--section-n", norm.N, "section order (default 64)");
    c_norm->add_option("--dump-section", norm.dump_section, "write the section as CSV");
    c_norm->add_option("--dump-section-json", norm.dump_section_json, "write the section as JSON");
    c_norm->callback([&] { rc = run_norm(norm); });

    NrangeOptions nrange;
    auto* c_nrange = app.add_subcommand("nrange", "numerical-range probes (CSV sweeps)");
    c_nrange->add_option("-G,--generator", nrange.generator)->required();
    c_nrange->add_option("--space", nrange.space);
    c_nrange->add_option("--space-custom", nrange.custom_weights);
    c_nrange->add_option("--probe", nrange.probe, "kernel|fn|shift|rayleigh");
    c_nrange->add_option("-f", nrange.f, "probe function coefficients");
    c_nrange->add_option("--dir", nrange.dir, "kernel probe direction (radians)");
    c_nrange->add_option("--radii", nrange.radii, "kernel probe radii");
    c_nrange->add_option("-N,--kernel-n", nrange.N, "kernel truncation");
    c_nrange->add_option("--theta", nrange.theta, "fn probe phase");
    c_nrange->add_option("--alpha-exp", nrange.alpha_exp, "fn probe weight exponent");
    c_nrange->add_option("--sizes", nrange.sizes, "fn probe sizes");
    c_nrange->add_option("--ks", nrange.ks, "shift probe orders");
    c_nrange->callback([&] { rc = run_nrange(nrange); });

    ToeplitzOptions toeplitz;
    auto* c_toep = app.add_subcommand("toeplitz", "Caratheodory-Toeplitz positivity test");
    c_toep->add_option("-f", toeplitz.f, "symbol coefficients mu0,mu1,...")->required();
    c_toep->add_option("-k,--k-max", toeplitz.k_max, "largest section order");
    c_toep->add_option("--matrices-out", toeplitz.matrices_out, "write N_k matrices as CSV");
    c_toep->callback([&] { rc = run_toeplitz(toeplitz); });

    unsigned demo_seed = 1;
    std::size_t demo_count = 6;
    auto* c_demo = app.add_subcommand("demo", "emit sample generators to try");
    c_demo->add_option("--seed", demo_seed);
    c_demo->add_option("--count", demo_count);
    c_demo->callback([&] { rc = run_demo(demo_seed, demo_count); });

    std::reverse(args.begin(), args.end());
    try {
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);    // prints help or the parse diagnostic
        return code == 0 ? 0 : kExitBadInput;
    }
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return run_cli(std::move(args));
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDoesNotGenerate;
    }
}
