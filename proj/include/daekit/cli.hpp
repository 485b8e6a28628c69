#pragma once

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "daekit/core.hpp"
#include "daekit/indices.hpp"
#include "daekit/io.hpp"
#include "daekit/models.hpp"
#include "daekit/phdae.hpp"
#include "daekit/solver.hpp"
#include "daekit/weierstrass.hpp"

namespace daekit::cli {

using io::json;

enum ExitCode : int { Success = 0, VerificationFailure = 1, InputError = 2 };

/// Everything a single invocation needs; zero-valued "auto" fields are derived from the pencil.
struct RunConfig {
    std::string command;
    std::string input_path;
    std::string output_dir = ".";
    std::uint64_t seed = 42;

    // example
    std::string example;
    int n_grid = 50;
    int K = 40;
    int m = 4;
    NanorodParams nanorod;

    // decompose
    double infinite_tol = 1e-6;
    double nilpotency_tol = 1e-6;

    // indices
    double omega = 0.0;
    double lambda_max = 1e3;
    int num_points = 64;
    double imag_max = 1e3;
    int num_lines = 4;
    int complex_points = 96;
    int radiality_p = -1;
    double box_radius = 10.0;
    int n_max = 3;
    int radiality_samples = 200;

    // simulate
    std::string x0;
    std::string x0_file;
    std::string z0_file;
    double mu = 0.0;
    int p = 0;
    double t_end = 1.0;
    int num_times = 101;
    QuadratureConfig quad;
    int contour_max_n = 40;
};

inline json config_to_json(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    j["input"] = c.input_path;
    j["output_dir"] = c.output_dir;
    j["seed"] = c.seed;
    j["example"] = {{"name", c.example},
                    {"n_grid", c.n_grid},
                    {"K", c.K},
                    {"m", c.m},
                    {"nanorod",
                     {{"l", c.nanorod.l},
                      {"rho", c.nanorod.rho},
                      {"D", c.nanorod.D},
                      {"C", c.nanorod.C_mod},
                      {"mu", c.nanorod.mu_nl},
                      {"tau_d", c.nanorod.tau_d},
                      {"a2", c.nanorod.a2},
                      {"b2", c.nanorod.b2}}}};
    j["decompose"] = {{"infinite_tol", c.infinite_tol}, {"nilpotency_tol", c.nilpotency_tol}};
    j["indices"] = {{"omega", c.omega},
                    {"lambda_max", c.lambda_max},
                    {"num_points", c.num_points},
                    {"imag_max", c.imag_max},
                    {"num_lines", c.num_lines},
                    {"complex_points", c.complex_points},
                    {"radiality_p", c.radiality_p},
                    {"box_radius", c.box_radius},
                    {"n_max", c.n_max},
                    {"radiality_samples", c.radiality_samples}};
    j["simulate"] = {{"x0", c.x0},
                     {"x0_file", c.x0_file},
                     {"z0_file", c.z0_file},
                     {"mu", c.mu},
                     {"p", c.p},
                     {"t_end", c.t_end},
                     {"num_times", c.num_times},
                     {"quadrature", io::to_json(c.quad)},
                     {"contour_max_n", c.contour_max_n}};
    return j;
}

namespace detail {

inline int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidInput:
    case ErrorCode::InvalidParams:
    case ErrorCode::SingularQ:
    case ErrorCode::DegeneratePairing:
    case ErrorCode::IrregularPencil:
    case ErrorCode::SingularShift:
    case ErrorCode::ShiftOutsideResolventSet:
    case ErrorCode::PoleHit:
        return InputError;
    default:
        return VerificationFailure;
    }
}

inline void emit_error(std::ostream& err, const std::string& code, const std::string& message,
                       int exit_code) {
    json j = {{"error", {{"code", code}, {"message", message}, {"exit_code", exit_code}}}};
    err << j.dump() << std::endl;
}

inline std::filesystem::path out_path(const RunConfig& c, const std::string& name) {
    return std::filesystem::path(c.output_dir) / name;
}

inline DecomposeOptions decompose_options(const RunConfig& c) {
    DecomposeOptions o;
    o.infinite_tol = c.infinite_tol;
    o.nilpotency_tol = c.nilpotency_tol;
    return o;
}

inline io::PencilFile load_input(const RunConfig& c) {
    if (c.input_path.empty()) raise(ErrorCode::InvalidInput, "command requires --input");
    io::PencilFile f = io::load_pencil(c.input_path);
    validate(f.pencil());
    return f;
}

inline json base_report(const RunConfig& c) {
    return {{"config", config_to_json(c)}, {"seed", c.seed}};
}

/// Decomposition, estimates, radiality and relations for one pencil.
inline json index_report(const MatrixPencil& dyn, const RunConfig& c) {
    json j;
    const double omega = c.omega > 0.0 ? c.omega : default_omega(dyn);
    std::optional<WeierstrassDecomposition> w;
    try {
        w = decompose(dyn, decompose_options(c));
        j["nilpotency"] = w->nilpotency_index;
    } catch (const Error& e) {
        j["nilpotency"] = nullptr;
        j["decomposition_error"] = e.what();
    }
    GrowthEstimate real =
        estimate_resolvent_index_real(dyn, omega, std::max(c.lambda_max, 10.0 * omega), c.num_points);
    GrowthEstimate cplx =
        estimate_resolvent_index_complex(dyn, omega, c.imag_max, c.num_lines, c.complex_points);
    j["real"] = io::to_json(real);
    j["complex"] = io::to_json(cplx);
    const int p = c.radiality_p >= 0 ? c.radiality_p
                                     : std::max(0, (w ? w->nilpotency_index : real.index) - 1);
    RadialityEvidence rad =
        verify_radiality(dyn, p, omega, c.box_radius, c.n_max, c.radiality_samples, c.seed);
    j["radiality"] = io::to_json(rad);
    if (w) j["relations"] = io::to_json(index_relations_check(*w, real, rad));
    j["integrated_semigroup_order"] = integrated_semigroup_order(cplx.index);
    return j;
}

inline IndexGridOptions grid_options(const RunConfig& c) {
    IndexGridOptions g;
    g.omega = c.omega;
    g.lambda_max = c.lambda_max;
    g.num_points = c.num_points;
    g.imag_max = c.imag_max;
    g.num_lines = c.num_lines;
    g.complex_points = c.complex_points;
    return g;
}

inline int cmd_example(const RunConfig& c) {
    json prov = {{"model", c.example}, {"seed", c.seed}};
    std::string file = c.example + ".json";
    json out;
    if (c.example == "zero-dyn") {
        ZeroDynModel z = build_zero_dynamics_example(c.m);
        prov["parameters"] = {{"m", c.m}, {"A0", "diag(-1,...,-m)"}, {"b", "e1"}, {"c", "e1"}};
        out = io::pencil_to_json(z.pencil.E, z.pencil.A, std::nullopt, prov);
    } else if (c.example == "nanorod") {
        NanorodParams p = c.nanorod;
        p.n_grid = c.n_grid;
        PhPencil ph = build_nanorod(p);
        prov["parameters"] = config_to_json(c)["example"]["nanorod"];
        prov["grid"] = {{"n_grid", p.n_grid}, {"h", p.l / (p.n_grid + 1)}, {"layout", "field-major"}};
        out = io::pencil_to_json(ph.E, ph.A, ph.Q, prov);
    } else if (c.example == "l2") {
        MatrixPencil l2 = build_l2_example({c.K});
        prov["parameters"] = {{"K", c.K}};
        prov["truncation"] = {{"blocks", c.K + 1}, {"dimension", l2.size()}};
        out = io::pencil_to_json(l2.E, l2.A, std::nullopt, prov);
    } else {
        raise(ErrorCode::InvalidInput, "unknown example '" + c.example + "' (zero-dyn, nanorod, l2)");
    }
    io::write_json(out_path(c, file), out);
    return Success;
}

inline int cmd_decompose(const RunConfig& c) {
    io::PencilFile f = load_input(c);
    MatrixPencil dyn = f.dynamics();
    WeierstrassDecomposition w = decompose(dyn, decompose_options(c));
    json j = base_report(c);
    j["decomposition"] = io::to_json(w, dyn);
    io::write_json(out_path(c, "decomposition.json"), j);
    return Success;
}

inline int cmd_indices(const RunConfig& c) {
    io::PencilFile f = load_input(c);
    json j = base_report(c);
    j["indices"] = index_report(f.dynamics(), c);
    io::write_json(out_path(c, "indices.json"), j);
    return Success;
}

inline int cmd_verify_ph(const RunConfig& c) {
    io::PencilFile f = load_input(c);
    if (!f.Q) raise(ErrorCode::InvalidInput, "verify-ph needs a pencil file with a Q matrix");
    PhReport r = verify_ph_structure(f.ph(), {}, grid_options(c));
    json j = base_report(c);
    j["ph"] = io::to_json(r);
    io::write_json(out_path(c, "ph_report.json"), j);
    return r.passed ? Success : VerificationFailure;
}

inline int cmd_analyze(const RunConfig& c) {
    io::PencilFile f = load_input(c);
    MatrixPencil dyn = f.dynamics();
    json j = base_report(c);
    try {
        j["decomposition"] = io::to_json(decompose(dyn, decompose_options(c)), dyn);
    } catch (const Error& e) {
        j["decomposition"] = {{"error", e.what()}};
    }
    j["indices"] = index_report(dyn, c);
    int status = Success;
    if (f.Q) {
        PhReport r = verify_ph_structure(f.ph(), {}, grid_options(c));
        j["ph"] = io::to_json(r);
        if (!r.passed) status = VerificationFailure;
    }
    io::write_json(out_path(c, "analyze.json"), j);
    return status;
}

inline int cmd_simulate(const RunConfig& c, std::ostream& err) {
    io::PencilFile f = load_input(c);
    const MatrixPencil dyn = f.dynamics();
    const Eigen::Index n = dyn.size();
    const int sources = int(!c.x0.empty()) + int(!c.x0_file.empty()) + int(!c.z0_file.empty());
    if (sources != 1)
        raise(ErrorCode::InvalidInput, "simulate needs exactly one of --x0, --x0-file, --z0-file");

    std::optional<WeierstrassDecomposition> w;
    json j = base_report(c);
    try {
        w = decompose(dyn, decompose_options(c));
    } catch (const Error& e) {
        j["decomposition_error"] = e.what();
    }
    SolveConfig sc;
    sc.omega = c.omega > 0.0 ? c.omega : default_omega(dyn);
    sc.mu = Complex(c.mu > 0.0 ? c.mu : sc.omega + 1.0, 0.0);
    sc.p = c.p > 0 ? c.p : (w ? w->nilpotency_index : 1) + 2;
    sc.quad = c.quad;
    j["solve_config"] = {{"omega", sc.omega}, {"mu", sc.mu.real()}, {"p", sc.p}};

    ComplexVector x0, z0;
    if (!c.z0_file.empty()) {
        z0 = io::load_vector(c.z0_file);
        if (z0.size() != n) raise(ErrorCode::InvalidInput, "z0 has wrong length");
        x0 = initial_state_from(dyn, sc.mu, sc.p, z0);
    } else {
        x0 = c.x0.empty() ? io::load_vector(c.x0_file) : io::parse_vector(c.x0);
        if (x0.size() != n) raise(ErrorCode::InvalidInput, "x0 has wrong length");
    }
    Admissibility adm = admissible_initial_state(dyn, sc.mu, sc.p, x0);
    j["admissibility"] = {{"member", adm.member}, {"residual", adm.residual}};
    if (c.z0_file.empty()) z0 = adm.z0;
    if (!adm.member) {
        j["error"] = {{"code", std::string(to_string(ErrorCode::InconsistentInitialState))},
                      {"message", "x0 is not in the range of R(mu)^p"}};
        io::write_json(out_path(c, "simulate.json"), j);
        emit_error(err, std::string(to_string(ErrorCode::InconsistentInitialState)),
                   "x0 is not in the range of R(mu)^p (residual " +
                       std::to_string(adm.residual) + ")",
                   VerificationFailure);
        return VerificationFailure;
    }

    const std::vector<double> times = uniform_times(c.t_end, c.num_times);
    std::optional<Trajectory> tw, tc;
    if (w) {
        try {
            tw = weierstrass_solve(*w, x0, times);
        } catch (const Error& e) {
            j["weierstrass_error"] = e.what();
            if (e.code() == ErrorCode::InconsistentInitialState) {
                io::write_json(out_path(c, "simulate.json"), j);
                emit_error(err, std::string(to_string(e.code())), e.what(), VerificationFailure);
                return VerificationFailure;
            }
        }
    }
    if (n <= c.contour_max_n) {
        tc = contour_solve(dyn, z0, sc, times);
        j["quadrature"] = io::to_json(*tc->quadrature);
    } else {
        j["contour"] = "skipped: dimension exceeds contour_max_n";
    }
    if (!tw && !tc) raise(ErrorCode::NoConvergence, "no solver produced a trajectory");

    Trajectory& primary = tw ? *tw : *tc;
    int status = Success;
    json residuals;
    for (auto* t : {&tw, &tc}) {
        if (!*t) continue;
        (*t)->mild_residual = mild_solution_residual(dyn, **t);
        residuals[t == &tw ? "weierstrass" : "contour"] = *(*t)->mild_residual;
        if (*(*t)->mild_residual > 1e-6) status = VerificationFailure;
    }
    j["mild_residual"] = residuals;
    if (tw && tc) {
        const double agree = relative_difference(*tc, *tw);
        j["solver_agreement"] = agree;
        if (agree > 1e-5) status = VerificationFailure;
    }
    j["primary_solver"] = tw ? "weierstrass" : "contour";
    if (f.Q) {
        DissipationTrace d = dissipation_trace(f.ph(), primary);
        primary.hamiltonian = d.H;
        j["hamiltonian"] = {{"initial", d.H.front()},
                            {"final", d.H.back()},
                            {"max_increase", d.max_increase},
                            {"identity_defect", d.identity_defect}};
    }
    io::write_atomic(out_path(c, "trajectory.csv"), io::trajectory_csv(primary));
    io::write_json(out_path(c, "simulate.json"), j);
    return status;
}

}  // namespace detail

/// Executes one command; never throws.
inline int run(const RunConfig& config, std::ostream& err = std::cerr) {
    try {
        const std::string& cmd = config.command;
        if (cmd == "example") return detail::cmd_example(config);
        if (cmd == "decompose") return detail::cmd_decompose(config);
        if (cmd == "indices") return detail::cmd_indices(config);
        if (cmd == "verify-ph") return detail::cmd_verify_ph(config);
        if (cmd == "analyze") return detail::cmd_analyze(config);
        if (cmd == "simulate") return detail::cmd_simulate(config, err);
        raise(ErrorCode::InvalidInput, "unknown command '" + cmd + "'");
    } catch (const Error& e) {
        const int code = detail::exit_code_for(e.code());
        detail::emit_error(err, std::string(to_string(e.code())), e.what(), code);
        return code;
    } catch (const std::filesystem::filesystem_error& e) {
        detail::emit_error(err, "InvalidInput", e.what(), InputError);
        return InputError;
    } catch (const std::exception& e) {
        detail::emit_error(err, "InternalError", e.what(), VerificationFailure);
        return VerificationFailure;
    }
}

/// Registers all options on `app`; subcommands fall through to the shared option set.
inline void configure(CLI::App& app, RunConfig& c) {
    app.set_config("--config", "", "key=value configuration file (flags take precedence)");
    app.add_option("-i,--input", c.input_path, "pencil JSON file");
    app.add_option("-o,--out", c.output_dir, "output directory")->capture_default_str();
    app.add_option("--seed", c.seed, "random seed")->capture_default_str();

    app.add_option("--n-grid", c.n_grid, "nanorod interior grid points (even)")->capture_default_str();
    app.add_option("--K", c.K, "l2 truncation: blocks 0..K")->capture_default_str();
    app.add_option("--m", c.m, "zero-dynamics dimension")->capture_default_str();
    app.add_option("--rod-length", c.nanorod.l)->capture_default_str();
    app.add_option("--rho", c.nanorod.rho)->capture_default_str();
    app.add_option("--area", c.nanorod.D)->capture_default_str();
    app.add_option("--modulus", c.nanorod.C_mod)->capture_default_str();
    app.add_option("--nonlocal", c.nanorod.mu_nl)->capture_default_str();
    app.add_option("--tau-d", c.nanorod.tau_d)->capture_default_str();
    app.add_option("--a2", c.nanorod.a2)->capture_default_str();
    app.add_option("--b2", c.nanorod.b2)->capture_default_str();

    app.add_option("--infinite-tol", c.infinite_tol)->capture_default_str();
    app.add_option("--nilpotency-tol", c.nilpotency_tol)->capture_default_str();

    app.add_option("--omega", c.omega, "abscissa (0 = automatic)")->capture_default_str();
    app.add_option("--lambda-max", c.lambda_max)->capture_default_str();
    app.add_option("--num-points", c.num_points)->capture_default_str();
    app.add_option("--imag-max", c.imag_max)->capture_default_str();
    app.add_option("--num-lines", c.num_lines)->capture_default_str();
    app.add_option("--complex-points", c.complex_points)->capture_default_str();
    app.add_option("--radiality-p", c.radiality_p, "-1 = nilpotency index - 1")->capture_default_str();
    app.add_option("--box-radius", c.box_radius)->capture_default_str();
    app.add_option("--n-max", c.n_max)->capture_default_str();
    app.add_option("--radiality-samples", c.radiality_samples)->capture_default_str();

    app.add_option("--x0", c.x0, "initial state, entries re or re:im separated by commas");
    app.add_option("--x0-file", c.x0_file, "JSON array with the initial state");
    app.add_option("--z0-file", c.z0_file, "JSON array z0; x0 = (-1)^(p-1) R(mu)^p z0");
    app.add_option("--mu", c.mu, "shift (0 = omega + 1)")->capture_default_str();
    app.add_option("--p", c.p, "power (0 = nilpotency index + 2)")->capture_default_str();
    app.add_option("--t-end", c.t_end)->capture_default_str();
    app.add_option("--num-times", c.num_times)->capture_default_str();
    app.add_option("--quad-tol", c.quad.tolerance)->capture_default_str();
    app.add_option("--quad-half-length", c.quad.initial_half_length)->capture_default_str();
    app.add_option("--quad-nodes", c.quad.nodes_per_panel)->capture_default_str();
    app.add_option("--quad-max-refinements", c.quad.max_refinements)->capture_default_str();
    app.add_option("--contour-max-n", c.contour_max_n)->capture_default_str();

    app.require_subcommand(1);
    for (const char* name : {"analyze", "decompose", "indices", "simulate", "verify-ph"}) {
        auto* sub = app.add_subcommand(name);
        sub->fallthrough();
        sub->callback([&c, sub] { c.command = sub->get_name(); });
    }
    auto* ex = app.add_subcommand("example", "write a model pencil JSON");
    ex->fallthrough();
    ex->add_option("name", c.example, "zero-dyn | nanorod | l2")
        ->required()
        ->check(CLI::IsMember({"zero-dyn", "nanorod", "l2"}));
    ex->callback([&c] { c.command = "example"; });
}

/// Parses argv into a RunConfig; returns nullopt with exit code set on --help or a parse error.
inline std::optional<RunConfig> parse_args(int argc, const char* const* argv, int& exit_code,
                                           std::ostream& out = std::cout,
                                           std::ostream& err = std::cerr) {
    RunConfig c;
    CLI::App app{"Analysis and simulation of linear differential-algebraic equations", "daekit"};
    configure(app, c);
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        exit_code = Success;
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        detail::emit_error(err, "InvalidInput", e.what(), InputError);
        exit_code = InputError;
        return std::nullopt;
    }
    exit_code = Success;
    return c;
}

inline int main(int argc, const char* const* argv) {
    int code = 0;
    std::optional<RunConfig> c = parse_args(argc, argv, code);
    if (!c) return code;
    return run(*c);
}

}  // namespace daekit::cli
