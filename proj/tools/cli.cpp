#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cuspforge/error.hpp"
#include "cuspforge/field_io.hpp"
#include "cuspforge/hodograph.hpp"
#include "cuspforge/parallel.hpp"
#include "cuspforge/qc_diagnostics.hpp"
#include "cuspforge/thin_obstacle.hpp"
#include "cuspforge/two_phase.hpp"
#include "exports.hpp"
#include "suites.hpp"
#include "svg.hpp"

namespace cuspforge::cli {

namespace {

class Run {
public:
    Run(std::string command, fs::path out_dir) : out_(std::move(out_dir)), t0_(Clock::now()) {
        manifest.set("command", command);
        manifest.set("artifact_version", std::string(kArtifactVersion));
        manifest.set("threads", static_cast<int>(worker_count()));
    }

    Manifest manifest;

    int finish(int status, const std::string& code = "none", const std::string& message = "") {
        manifest.set("exit_status", status);
        manifest.set("error_code", code);
        if (!message.empty()) manifest.set("error_message", one_line(message));
        const double secs = std::chrono::duration<double>(Clock::now() - t0_).count();
        manifest.set("wall_clock_seconds", secs);
        if (!out_.empty()) {
            try {
                atomic_write(out_ / manifest_name, manifest.render());
            } catch (const std::exception& e) {
                std::cerr << "cuspforge: cannot write manifest: " << e.what() << "\n";
                if (status == 0) status = 2;
            }
        }
        if (status != 0) std::cerr << "cuspforge: " << code << ": " << message << "\n";
        return status;
    }

    std::string manifest_name = "manifest.txt";

private:
    using Clock = std::chrono::steady_clock;
    static std::string one_line(std::string s) {
        for (char& c : s)
            if (c == '\n') c = ' ';
        return s;
    }
    fs::path out_;
    Clock::time_point t0_;
};

int guarded(Run& run, const std::function<int()>& body) {
    try {
        return body();
    } catch (const LineSearchStall& e) {
        return run.finish(3, e.code(), e.what());
    } catch (const Infeasible& e) {
        return run.finish(4, e.code(), e.what());
    } catch (const InvalidArgument& e) {
        return run.finish(2, e.code(), e.what());
    } catch (const ParseError& e) {
        return run.finish(2, e.code(), e.what());
    } catch (const GridTooSmall& e) {
        return run.finish(2, e.code(), e.what());
    } catch (const IoError& e) {
        return run.finish(2, e.code(), e.what());
    } catch (const Error& e) {
        return run.finish(1, e.code(), e.what());
    } catch (const fs::filesystem_error& e) {
        return run.finish(2, "IoError", e.what());
    } catch (const std::exception& e) {
        return run.finish(1, "InternalError", e.what());
    }
}

void require_dir(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw IoError("no such directory: " + dir.string());
}

void write_text(const fs::path& p, const std::string& s) { atomic_write(p, s); }

std::string onephase_report_text(const OnePhaseReport& r) {
    std::ostringstream os;
    os << "free_arc_max_deviation " << format_real(r.free_arc_max_deviation) << "\n"
       << "contact_min_gradient " << format_real(r.contact_min_gradient) << "\n"
       << "reciprocity_max " << format_real(r.reciprocity_max) << "\n"
       << "identity_f_prime " << format_real(r.identity_f_prime) << "\n"
       << "identity_eta_prime " << format_real(r.identity_eta_prime) << "\n"
       << "arc_length " << format_real(r.arc_length) << "\n"
       << "boundary_positive " << (r.boundary_positive ? 1 : 0) << "\n"
       << "band " << format_real(r.band_inner) << " " << format_real(r.band_outer) << "\n";
    return os.str();
}

std::string kkt_text(const KKTReport& k) {
    std::ostringstream os;
    os << "max_interior_euler_lagrange_residual " << format_real(k.max_interior_euler_lagrange_residual) << "\n"
       << "max_positive_part_flux " << format_real(k.max_positive_part_flux) << "\n"
       << "max_flux_sign_violation " << format_real(k.max_flux_sign_violation) << "\n"
       << "min_constraint_value " << format_real(k.min_constraint_value) << "\n"
       << "positive_nodes " << k.positive_nodes << "\n"
       << "active_nodes " << k.active_nodes << "\n";
    return os.str();
}

// ---- generate-onephase -------------------------------------------------------

struct OnePhaseArgs {
    int n = 1;
    double r = 0.5;
    int grid_res = 257;
    std::string out_dir;
    double fit_lo = 1e-3, fit_hi = 1e-2;
};

int cmd_generate_onephase(const OnePhaseArgs& a) {
    Run run("generate-onephase", a.out_dir);
    auto& m = run.manifest;
    m.set("n", a.n);
    m.set("r", a.r);
    m.set("grid_res", a.grid_res);
    m.set("fit_lo", a.fit_lo);
    m.set("fit_hi", a.fit_hi);
    m.set("out_dir", a.out_dir);
    m.set("tol_free_arc", 5e-3);
    m.set("tol_contact", 5e-3);
    m.set("tol_exponent_relative", 0.02);
    return guarded(run, [&] {
        if (a.n < 1) throw InvalidArgument("n must be >= 1");
        GenerateOptions opt;
        opt.window = {a.fit_lo, a.fit_hi};
        const OnePhaseSolution sol = generate_onephase(CuspSpec{a.n}, a.r, a.grid_res, opt);
        const fs::path out = a.out_dir;
        write_field(out / "u.csv", sol.u);
        write_field(out / "v.csv", sol.v);
        write_field(out / "V.csv", sol.V);
        write_boundary(out / "boundary.csv", sol.boundary);
        write_eta(out / "eta.csv", sol.eta);
        const OnePhaseReport rep = check_onephase(sol);
        write_text(out / "onephase_report.txt", onephase_report_text(rep));
        const BranchSet bs = branch_points(sol.u, BranchCondition::one_phase);
        write_points(out / "branch_points.csv", "x", bs.points);

        m.set("boundary_exponent", sol.boundary.cusp_exponent_estimate);
        m.set("boundary_coefficient", sol.boundary.cusp_coefficient_estimate);
        m.set("fit_r_squared", sol.boundary.fit_r_squared);
        m.set("retained_radius", sol.inversion.retained_radius);
        m.set("origin_slope", sol.origin_slope);
        m.set("free_arc_max_deviation", rep.free_arc_max_deviation);
        m.set("contact_min_gradient", rep.contact_min_gradient);
        m.set("branch_points", static_cast<int>(bs.points.size()));

        const double k2 = (4.0 * a.n - 1) / 2;
        std::string failed;
        if (!rep.boundary_positive) failed = "boundary sign pattern";
        else if (!(rep.free_arc_max_deviation <= 5e-3)) failed = "free arc |grad u| = 1";
        else if (!(rep.contact_min_gradient >= 1 - 5e-3)) failed = "contact |grad u| >= 1";
        else if (!(std::abs(sol.boundary.cusp_exponent_estimate - k2) <= 0.02 * k2))
            failed = "cusp exponent";
        if (!failed.empty()) return run.finish(1, "PostconditionFailed", failed);
        std::cout << "boundary exponent " << format_real(sol.boundary.cusp_exponent_estimate) << "\n";
        return run.finish(0);
    });
}

// ---- generate-twophase -------------------------------------------------------

struct TwoPhaseArgs {
    std::string kind = "symmetric";
    int n = 1;
    double r = 0.5;
    int grid_res = 257;
    std::string out_dir;
    double shift = -1.0;
    double factor = 1.1;
    std::vector<double> hook;
};

std::string expansion_block(const std::string& title, const std::function<ExpansionReport()>& f) {
    try {
        return "[" + title + "]\n" + format_report(f());
    } catch (const Error& e) {
        return "[" + title + "]\nfailed " + e.code() + ": " + e.what() + "\n";
    }
}

int cmd_generate_twophase(const TwoPhaseArgs& a) {
    Run run("generate-twophase", a.out_dir);
    auto& m = run.manifest;
    m.set("kind", a.kind);
    m.set("n", a.n);
    m.set("r", a.r);
    m.set("grid_res", a.grid_res);
    m.set("out_dir", a.out_dir);
    return guarded(run, [&] {
        if (a.n < 1) throw InvalidArgument("n must be >= 1");
        TwoPhaseBundle b;
        const CuspSpec spec{a.n};
        if (a.kind == "symmetric") b = build_symmetric(spec, a.r, a.grid_res);
        else if (a.kind == "shifted") b = build_shifted(spec, a.r, a.grid_res, a.shift);
        else if (a.kind == "perturbed") b = build_perturbed(spec, a.r, a.grid_res, a.factor);
        else if (a.kind == "flat") b = build_flat(a.r, a.grid_res);
        else throw InvalidArgument("unknown kind '" + a.kind + "'");
        if (a.kind == "shifted") {
            const double h = b.u_plus.grid.h();
            const double s = a.shift < 0 ? a.r / 4 : a.shift;
            m.set("shift", std::max(1.0, std::round(s / h)) * h);
        }
        if (a.kind == "perturbed") m.set("factor", a.factor);

        const PairReport pr = pair_transforms(b);
        const MDFields md = md_decompose(b, 1e300);
        const fs::path out = a.out_dir;
        write_field(out / "u_plus.csv", b.u_plus);
        write_field(out / "u_minus.csv", b.u_minus);
        write_field(out / "v_plus.csv", b.v_plus);
        write_field(out / "v_minus.csv", b.v_minus);
        write_field(out / "P_plus.csv", b.P_plus);
        write_field(out / "P_minus.csv", b.P_minus);
        write_field(out / "M.csv", md.M);
        write_field(out / "D.csv", md.D);
        write_boundary(out / "boundary_plus.csv", b.f_plus);
        write_boundary(out / "boundary_minus.csv", b.f_minus);
        write_eta(out / "eta_plus.csv", b.eta_plus);
        write_eta(out / "eta_minus.csv", b.eta_minus);
        write_points(out / "d_zeros.csv", "x_prime", d_zeros(md));
        write_points(out / "branch_points.csv", "x",
                     branch_points(b.u_plus, BranchCondition::one_phase).points);
        write_text(out / "pair_report.txt", format_report(pr) + format_report(md));

        const double x_lo = -0.6 * b.retained_radius;
        std::string rep;
        if (a.kind != "flat")
            rep += expansion_block("grid traces", [&] {
                return expansion_integrals(md, x_lo, &b.f_plus, &b.f_minus);
            });
        if (b.closed_form && a.kind != "flat")
            rep += expansion_block("closed form", [&] {
                return expansion_integrals(*b.closed_form, x_lo, &b.f_plus, &b.f_minus);
            });
        if (!a.hook.empty()) {
            std::vector<double> coeffs{0.0};
            coeffs.insert(coeffs.end(), a.hook.begin(), a.hook.end());
            std::string text;
            for (double c : a.hook) text += (text.empty() ? "" : ",") + format_real(c);
            m.set("hook", text);
            rep += expansion_block("hook", [&] {
                return expansion_integrals(hook_traces(spec, coeffs), x_lo);
            });
        }
        rep += "[symmetry]\n" + format_report(symmetry_lemma_check(b));
        write_text(out / "expansion_report.txt", rep);

        m.set("retained_radius", b.retained_radius);
        m.set("separated_modulus_plus", pr.plus_modulus);
        m.set("separated_modulus_minus", pr.minus_modulus);
        return run.finish(0);
    });
}

// ---- solve-obstacle ----------------------------------------------------------

struct ObstacleArgs {
    std::string config_path;
    std::string out_dir;
};

double cfg_number(const std::map<std::string, std::string>& c, const std::string& key, double def) {
    const auto it = c.find(key);
    if (it == c.end()) return def;
    char* end = nullptr;
    const double v = std::strtod(it->second.c_str(), &end);
    if (end == it->second.c_str() || *end != '\0')
        throw ParseError("config key " + key + ": bad number '" + it->second + "'");
    return v;
}

int cmd_solve_obstacle(const ObstacleArgs& a) {
    Run run("solve-obstacle", a.out_dir);
    auto& m = run.manifest;
    m.set("config_path", a.config_path);
    m.set("out_dir", a.out_dir);
    return guarded(run, [&] {
        const auto cfg = read_config(a.config_path);
        static const std::vector<std::string> known{
            "nonlinearity", "dirichlet", "h", "x_min", "x_max", "y_max", "tol", "max_iter",
            "armijo", "backtrack", "min_step", "active_tol", "levels", "dirichlet_bottom"};
        for (const auto& [k, v] : cfg)
            if (std::find(known.begin(), known.end(), k) == known.end())
                throw ParseError("unknown config key '" + k + "'");
        const std::string tag = cfg.count("nonlinearity") ? cfg.at("nonlinearity") : "quadratic";
        const std::string source = cfg.count("dirichlet") ? cfg.at("dirichlet") : "signorini32";
        const Nonlinearity F = Nonlinearity::from_name(tag);
        SolveOptions opt;
        opt.tol = cfg_number(cfg, "tol", 1e-8);
        opt.max_iter = static_cast<int>(cfg_number(cfg, "max_iter", 20000));
        opt.armijo = cfg_number(cfg, "armijo", 1e-4);
        opt.backtrack = cfg_number(cfg, "backtrack", 0.5);
        opt.min_step = cfg_number(cfg, "min_step", 1e-14);
        opt.active_tol = cfg_number(cfg, "active_tol", -1.0);
        opt.levels = static_cast<int>(cfg_number(cfg, "levels", 5));
        const bool bottom = cfg_number(cfg, "dirichlet_bottom", 0) != 0;

        m.set("nonlinearity", tag);
        m.set("dirichlet", source);
        m.set("tol", opt.tol);
        m.set("max_iter", opt.max_iter);
        m.set("armijo", opt.armijo);
        m.set("backtrack", opt.backtrack);
        m.set("min_step", opt.min_step);
        m.set("active_tol", opt.active_tol);
        m.set("levels", opt.levels);
        m.set("dirichlet_bottom", bottom ? 1 : 0);

        ObstacleProblem p;
        std::function<double(double, double)> exact;
        ScalarField reference;
        if (source.rfind("hodograph:", 0) == 0) {
            const fs::path dir = source.substr(10);
            require_dir(dir);
            const ScalarField u = read_scalar_field(dir / "u.csv");
            const FreeBoundaryCurve f = read_boundary(dir / "boundary.csv");
            const HodographPair pair = classical_forward(u, f);
            reference = classical_box(pair.w);
            p = make_problem(reference, F, bottom);
        } else {
            if (source == "signorini32") exact = signorini32;
            else if (source == "flat") exact = [](double, double) { return 1.0; };
            else throw InvalidArgument("unknown dirichlet source '" + source + "'");
            const double h = cfg_number(cfg, "h", 1.0 / 128);
            const double x0 = cfg_number(cfg, "x_min", -1), x1 = cfg_number(cfg, "x_max", 1);
            const double y1 = cfg_number(cfg, "y_max", 1);
            if (!(h > 0)) throw InvalidArgument("h must be positive");
            const double cx = (x1 - x0) / h, cy = y1 / h;
            if (std::abs(cx - std::round(cx)) > 1e-9 || std::abs(cy - std::round(cy)) > 1e-9)
                throw InvalidArgument("h must divide the box sides");
            const Grid g = Grid::with_spacing(x0, 0.0, h, static_cast<int>(std::lround(cx)) + 1,
                                              static_cast<int>(std::lround(cy)) + 1,
                                              HalfPlane::upper);
            p = make_problem(g, F, exact, bottom);
        }
        m.set("h", p.grid.h());
        m.set("nx", p.grid.nx());
        m.set("ny", p.grid.ny());

        const SolveResult r = solve(p, initial_guess(p), opt);
        const fs::path out = a.out_dir;
        write_field(out / "solution.csv", r.v);
        write_text(out / "kkt_report.txt", kkt_text(r.kkt));
        m.set("iterations", r.iterations);
        m.set("projected_gradient", r.projected_gradient);
        m.set("converged", r.converged ? 1 : 0);
        m.set("energy_monotone", r.energy_monotone ? 1 : 0);
        m.set("feasibility_violations", r.feasibility_violations);
        m.set("final_energy", r.energies.empty() ? 0.0 : r.energies.back());
        m.set("kkt_interior", r.kkt.max_interior_euler_lagrange_residual);
        m.set("kkt_positive_flux", r.kkt.max_positive_part_flux);
        m.set("kkt_sign_violation", r.kkt.max_flux_sign_violation);
        if (exact) {
            const ScalarField ref = ScalarField::sample(p.grid, exact);
            m.set("max_error", max_abs_diff(r.v, ref));
        } else {
            m.set("cross_check_residual", max_abs_diff(r.v, reference));
        }
        if (!r.converged)
            return run.finish(1, "NotConverged",
                              "projected gradient " + format_real(r.projected_gradient) +
                                  " after " + std::to_string(r.iterations) + " iterations");
        return run.finish(0);
    });
}

// ---- hodograph ---------------------------------------------------------------

struct HodographArgs {
    std::string run_dir;
    std::string kind = "conformal";
    std::string out_dir;
};

int cmd_hodograph(const HodographArgs& a) {
    Run run("hodograph", a.out_dir);
    auto& m = run.manifest;
    m.set("run_dir", a.run_dir);
    m.set("kind", a.kind);
    m.set("out_dir", a.out_dir);
    return guarded(run, [&] {
        require_dir(a.run_dir);
        const fs::path in = a.run_dir;
        const Manifest src = read_manifest(in);
        const ScalarField u = read_scalar_field(in / "u.csv");
        const FreeBoundaryCurve f = read_boundary(in / "boundary.csv");
        const double reff = src.get("retained_radius") ? src.number("retained_radius")
                                                       : u.grid.x_max();
        const double inner = reff / 8, outer = 3 * reff / 4;
        m.set("band_inner", inner);
        m.set("band_outer", outer);
        const fs::path out = a.out_dir;
        if (a.kind == "conformal") {
            const HodographPair pair = conformal_forward(u, f);
            write_field(out / "x_prime.csv", pair.x_prime);
            write_field(out / "y_prime.csv", pair.y_prime);
            write_field(out / "v.csv", pair.v);
            write_field(out / "x_of.csv", pair.x_of);
            write_eta(out / "eta.csv", pair.eta);
            const IdentityReport rep = check_identities(pair, pair.eta, f, {inner, outer, 50});
            write_text(out / "identity_report.txt", format_report(rep));
            if (fs::exists(in / "v.csv")) {
                const ScalarField v0 = read_scalar_field(in / "v.csv");
                m.set("v_round_trip", max_abs_diff(pair.v, v0));
            }
            m.set("solved_nodes", pair.solved);
            m.set("identity_max", rep.max_residual());
        } else if (a.kind == "classical") {
            const HodographPair pair = classical_forward(u, f);
            write_field(out / "x_prime.csv", pair.x_prime);
            write_field(out / "y_prime.csv", pair.y_prime);
            write_field(out / "v.csv", pair.v);
            write_field(out / "w.csv", pair.w);
            const ComplementarityReport c = classical_complementarity(pair, f, inner, outer);
            std::ostringstream os;
            os << "positive_part " << format_real(c.positive_part) << "\n"
               << "sign_violation " << format_real(c.sign_violation) << "\n"
               << "pullback " << format_real(c.pullback) << "\n"
               << "positive_nodes " << c.positive_nodes << "\n"
               << "active_nodes " << c.active_nodes << "\n";
            write_text(out / "complementarity_report.txt", os.str());
            m.set("complementarity_positive_part", c.positive_part);
            m.set("complementarity_sign_violation", c.sign_violation);
        } else {
            throw InvalidArgument("kind must be conformal or classical");
        }
        return run.finish(0);
    });
}

// ---- verify ------------------------------------------------------------------

struct VerifyArgs {
    std::string target_dir;
    std::string suite = "all";
};

int cmd_verify(const VerifyArgs& a) {
    Run run("verify", fs::is_directory(a.target_dir) ? fs::path(a.target_dir) : fs::path());
    run.manifest_name = "verify_manifest.txt";
    run.manifest.set("target_dir", a.target_dir);
    run.manifest.set("suite", a.suite);
    return guarded(run, [&] {
        require_dir(a.target_dir);
        const fs::path dir = a.target_dir;
        const std::string command = read_manifest(dir).require("command");
        std::vector<std::string> suites;
        if (a.suite == "all") {
            if (command == "generate-onephase") suites = {"onephase", "qc"};
            else if (command == "generate-twophase") suites = {"twophase", "qc"};
            else if (command == "solve-obstacle") suites = {"qc"};
            else throw InvalidArgument("nothing to verify in a '" + command + "' run");
        } else if (a.suite == "onephase" || a.suite == "twophase" || a.suite == "qc") {
            suites = {a.suite};
        } else {
            throw InvalidArgument("unknown suite '" + a.suite + "'");
        }
        std::string report;
        const Assertion* first = nullptr;
        std::vector<SuiteResult> results;
        for (const auto& s : suites) {
            if (s == "onephase") results.push_back(onephase_suite(dir));
            else if (s == "twophase") results.push_back(twophase_suite(dir));
            else results.push_back(qc_suite(dir));
        }
        for (const auto& r : results) {
            report += r.render();
            if (!first) first = r.first_failure();
        }
        report += first ? "RESULT FAIL\n" : "RESULT PASS\n";
        write_text(dir / "verify_report.txt", report);
        std::cout << report;
        if (first) return run.finish(1, "AssertionFailed", first->name);
        return run.finish(0);
    });
}

// ---- plot --------------------------------------------------------------------

struct PlotArgs {
    std::string target_dir;
    std::string what = "boundary";
    std::string out_svg;
    std::string field;
};

int cmd_plot(const PlotArgs& a) {
    Run run("plot", fs::path());
    return guarded(run, [&] {
        require_dir(a.target_dir);
        const fs::path dir = a.target_dir;
        auto first_existing = [&](std::initializer_list<const char*> names) -> fs::path {
            for (const char* n : names)
                if (fs::exists(dir / n)) return dir / n;
            throw IoError("no input among the expected exports in " + dir.string());
        };
        std::string svg;
        if (a.what == "boundary") {
            std::vector<Series2D> series;
            if (fs::exists(dir / "boundary.csv")) {
                const auto c = read_boundary(dir / "boundary.csv");
                series.push_back({c.xs, c.fs, "#1f5fbf", "f"});
            } else {
                const auto p = read_boundary(first_existing({"boundary_plus.csv"}));
                const auto q = read_boundary(first_existing({"boundary_minus.csv"}));
                series.push_back({p.xs, p.fs, "#1f5fbf", "f+"});
                series.push_back({q.xs, q.fs, "#c0392b", "f-"});
            }
            svg = svg_polylines(series, "free boundary");
        } else if (a.what == "field") {
            const fs::path p = a.field.empty()
                                   ? first_existing({"u.csv", "u_plus.csv", "solution.csv"})
                                   : dir / a.field;
            if (!fs::exists(p)) throw IoError("missing field " + p.string());
            svg = svg_heatmap(read_scalar_field(p), p.filename().string());
        } else if (a.what == "exponent_fit") {
            const auto c = read_boundary(first_existing({"boundary.csv", "boundary_plus.csv"}));
            FitWindow w;
            const Manifest mf = read_manifest(dir);
            if (mf.get("fit_lo")) w.lo = mf.number("fit_lo");
            if (mf.get("fit_hi")) w.hi = mf.number("fit_hi");
            const PowerFit fit = fit_cusp_exponent(c, w);
            svg = svg_loglog_fit(c.xs, c.fs, fit, w.lo, w.hi, format_real(fit.exponent));
        } else {
            throw InvalidArgument("what must be boundary, field or exponent_fit");
        }
        if (a.out_svg.empty()) throw InvalidArgument("out_svg is required");
        atomic_write(a.out_svg, svg);
        return 0;
    });
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"cuspforge: cusp solutions, thin-obstacle solver and verification suites"};
    app.require_subcommand(1);

    OnePhaseArgs g1;
    auto* s1 = app.add_subcommand("generate-onephase", "generate an exact one-phase cusp solution");
    s1->add_option("--n", g1.n, "cusp index n >= 1 (exponent (4n-1)/2)");
    s1->add_option("--r", g1.r, "hodograph radius in (0, 1)");
    s1->add_option("--grid_res,--grid-res", g1.grid_res, "odd node count across [-r, r], >= 65");
    s1->add_option("--out_dir,--out-dir", g1.out_dir, "output directory")->required();
    s1->add_option("--fit_lo", g1.fit_lo, "fit window lower |x|");
    s1->add_option("--fit_hi", g1.fit_hi, "fit window upper |x|");

    TwoPhaseArgs g2;
    auto* s2 = app.add_subcommand("generate-twophase", "build a two-phase bundle and its reports");
    s2->add_option("--kind", g2.kind, "symmetric | shifted | perturbed | flat")
        ->check(CLI::IsMember({"symmetric", "shifted", "perturbed", "flat"}));
    s2->add_option("--n", g2.n, "cusp index");
    s2->add_option("--r", g2.r, "hodograph radius");
    s2->add_option("--grid_res,--grid-res", g2.grid_res, "grid resolution");
    s2->add_option("--out_dir,--out-dir", g2.out_dir, "output directory")->required();
    s2->add_option("--shift", g2.shift, "shifted kind: translation of the minus phase");
    s2->add_option("--factor", g2.factor, "perturbed kind: scale of f-");
    s2->add_option("--hook", g2.hook, "real M coefficients m1,m2,... for the hook expansion")
        ->delimiter(',');

    ObstacleArgs ob;
    auto* s3 = app.add_subcommand("solve-obstacle", "solve the nonlinear thin-obstacle problem");
    s3->add_option("--config_path,--config", ob.config_path, "key=value config file")->required();
    s3->add_option("--out_dir,--out-dir", ob.out_dir, "output directory")->required();

    HodographArgs ho;
    auto* s4 = app.add_subcommand("hodograph", "forward hodograph of a generate-onephase run");
    s4->add_option("--run_dir,--run-dir", ho.run_dir, "generate-onephase output")->required();
    s4->add_option("--kind", ho.kind, "conformal | classical")
        ->check(CLI::IsMember({"conformal", "classical"}));
    s4->add_option("--out_dir,--out-dir", ho.out_dir, "output directory")->required();

    VerifyArgs ve;
    auto* s5 = app.add_subcommand("verify", "run an invariant suite on a run directory");
    s5->add_option("--target_dir,--target-dir", ve.target_dir, "run directory")->required();
    s5->add_option("--suite", ve.suite, "onephase | twophase | qc | all")
        ->check(CLI::IsMember({"onephase", "twophase", "qc", "all"}));

    PlotArgs pl;
    auto* s6 = app.add_subcommand("plot", "write a static SVG from run exports");
    s6->add_option("--target_dir,--target-dir", pl.target_dir, "run directory")->required();
    s6->add_option("--what", pl.what, "boundary | field | exponent_fit")
        ->check(CLI::IsMember({"boundary", "field", "exponent_fit"}));
    s6->add_option("--out_svg,--out-svg", pl.out_svg, "output SVG path")->required();
    s6->add_option("--field", pl.field, "field CSV name inside target_dir");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (*s1) return cmd_generate_onephase(g1);
    if (*s2) return cmd_generate_twophase(g2);
    if (*s3) return cmd_solve_obstacle(ob);
    if (*s4) return cmd_hodograph(ho);
    if (*s5) return cmd_verify(ve);
    if (*s6) return cmd_plot(pl);
    return 2;
}

}  // namespace cuspforge::cli
