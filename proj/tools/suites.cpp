#include "suites.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cuspforge/error.hpp"
#include "cuspforge/field_io.hpp"
#include "cuspforge/hodograph.hpp"
#include "cuspforge/nonlinearity.hpp"
#include "cuspforge/qc_diagnostics.hpp"
#include "exports.hpp"

namespace cuspforge::cli {

void SuiteResult::at_most(const std::string& name, double value, double limit) {
    checks.push_back({name, value, limit, "<=", 0, std::isfinite(value) && value <= limit});
}

void SuiteResult::at_least(const std::string& name, double value, double limit) {
    checks.push_back({name, value, limit, ">=", 0, std::isfinite(value) && value >= limit});
}

void SuiteResult::within(const std::string& name, double value, double lo, double hi) {
    checks.push_back({name, value, lo, "in", hi, std::isfinite(value) && value >= lo && value <= hi});
}

void SuiteResult::truth(const std::string& name, bool ok) {
    checks.push_back({name, ok ? 1.0 : 0.0, 1.0, "==", 0, ok});
}

bool SuiteResult::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Assertion& a) { return a.passed; });
}

const Assertion* SuiteResult::first_failure() const {
    for (const auto& a : checks)
        if (!a.passed) return &a;
    return nullptr;
}

std::string SuiteResult::render() const {
    std::ostringstream os;
    os << "[" << suite << "]\n";
    for (const auto& a : checks) {
        os << (a.passed ? "PASS " : "FAIL ") << a.name << " " << format_real(a.value) << " ";
        if (a.relation == "in")
            os << "in [" << format_real(a.limit) << ", " << format_real(a.upper) << "]";
        else
            os << a.relation << " " << format_real(a.limit);
        os << "\n";
    }
    for (const auto& n : notes) os << "note " << n << "\n";
    return os.str();
}

namespace {

void expect_command(const Manifest& m, const std::string& command) {
    if (m.require("command") != command)
        throw InvalidArgument("directory holds a '" + m.require("command") + "' run, not " +
                              command);
}

int as_int(const Manifest& m, const std::string& key) {
    return static_cast<int>(std::lround(m.number(key)));
}

// Physical branch abscissae carried to x' through the conjugate on the axis.
std::vector<double> to_hodograph(const ScalarField& U, const std::vector<double>& xs) {
    const Grid& g = U.grid;
    std::vector<double> out;
    for (double x : xs) {
        const double s = (x - g.x_min()) / g.h();
        const int i = std::clamp(static_cast<int>(std::floor(s)), 0, g.nx() - 2);
        const double t = s - i;
        out.push_back((1 - t) * U.at(i, 0) + t * U.at(i + 1, 0));
    }
    return out;
}

void qc_on_field(SuiteResult& res, const std::string& label, const ScalarField& u,
                 const Nonlinearity& F, bool quadratic, BranchCondition cond) {
    try {
        const BeltramiField b = beltrami(u, F.normalized());
        res.at_most(label + " beltrami violations", b.violations, 0);
        if (quadratic) res.at_most(label + " sup |mu| (quadratic F)", b.sup_mu, 1e-10);
        res.notes.push_back(label + " sup |mu| " + format_real(b.sup_mu) + ", sup bound " +
                            format_real(b.sup_bound));
    } catch (const NormTooLarge& e) {
        // Outside the small-gradient regime the bound has no content.
        res.notes.push_back(label + " beltrami bound not applicable: " + e.what());
    }
    const BranchSet bs = branch_points(u, cond);
    res.at_most(label + " branch set size", static_cast<double>(bs.points.size()),
                std::max(1, u.grid.nx() / 8));
}

}  // namespace

OnePhaseSolution regenerate_onephase(const fs::path& dir) {
    const Manifest m = read_manifest(dir);
    expect_command(m, "generate-onephase");
    GenerateOptions opt;
    if (m.get("fit_lo")) opt.window.lo = m.number("fit_lo");
    if (m.get("fit_hi")) opt.window.hi = m.number("fit_hi");
    return generate_onephase(CuspSpec{as_int(m, "n")}, m.number("r"), as_int(m, "grid_res"), opt);
}

TwoPhaseBundle regenerate_twophase(const fs::path& dir) {
    const Manifest m = read_manifest(dir);
    expect_command(m, "generate-twophase");
    const std::string kind = m.require("kind");
    const double r = m.number("r");
    const int res = as_int(m, "grid_res");
    if (kind == "flat") return build_flat(r, res);
    const CuspSpec spec{as_int(m, "n")};
    if (kind == "symmetric") return build_symmetric(spec, r, res);
    if (kind == "shifted") return build_shifted(spec, r, res, m.number("shift"));
    if (kind == "perturbed") return build_perturbed(spec, r, res, m.number("factor"));
    throw InvalidArgument("unknown two-phase kind '" + kind + "'");
}

SuiteResult onephase_suite(const fs::path& dir) {
    SuiteResult res;
    res.suite = "onephase";
    const OnePhaseSolution sol = regenerate_onephase(dir);
    const int n = sol.spec.n;

    const ScalarField u = read_scalar_field(dir / "u.csv");
    res.at_most("exported u matches regeneration", max_abs_diff(u, sol.u), 0.0);

    const double k2 = (4.0 * n - 1) / 2;
    res.within("cusp exponent", sol.boundary.cusp_exponent_estimate, 0.98 * k2, 1.02 * k2);
    const OnePhaseReport rep = check_onephase(sol);
    res.truth("f > 0 on x < 0 and f = 0 on x >= 0", rep.boundary_positive);
    res.at_most("free arc max ||grad u| - 1|", rep.free_arc_max_deviation, 5e-3);
    res.at_least("contact min |grad u|", rep.contact_min_gradient, 1 - 5e-3);
    res.at_most("reciprocity max ||grad u||grad v| - 1|", rep.reciprocity_max, 1e-2);
    res.at_most("identity f' dv/dy' = dv/dx'", rep.identity_f_prime, 1e-2);
    res.at_most("identity eta' dv/dy' = 1", rep.identity_eta_prime, 1e-2);

    const BranchSet bs = branch_points(sol.u, BranchCondition::one_phase);
    res.at_most("branch set size", static_cast<double>(bs.points.size()), 1);
    res.at_least("branch set size", static_cast<double>(bs.points.size()), 1);
    if (!bs.points.empty()) res.at_most("branch point |x|", std::abs(bs.points[0]), sol.u.grid.h());
    return res;
}

SuiteResult twophase_suite(const fs::path& dir) {
    SuiteResult res;
    res.suite = "twophase";
    TwoPhaseBundle b = regenerate_twophase(dir);
    const double h = b.u_plus.grid.h();

    const ScalarField up = read_scalar_field(dir / "u_plus.csv");
    res.at_most("exported u_plus matches regeneration", max_abs_diff(up, b.u_plus), 0.0);

    const PairReport pr = pair_transforms(b);
    res.at_most("separated |Q+| = 1", pr.plus_modulus, 1e-3);
    res.at_most("separated |Q-| = 1", pr.minus_modulus, 1e-3);
    res.at_most("|grad v+| = |grad v-| on the axis", pr.gradient_gap, 1e-3);
    res.at_most("eta' dv/dy' <= 1 on coincidence", pr.coincidence_excess, 1e-2);
    res.at_most("eta+' dv+/dy' = eta-' dv-/dy' on coincidence", pr.coincidence_mismatch, 1e-3);

    MDFields md;
    try {
        md = md_decompose(b, 1e-3);
        res.truth("M/D axis conditions", true);
    } catch (const AxisMismatch& e) {
        res.truth("M/D axis conditions", false);
        res.notes.push_back(e.what());
        md = md_decompose(b, 1e300);
    }
    res.at_most("reconstruction P+ = M + D", md.reconstruction_plus, 1e-12);
    res.at_most("reconstruction P- = conj M - conj D", md.reconstruction_minus, 1e-12);

    const auto zeros = d_zeros(md);
    const auto bp = branch_points(b.u_plus, BranchCondition::one_phase);
    const auto bx = to_hodograph(b.U_plus, bp.points);
    bool match = zeros.size() == bx.size();
    for (std::size_t k = 0; match && k < zeros.size(); ++k)
        match = std::abs(zeros[k] - bx[k]) <= h * (1 + 1e-9);
    res.truth("zeros of D = branch points within one cell", match);

    if (b.kind == "flat") {
        double dmax = 0.0;
        for (const cplx& d : md.D.values)
            if (std::isfinite(d.real())) dmax = std::max(dmax, std::abs(d));
        res.at_most("D = 0 on the flat bundle", dmax, 1e-12);
    } else {
        try {
            const double x_lo = -0.6 * b.retained_radius;
            const ExpansionReport e = expansion_integrals(md, x_lo, &b.f_plus, &b.f_minus);
            res.within("Psi order", e.Psi_order, 1.45, 1.55);
            if (e.Phi_zero)
                res.truth("M = 0 forces psi = 0", e.psi_zero);
            else
                res.within("psi order", e.psi_order, 2.4, 2.6);
            res.within("phi linear coefficient", e.phi_linear_coefficient, 0.95, 1.05);
            res.at_most("composition f+(phi + psi) = Phi + Psi", e.composition_plus, 1e-2);
            res.at_most("composition f-(phi - psi) = Phi - Psi", e.composition_minus, 1e-2);
        } catch (const Error& e) {
            res.truth(std::string("expansion integrals (") + e.code() + ")", false);
            res.notes.push_back(e.what());
        }
    }

    const SymmetryReport s = symmetry_lemma_check(b);
    res.notes.push_back("symmetry hypothesis max |eta+ - eta-| " + format_real(s.eta_gap) +
                        (s.applicable ? "" : " (not applicable)"));
    if (s.applicable) {
        res.at_most("symmetry max |f+ + f-|", s.f_sum, 1e-3);
        res.at_most("symmetry max |grad v+ - R grad v-|", s.grad_gap, 1e-3);
    }
    return res;
}

SuiteResult qc_suite(const fs::path& dir) {
    SuiteResult res;
    res.suite = "qc";
    const Manifest m = read_manifest(dir);
    const std::string command = m.require("command");
    if (command == "solve-obstacle") {
        const ScalarField v = read_scalar_field(dir / "solution.csv");
        const Nonlinearity F = Nonlinearity::from_name(m.require("nonlinearity"));
        qc_on_field(res, "solution", v, F, F.tag() == NonlinearityTag::quadratic,
                    BranchCondition::thin);
    } else if (command == "generate-onephase") {
        qc_on_field(res, "u", read_scalar_field(dir / "u.csv"), Nonlinearity::quadratic(), true,
                    BranchCondition::one_phase);
    } else if (command == "generate-twophase") {
        qc_on_field(res, "u_plus", read_scalar_field(dir / "u_plus.csv"),
                    Nonlinearity::quadratic(), true, BranchCondition::one_phase);
    } else {
        throw InvalidArgument("qc suite has nothing to check in a '" + command + "' run");
    }
    return res;
}

ScalarField classical_box(const ScalarField& w) {
    const Grid& g = w.grid;
    const int c0 = (g.nx() - 1) / 2;
    int best = 0, ba = 0, bb = 0;
    for (int a = 2; a <= c0; a += 2)
        for (int b = 2; b < g.ny(); b += 2) {
            if (a * b <= best) continue;
            bool ok = true;
            for (int j = 0; j <= b && ok; ++j)
                for (int i = c0 - a; i <= c0 + a && ok; ++i) ok = std::isfinite(w.at(i, j));
            if (ok) {
                best = a * b;
                ba = a;
                bb = b;
            }
        }
    if (ba < 4 || bb < 4) throw GridTooSmall("classical hodograph has no usable finite box");
    const int nx = ba + 1, ny = bb / 2 + 1;
    const Grid gs = Grid::with_spacing(g.x(c0 - ba), 0.0, 2 * g.h(), nx, ny, HalfPlane::upper);
    ScalarField d(gs);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) d.at(i, j) = w.at(c0 - ba + 2 * i, 2 * j);
    return d;
}

}  // namespace cuspforge::cli
