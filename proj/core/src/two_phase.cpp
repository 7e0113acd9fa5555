#include "cuspforge/two_phase.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <memory>
#include <sstream>

#include "cuspforge/error.hpp"
#include "cuspforge/field_ops.hpp"
#include "cuspforge/hodograph.hpp"
#include "cuspforge/quadrature.hpp"
#include "cuspforge/sampler.hpp"

namespace cuspforge {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
const cplx kI(0.0, 1.0);

Grid mirror_grid(const Grid& g) {
    if (g.side() == HalfPlane::upper)
        return Grid::with_spacing(g.x_min(), -g.y_max(), g.h(), g.nx(), g.ny(), HalfPlane::lower);
    if (g.side() == HalfPlane::lower)
        return Grid::with_spacing(g.x_min(), 0.0, g.h(), g.nx(), g.ny(), HalfPlane::upper);
    throw InvalidArgument("mirror needs a half-plane grid");
}

// out(x, y) = sign * f(x, -y)
ScalarField mirror(const ScalarField& f, double sign) {
    ScalarField out(mirror_grid(f.grid), kNaN);
    const int ny = f.grid.ny();
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < f.grid.nx(); ++i) out.at(i, ny - 1 - j) = sign * f.at(i, j);
    return out;
}

FreeBoundaryCurve negated(const FreeBoundaryCurve& c) {
    FreeBoundaryCurve out = c;
    for (double& f : out.fs) f = -f;
    return out;
}

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

ComplexField q_field(const ScalarField& v) {
    const auto [vx, vy] = gradient(v, finite_mask(v.values));
    ComplexField Q(v.grid, cplx(kNaN, kNaN));
    for (std::size_t k = 0; k < Q.values.size(); ++k)
        if (std::isfinite(vx.values[k]) && std::isfinite(vy.values[k]))
            Q.values[k] = cplx(vx.values[k], -vy.values[k]);
    return Q;
}

ComplexField p_field(const ComplexField& Q) {
    ComplexField P(Q.grid, cplx(kNaN, kNaN));
    for (std::size_t k = 0; k < P.values.size(); ++k) {
        const cplx q = Q.values[k];
        if (!finite(q) || std::abs(q - kI) < 1e-12) continue;
        P.values[k] = -kI * (q + kI) / (q - kI);
    }
    return P;
}

struct Band {
    double inner, outer;
    bool contains(double x) const { return std::abs(x) >= inner && std::abs(x) <= outer; }
};

Band band_of(const TwoPhaseBundle& b) {
    const double r = b.retained_radius > 0 ? b.retained_radius : b.r;
    return {r / 8, 3 * r / 4};
}

// Axis nodes where v+ and v- are apart. Coincidence gaps come out at
// rounding level; separated ones are O(|x'|^{3/2}) on the band.
std::vector<unsigned char> separated_axis(const TwoPhaseBundle& b) {
    const Grid& g = b.v_plus.grid;
    const double ctol = 10 * g.h() * g.h();
    std::vector<unsigned char> out(g.nx(), 0);
    for (int i = 0; i < g.nx(); ++i) {
        const double gap = b.v_plus.at(i, 0) - b.v_minus.at(i, g.ny() - 1);
        out[i] = std::isfinite(gap) && gap > ctol;
    }
    return out;
}

void require_transformed(const TwoPhaseBundle& b) {
    if (!b.transformed) throw InvalidArgument("bundle has no hodograph transforms yet");
}

std::vector<double> arc_length_eta(const std::vector<double>& xs, const std::vector<double>& fs) {
    // xs increasing, ending at 0 with fs = 0 there.
    std::vector<double> eta(xs.size(), 0.0);
    for (std::size_t k = xs.size() - 1; k-- > 0;)
        eta[k] = eta[k + 1] - std::hypot(xs[k + 1] - xs[k], fs[k + 1] - fs[k]);
    return eta;
}

}  // namespace

std::vector<double> mirror_values(const ScalarField& field) { return mirror(field, 1.0).values; }

TwoPhaseBundle build_symmetric(const CuspSpec& spec, double r, int grid_res) {
    const OnePhaseSolution sol = generate_onephase(spec, r, grid_res);
    TwoPhaseBundle b;
    b.kind = "symmetric";
    b.r = r;
    b.grid_res = grid_res;
    b.retained_radius = sol.inversion.retained_radius;
    b.u_plus = sol.u;
    b.u_minus = mirror(sol.u, -1.0);
    b.f_plus = sol.boundary;
    b.f_minus = negated(sol.boundary);
    b.eta_plus = sol.eta;
    b.eta_minus = sol.eta;
    const AnalyticMap p = spec.p_map();
    b.closed_form = AxisTraces{[](double) { return 0.0; },
                               [p](double t) { return eval(p, cplx(t, 0.0)).real(); },
                               "closed-form symmetric", {}};
    return b;
}

TwoPhaseBundle build_flat(double r, int grid_res) {
    const Grid g = hodograph_grid(r, grid_res);
    TwoPhaseBundle b;
    b.kind = "flat";
    b.r = r;
    b.grid_res = grid_res;
    b.retained_radius = r;
    b.u_plus = ScalarField::sample(g, [](double, double y) { return y; });
    b.u_minus = mirror(b.u_plus, -1.0);
    for (int i = 0; i < g.nx(); ++i) {
        b.f_plus.xs.push_back(g.x(i));
        b.f_plus.fs.push_back(0.0);
        b.f_plus.contact.push_back(1);
    }
    b.f_minus = b.f_plus;
    for (int i = 0; i < g.nx() && g.x(i) <= 0; ++i) {
        b.eta_plus.xs.push_back(g.x(i));
        b.eta_plus.etas.push_back(g.x(i));
    }
    b.eta_minus = b.eta_plus;
    b.closed_form = AxisTraces{[](double) { return 0.0; }, [](double) { return 0.0; },
                               "closed-form flat", {}};
    return b;
}

TwoPhaseBundle build_shifted(const CuspSpec& spec, double r, int grid_res, double shift) {
    TwoPhaseBundle b = build_symmetric(spec, r, grid_res);
    b.kind = "shifted";
    b.closed_form.reset();
    const Grid& g = b.u_plus.grid;
    if (shift < 0) shift = r / 4;
    const int m = std::max(1, static_cast<int>(std::lround(shift / g.h())));
    const double s = m * g.h();
    ScalarField ubar(g, kNaN);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i + m < g.nx(); ++i) ubar.at(i, j) = b.u_plus.at(i + m, j);
    b.u_minus = mirror(ubar, -1.0);
    for (double& x : b.f_minus.xs) x -= s;
    b.f_minus.xprime.clear();
    b.eta_minus = EtaMap{};
    return b;
}

TwoPhaseBundle build_perturbed(const CuspSpec& spec, double r, int grid_res, double factor) {
    TwoPhaseBundle b = build_symmetric(spec, r, grid_res);
    b.kind = "perturbed";
    b.closed_form.reset();
    for (double& f : b.f_minus.fs) f *= factor;
    return b;
}

AxisTraces hook_traces(const CuspSpec& spec, const std::vector<double>& m) {
    if (!m.empty() && m[0] != 0.0) throw InvalidArgument("hook M must vanish at the origin");
    const AnalyticMap p = spec.p_map();
    return AxisTraces{[m](double t) {
                          double s = 0.0, tk = 1.0;
                          for (std::size_t k = 1; k < m.size(); ++k) {
                              tk *= t;
                              s += m[k] * tk;
                          }
                          return s;
                      },
                      [p](double t) { return eval(p, cplx(t, 0.0)).real(); }, "hook", {}};
}

PairReport pair_transforms(TwoPhaseBundle& b) {
    const HodographPair plus = conformal_forward(b.u_plus, b.f_plus);
    const ScalarField ubar = mirror(b.u_minus, -1.0);
    const FreeBoundaryCurve fbar = negated(b.f_minus);
    const HodographPair minus = conformal_forward(ubar, fbar);

    b.v_plus = plus.v;
    b.U_plus = plus.x_prime;
    b.eta_plus = plus.eta;
    b.v_minus = mirror(minus.v, -1.0);
    b.U_minus = mirror(minus.x_prime, 1.0);
    b.eta_minus = minus.eta;
    b.Q_plus = q_field(b.v_plus);
    b.Q_minus = q_field(b.v_minus);
    b.P_plus = p_field(b.Q_plus);
    b.P_minus = p_field(b.Q_minus);
    b.transformed = true;

    PairReport rep;
    const Band band = band_of(b);
    rep.band_inner = band.inner;
    rep.band_outer = band.outer;
    const Grid& g = b.v_plus.grid;
    const int jm = g.ny() - 1;
    const auto sep = separated_axis(b);
    for (int i = 0; i < g.nx(); ++i) {
        if (!band.contains(g.x(i))) continue;
        const cplx qp = b.Q_plus.at(i, 0), qm = b.Q_minus.at(i, jm);
        if (!finite(qp) || !finite(qm)) continue;
        rep.gradient_gap = std::max(rep.gradient_gap, std::abs(std::abs(qp) - std::abs(qm)));
        if (sep[i]) {
            ++rep.separated_nodes;
            rep.plus_modulus = std::max(rep.plus_modulus, std::abs(std::abs(qp) - 1));
            rep.minus_modulus = std::max(rep.minus_modulus, std::abs(std::abs(qm) - 1));
        }
    }

    // Physical coincidence set: both curves at zero.
    const auto [Upx, Upy] = gradient(b.U_plus, finite_mask(b.U_plus.values));
    const auto [Ubx, Uby] = gradient(minus.x_prime, finite_mask(minus.x_prime.values));
    (void)Upy;
    (void)Uby;
    const FieldSampler sp(b.v_plus), sm(b.v_minus);
    const double ctol = 10 * g.h() * g.h();
    for (int i = 0; i < g.nx(); ++i) {
        const double x = g.x(i);
        const double fp = interpolate(b.f_plus, x), fm = interpolate(b.f_minus, x);
        if (!std::isfinite(fp) || !std::isfinite(fm) || fp - fm > ctol) continue;
        const double ep = b.U_plus.at(i, 0), em = minus.x_prime.at(i, 0);
        if (!std::isfinite(ep) || !std::isfinite(em) || !band.contains(ep) || !band.contains(em))
            continue;
        const auto a = sp({ep, 0.0});
        const auto c = sm({em, 0.0});
        const double dp = Upx.at(i, 0), dm = Ubx.at(i, 0);
        if (!a || !c || !std::isfinite(dp) || !std::isfinite(dm)) continue;
        const double lp = dp * a->dy, lm = dm * c->dy;
        ++rep.coincidence_nodes;
        rep.coincidence_mismatch = std::max(rep.coincidence_mismatch, std::abs(lp - lm));
        rep.coincidence_excess = std::max({rep.coincidence_excess, lp - 1, lm - 1});
    }

    for (std::size_t k = 0; k < b.eta_plus.xs.size(); ++k) {
        const double em = interpolate(b.eta_minus, b.eta_plus.xs[k]);
        if (std::isfinite(em))
            rep.eta_gap = std::max(rep.eta_gap, std::abs(b.eta_plus.etas[k] - em));
    }
    return rep;
}

MDFields md_decompose(const TwoPhaseBundle& b, double tol) {
    require_transformed(b);
    const Grid& g = b.P_plus.grid;
    const int ny = g.ny();
    MDFields md;
    md.M = ComplexField(g, cplx(kNaN, kNaN));
    md.D = md.M;
    md.P_prime = md.M;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < g.nx(); ++i) {
            const cplx pp = b.P_plus.at(i, j);
            const cplx pm = b.P_minus.at(i, ny - 1 - j);
            if (!finite(pp) || !finite(pm)) continue;
            const cplx pr = std::conj(pm);
            const cplx M = 0.5 * (pp + pr), D = 0.5 * (pp - pr);
            md.P_prime.at(i, j) = pr;
            md.M.at(i, j) = M;
            md.D.at(i, j) = D;
            md.reconstruction_plus = std::max(md.reconstruction_plus, std::abs(pp - (M + D)));
            md.reconstruction_minus =
                std::max(md.reconstruction_minus, std::abs(pm - (std::conj(M) - std::conj(D))));
        }

    const Band band = band_of(b);
    md.band_inner = band.inner;
    md.band_outer = band.outer;
    md.separated = separated_axis(b);
    for (int i = 0; i < g.nx(); ++i) {
        const cplx M = md.M.at(i, 0), D = md.D.at(i, 0);
        if (!band.contains(g.x(i)) || !finite(M)) continue;
        md.im_M_axis = std::max(md.im_M_axis, std::abs(M.imag()));
        if (md.separated[i])
            md.im_D_separated = std::max(md.im_D_separated, std::abs(D.imag()));
        else
            md.re_D_contact = std::max(md.re_D_contact, std::abs(D.real()));
    }
    auto fail = [&](const char* what, double value) {
        if (value > tol)
            throw AxisMismatch(std::string(what) + " = " + std::to_string(value) +
                               " exceeds " + std::to_string(tol));
    };
    fail("max |Im M| on the axis", md.im_M_axis);
    fail("max |Re D| on the contact side", md.re_D_contact);
    fail("max |Im D| on the separated side", md.im_D_separated);
    return md;
}

std::vector<double> d_zeros(const MDFields& md, double tol, double floor) {
    const Grid& g = md.D.grid;
    std::vector<double> out;
    for (int i = 1; i + 1 < g.nx(); ++i) {
        const cplx a = md.D.at(i - 1, 0), c = md.D.at(i, 0), d = md.D.at(i + 1, 0);
        if (!finite(a) || !finite(c) || !finite(d)) continue;
        if (std::max(std::abs(a), std::abs(d)) <= floor) continue;
        if (std::abs(c) <= tol && std::abs(c) < std::abs(a) && std::abs(c) < std::abs(d))
            out.push_back(g.x(i));
    }
    return out;
}

AxisTraces grid_traces(const MDFields& md) {
    const Grid& g = md.M.grid;
    auto xs = std::make_shared<std::vector<double>>();
    auto ms = std::make_shared<std::vector<double>>();
    auto ds = std::make_shared<std::vector<double>>();
    for (int i = 0; i < g.nx(); ++i) {
        const cplx M = md.M.at(i, 0), D = md.D.at(i, 0);
        if (!finite(M) || !finite(D)) continue;
        xs->push_back(g.x(i));
        ms->push_back(M.real());
        ds->push_back(D.real());
    }
    auto lerp = [xs](const std::shared_ptr<std::vector<double>>& ys) {
        return [xs, ys](double t) {
            if (xs->empty() || t < xs->front() || t > xs->back()) return kNaN;
            auto it = std::upper_bound(xs->begin(), xs->end(), t);
            if (it == xs->end()) return ys->back();
            const std::size_t k = static_cast<std::size_t>(it - xs->begin());
            const double w = (t - (*xs)[k - 1]) / ((*xs)[k] - (*xs)[k - 1]);
            return (1 - w) * (*ys)[k - 1] + w * (*ys)[k];
        };
    };
    return AxisTraces{lerp(ms), lerp(ds), "grid", *xs};
}

ExpansionReport expansion_integrals(const AxisTraces& tr, double x_lo,
                                    const FreeBoundaryCurve* f_plus,
                                    const FreeBoundaryCurve* f_minus, FitWindow window,
                                    int samples) {
    constexpr double kInner = 1e-5;
    if (!(x_lo < -kInner)) throw InvalidArgument("x_lo must lie left of -1e-5");
    if (samples < 16) throw InvalidArgument("expansion mesh needs at least 16 samples");

    auto den = [&](double t) {
        const double M = tr.M(t), D = tr.D(t);
        const double a = 1 + M * M + D * D;
        return std::pair{a * a - 4 * D * D * M * M, std::pair{M, D}};
    };
    using Integrand = std::function<double(double)>;
    const Integrand dPsi = [&](double t) {
        const auto [q, md] = den(t);
        const auto [M, D] = md;
        return 2 * D * (1 + D * D - M * M) / q;
    };
    const Integrand dPhi = [&](double t) {
        const auto [q, md] = den(t);
        const auto [M, D] = md;
        return 2 * M * (1 + M * M - D * D) / q;
    };
    const Integrand dpsi = [&](double t) {
        const auto [q, md] = den(t);
        const auto [M, D] = md;
        return -4 * D * M / q;
    };
    const Integrand dphi = [&](double t) {
        const auto [q, md] = den(t);
        const auto [M, D] = md;
        const double s = M * M - D * D;
        return (1 - s * s) / q;
    };

    ExpansionReport e;
    const double l0 = std::log(kInner), l1 = std::log(-x_lo);
    for (int k = 0; k < samples; ++k) e.xs.push_back(-std::exp(l0 + (l1 - l0) * k / (samples - 1)));

    QuadratureOptions opt;
    opt.abs_tol = 1e-300;
    opt.rel_tol = 1e-10;
    std::vector<double> kinks = tr.breakpoints;
    std::sort(kinks.begin(), kinks.end());
    auto piece = [&](const Integrand& f, double a, double b, const QuadratureOptions& o) {
        double s = 0.0, lo = a;
        auto it = std::upper_bound(kinks.begin(), kinks.end(), a);
        for (; it != kinks.end() && *it < b; ++it) {
            s += integrate(f, lo, *it, o);
            lo = *it;
        }
        return s + integrate(f, lo, b, o);
    };
    auto cumulative = [&](const Integrand& f, std::vector<double>& out) {
        out.resize(e.xs.size());
        QuadratureOptions first = opt;
        first.endpoint_singular = true;
        double acc = -piece(f, e.xs[0], 0.0, first);
        out[0] = acc;
        for (std::size_t k = 1; k < e.xs.size(); ++k) {
            acc -= piece(f, e.xs[k], e.xs[k - 1], opt);
            out[k] = acc;
        }
    };
    cumulative(dPhi, e.Phi);
    cumulative(dPsi, e.Psi);
    cumulative(dphi, e.phi);
    cumulative(dpsi, e.psi);

    const PowerFit fPsi = fit_power_law(e.xs, e.Psi, window.lo, window.hi);
    e.Psi_order = fPsi.exponent;
    e.Psi_coefficient = fPsi.coefficient;

    double scale = 0.0;
    for (double v : e.Psi) scale = std::max(scale, std::abs(v));
    auto fit_or_zero = [&](const std::vector<double>& ys, bool& zero, double& order,
                           double* coeff) {
        double m = 0.0;
        for (double v : ys) m = std::max(m, std::abs(v));
        zero = m <= 1e-12 * std::max(1.0, scale);
        order = kNaN;
        if (coeff) *coeff = 0.0;
        if (zero) return;
        try {
            const PowerFit f = fit_power_law(e.xs, ys, window.lo, window.hi);
            order = f.exponent;
            if (coeff) *coeff = f.coefficient;
        } catch (const FitFailure&) {
        }
    };
    fit_or_zero(e.Phi, e.Phi_zero, e.Phi_order, nullptr);
    fit_or_zero(e.psi, e.psi_zero, e.psi_order, &e.psi_coefficient);

    // phi/x' = c + O(x'): intercept of a straight-line fit in |x'| over the window.
    {
        double n = 0, sa = 0, sq = 0, saa = 0, saq = 0;
        for (std::size_t k = 0; k < e.xs.size(); ++k) {
            const double a = -e.xs[k];
            if (a < window.lo || a > window.hi) continue;
            const double q = e.phi[k] / e.xs[k];
            n += 1, sa += a, sq += q, saa += a * a, saq += a * q;
        }
        const double det = n * saa - sa * sa;
        e.phi_linear_coefficient = n >= 2 && det > 0 ? (saa * sq - sa * saq) / det : kNaN;
    }

    if (f_plus && f_minus) {
        for (std::size_t k = 0; k < e.xs.size(); ++k) {
            const double fp = interpolate(*f_plus, e.phi[k] + e.psi[k]);
            const double fm = interpolate(*f_minus, e.phi[k] - e.psi[k]);
            if (!std::isfinite(fp) || !std::isfinite(fm)) continue;
            ++e.composition_samples;
            e.composition_plus = std::max(e.composition_plus, std::abs(fp - (e.Phi[k] + e.Psi[k])));
            e.composition_minus =
                std::max(e.composition_minus, std::abs(fm - (e.Phi[k] - e.Psi[k])));
        }
    }
    return e;
}

ExpansionReport expansion_integrals(const MDFields& md, double x_lo,
                                    const FreeBoundaryCurve* f_plus,
                                    const FreeBoundaryCurve* f_minus,
                                    std::optional<FitWindow> window, int samples) {
    const double h = md.D.grid.h();
    return expansion_integrals(grid_traces(md), x_lo, f_plus, f_minus,
                               window.value_or(FitWindow{4 * h, 32 * h}), samples);
}

SymmetryReport symmetry_lemma_check(const TwoPhaseBundle& b, double tol, double conclusion_tol) {
    SymmetryReport rep;
    rep.tol = tol;
    rep.conclusion_tol = conclusion_tol;
    std::vector<double> xs, fp, fm;
    for (std::size_t k = 0; k < b.f_plus.xs.size(); ++k) {
        const double x = b.f_plus.xs[k];
        if (x >= 0) break;
        const double m = interpolate(b.f_minus, x);
        if (!std::isfinite(m)) continue;
        xs.push_back(x);
        fp.push_back(b.f_plus.fs[k]);
        fm.push_back(m);
    }
    if (xs.size() < 2) throw InvalidArgument("free boundaries share too few samples on x < 0");
    xs.push_back(0.0);
    fp.push_back(0.0);
    fm.push_back(0.0);
    const auto ep = arc_length_eta(xs, fp), em = arc_length_eta(xs, fm);
    for (std::size_t k = 0; k < xs.size(); ++k) {
        rep.eta_gap = std::max(rep.eta_gap, std::abs(ep[k] - em[k]));
        rep.f_sum = std::max(rep.f_sum, std::abs(fp[k] + fm[k]));
    }
    rep.applicable = rep.eta_gap <= tol;
    if (!rep.applicable) return rep;

    require_transformed(b);
    const Band band = band_of(b);
    const FieldSampler sp(b.v_plus), sm(b.v_minus);
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (!band.contains(ep[k])) continue;
        const auto a = sp({ep[k], 0.0});
        const auto c = sm({em[k], 0.0});
        if (!a || !c) continue;
        rep.grad_gap = std::max(rep.grad_gap, std::hypot(a->dx + c->dx, a->dy - c->dy));
    }
    rep.conclusion_holds = rep.f_sum <= conclusion_tol && rep.grad_gap <= conclusion_tol;
    return rep;
}

namespace {

std::ostringstream report_stream() {
    std::ostringstream os;
    os << std::setprecision(6);
    return os;
}

}  // namespace

std::string format_report(const PairReport& r) {
    auto os = report_stream();
    os << "band " << r.band_inner << " .. " << r.band_outer << "\n"
       << "separated |Q+| - 1 " << r.plus_modulus << "\n"
       << "separated |Q-| - 1 " << r.minus_modulus << "\n"
       << "gradient modulus gap " << r.gradient_gap << "\n"
       << "coincidence mismatch " << r.coincidence_mismatch << "\n"
       << "coincidence excess " << r.coincidence_excess << "\n"
       << "eta gap " << r.eta_gap << "\n"
       << "separated nodes " << r.separated_nodes << "\n"
       << "coincidence nodes " << r.coincidence_nodes << "\n";
    return os.str();
}

std::string format_report(const MDFields& md) {
    auto os = report_stream();
    os << "reconstruction + " << md.reconstruction_plus << "\n"
       << "reconstruction - " << md.reconstruction_minus << "\n"
       << "axis |Im M| " << md.im_M_axis << "\n"
       << "contact |Re D| " << md.re_D_contact << "\n"
       << "separated |Im D| " << md.im_D_separated << "\n";
    return os.str();
}

std::string format_report(const ExpansionReport& e) {
    auto os = report_stream();
    auto order = [&](double v, bool zero) {
        if (zero) return std::string("identically zero");
        std::ostringstream o;
        o << std::setprecision(6) << v;
        return o.str();
    };
    os << "Psi order " << e.Psi_order << " coefficient " << e.Psi_coefficient << "\n"
       << "Phi order " << order(e.Phi_order, e.Phi_zero) << "\n"
       << "psi order " << order(e.psi_order, e.psi_zero) << "\n"
       << "phi linear coefficient " << e.phi_linear_coefficient << "\n";
    if (e.composition_samples > 0)
        os << "composition + " << e.composition_plus << "\n"
           << "composition - " << e.composition_minus << "\n";
    return os.str();
}

std::string format_report(const SymmetryReport& s) {
    auto os = report_stream();
    os << "eta gap " << s.eta_gap << " (tol " << s.tol << ")\n";
    if (!s.applicable) {
        os << "not applicable: eta+ != eta-\n";
        return os.str();
    }
    os << "max |f+ + f-| " << s.f_sum << "\n"
       << "max gradient gap " << s.grad_gap << "\n"
       << "conclusion " << (s.conclusion_holds ? "holds" : "fails") << "\n";
    return os.str();
}

}  // namespace cuspforge
