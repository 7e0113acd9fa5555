#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "cuspforge/cusp_generator.hpp"
#include "cuspforge/error.hpp"
#include "cuspforge/field_ops.hpp"
#include "cuspforge/sampler.hpp"

namespace cuspforge {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Jet {
    double s1, s2;              // S(p) = (V, v)
    double a11, a12, a21, a22;  // dS/dp
};

}  // namespace

InversionResult invert_hodograph(const ScalarField& v, const ScalarField& V) {
    if (!(v.grid == V.grid)) throw InvalidArgument("v and V live on different grids");
    const Grid& g = v.grid;
    const double h = g.h();

    // Shrink the radius until |grad v| >= 0.25 on the retained half-disk.
    const auto [vx, vy] = gradient(v);
    const double rmax = std::min({-g.x_min(), g.x_max(), g.y_max()});
    double reff = rmax;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            const double rho = std::hypot(g.x(i), g.y(j));
            if (rho <= rmax && std::hypot(vx.at(i, j), vy.at(i, j)) < 0.25)
                reff = std::min(reff, rho - 0.5 * h);
        }

    const FieldSampler sv(v), sV(V);
    auto jet = [&](Point p) -> std::optional<Jet> {
        const auto a = sV(p), b = sv(p);
        if (!a || !b) return std::nullopt;
        return Jet{a->value, b->value, a->dx, a->dy, b->dx, b->dy};
    };
    auto inside = [&](Point p) {
        return p.x >= g.x_min() - 1e-12 && p.x <= g.x_max() + 1e-12 && p.y >= g.y_min() - 2 * h &&
               p.y <= g.y_max() + 1e-12;
    };

    InversionResult out{ScalarField(g, kNaN), ScalarField(g, kNaN), ScalarField(g, kNaN), {}};
    out.stats.retained_radius = reff;

    // March outward from the origin so every node can borrow a solved neighbour.
    std::vector<std::size_t> order(g.size());
    std::iota(order.begin(), order.end(), 0);
    auto radius = [&](std::size_t k) {
        return std::hypot(g.x(static_cast<int>(k % g.nx())), g.y(static_cast<int>(k / g.nx())));
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return radius(a) < radius(b); });

    for (std::size_t k : order) {
        const int i = static_cast<int>(k % g.nx()), j = static_cast<int>(k / g.nx());
        const Point q = g.node(i, j);
        // Image of the retained half-disk cannot reach beyond this radius.
        if (std::hypot(q.x, q.y) > reff + 2 * h) continue;
        ++out.stats.attempted;

        Point p = q;
        double best = std::numeric_limits<double>::infinity();
        for (int dj = -1; dj <= 1; ++dj)
            for (int di = -1; di <= 1; ++di) {
                const int a = i + di, b = j + dj;
                if ((!di && !dj) || a < 0 || b < 0 || a >= g.nx() || b >= g.ny()) continue;
                const double px = out.preimage_x.at(a, b);
                if (!std::isfinite(px)) continue;
                const Point qn = g.node(a, b);
                const double d = std::hypot(qn.x, qn.y);
                if (d >= best) continue;
                const Point pn{px, out.preimage_y.at(a, b)};
                const auto J = jet(pn);
                if (!J) continue;
                const double det = J->a11 * J->a22 - J->a12 * J->a21;
                if (std::abs(det) < 1e-12) continue;
                const double r1 = q.x - qn.x, r2 = q.y - qn.y;
                best = d;
                p = {pn.x + (J->a22 * r1 - J->a12 * r2) / det,
                     pn.y + (-J->a21 * r1 + J->a11 * r2) / det};
            }

        bool converged = false, left = false;
        for (int it = 0; it < 100; ++it) {
            if (!inside(p) || std::hypot(p.x, p.y) > reff + 8 * h) {
                left = true;
                break;
            }
            const auto J = jet(p);
            if (!J) {
                left = true;
                break;
            }
            const double r1 = J->s1 - q.x, r2 = J->s2 - q.y;
            if (std::hypot(r1, r2) <= 1e-13) {
                converged = true;
                break;
            }
            const double det = J->a11 * J->a22 - J->a12 * J->a21;
            if (std::abs(det) < 1e-12) break;
            double dx = (J->a22 * r1 - J->a12 * r2) / det;
            double dy = (-J->a21 * r1 + J->a11 * r2) / det;
            const double len = std::hypot(dx, dy);
            if (len > 4 * h) {
                dx *= 4 * h / len;
                dy *= 4 * h / len;
            }
            p.x -= dx;
            p.y -= dy;
            if (len <= 1e-14 * (1 + std::hypot(p.x, p.y))) {
                converged = true;
                break;
            }
        }
        if (left) {
            ++out.stats.outside;
            continue;
        }
        if (!converged) {
            ++out.stats.diverged;
            continue;
        }
        if (p.y < -1e-9 || std::hypot(p.x, p.y) > reff) {
            ++out.stats.outside;
            continue;
        }
        ++out.stats.solved;
        out.preimage_x.at(i, j) = p.x;
        out.preimage_y.at(i, j) = p.y;
        out.u.at(i, j) = std::max(p.y, 0.0);
    }
    if (out.stats.diverged > 0.01 * out.stats.attempted)
        throw NewtonDivergence(std::to_string(out.stats.diverged) + " of " +
                               std::to_string(out.stats.attempted) +
                               " hodograph inversions did not converge");
    return out;
}

OnePhaseReport check_onephase(const OnePhaseSolution& s, int reciprocity_points,
                              int identity_points) {
    OnePhaseReport rep;
    const double reff = s.inversion.retained_radius;
    rep.band_inner = reff / 8;
    rep.band_outer = 0.75 * reff;
    const FieldSampler su(s.u), sv(s.v), sV(s.V);
    auto grad_norm = [](const std::optional<Sample>& a) {
        return a ? std::hypot(a->dx, a->dy) : kNaN;
    };
    auto track_max = [](double& slot, double value) {
        if (!std::isfinite(value)) value = std::numeric_limits<double>::infinity();
        slot = std::max(slot, value);
    };

    // Boundary conditions at the images of axis points.
    const int nb = std::max(2, identity_points);
    rep.contact_min_gradient = std::numeric_limits<double>::infinity();
    for (int m = 0; m < nb; ++m) {
        const double t = rep.band_inner + (rep.band_outer - rep.band_inner) * m / (nb - 1);
        for (double xp : {-t, t}) {
            const auto a = sV({xp, 0.0}), b = sv({xp, 0.0});
            if (!a || !b) continue;
            const double gu = grad_norm(su({a->value, std::max(b->value, 0.0)}));
            if (xp < 0) {
                track_max(rep.free_arc_max_deviation, std::abs(gu - 1.0));
                ++rep.free_arc_samples;
            } else {
                rep.contact_min_gradient =
                    std::min(rep.contact_min_gradient, std::isfinite(gu) ? gu : 0.0);
                ++rep.contact_samples;
            }
        }
    }

    // |grad u|(S p) |grad v|(p) = 1 on a seeded half-annulus sample.
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> rad(rep.band_inner, rep.band_outer), ang(0.0, M_PI);
    for (int m = 0; m < reciprocity_points; ++m) {
        const double rho = rad(rng), th = ang(rng);
        const Point p{rho * std::cos(th), rho * std::sin(th)};
        const auto a = sV(p), b = sv(p);
        if (!a || !b) continue;
        const double gu = grad_norm(su({a->value, b->value}));
        track_max(rep.reciprocity_max, std::abs(gu * std::hypot(b->dx, b->dy) - 1.0));
        ++rep.reciprocity_samples;
    }

    // Identities along eta on x < 0, from the sampled v and the curve data.
    const auto& e = s.eta;
    const auto& c = s.boundary;
    std::vector<std::size_t> picks;
    for (std::size_t k = 1; k + 1 < e.xs.size(); ++k) {
        const double a = std::abs(e.etas[k]);
        if (a >= rep.band_inner && a <= rep.band_outer) picks.push_back(k);
    }
    const std::size_t stride = std::max<std::size_t>(1, picks.size() / std::max(1, identity_points));
    for (std::size_t m = 0; m < picks.size(); m += stride) {
        const std::size_t k = picks[m];
        const double dx = e.xs[k + 1] - e.xs[k - 1];
        const double fp = (c.fs[k + 1] - c.fs[k - 1]) / dx;
        const double ep = (e.etas[k + 1] - e.etas[k - 1]) / dx;
        const auto b = sv({e.etas[k], 0.0});
        if (!b) continue;
        track_max(rep.identity_f_prime, std::abs(fp * b->dy - b->dx));
        track_max(rep.identity_eta_prime, std::abs(ep * b->dy - 1.0));
        track_max(rep.arc_length, std::abs(ep - std::sqrt(1.0 + fp * fp)));
    }

    rep.boundary_positive = true;
    for (std::size_t k = 0; k < c.xs.size(); ++k) {
        if (c.xs[k] < 0 && !(c.fs[k] > 0)) rep.boundary_positive = false;
        if (c.xs[k] >= 0 && c.fs[k] != 0.0) rep.boundary_positive = false;
    }
    return rep;
}

}  // namespace cuspforge
