#include "cuspforge/thin_obstacle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cuspforge/error.hpp"

namespace cuspforge {

namespace {

constexpr double kDenominatorFloor = -1.0 + 1e-6;
// Relative size of an energy difference treated as rounding.
constexpr double kRoundoff = 1e-12;

// The four corner triangles of a cell use every pairing of the two x-edge
// and the two y-edge difference quotients. A single cell-averaged gradient
// would leave the checkerboard mode with zero energy.
template <class Visit>
void for_each_cell(const Grid& g, const std::vector<double>& v, Visit&& visit) {
    const double h = g.h();
    for (int j = 0; j + 1 < g.ny(); ++j)
        for (int i = 0; i + 1 < g.nx(); ++i) {
            const std::size_t k00 = g.index(i, j), k10 = g.index(i + 1, j),
                              k01 = g.index(i, j + 1), k11 = g.index(i + 1, j + 1);
            const double ax[2] = {(v[k10] - v[k00]) / h, (v[k11] - v[k01]) / h};
            const double ay[2] = {(v[k01] - v[k00]) / h, (v[k11] - v[k10]) / h};
            visit(k00, k10, k01, k11, ax, ay);
        }
}

// +inf when the rational guard would trip, so the line search can back off.
double energy_of(const Grid& g, const Nonlinearity& F, const std::vector<double>& v,
                 bool guarded) {
    const double w = g.h() * g.h() / 4.0;
    double e = 0.0;
    bool bad = false;
    for_each_cell(g, v, [&](auto, auto, auto, auto, const double* ax, const double* ay) {
        if (bad) return;
        for (int b = 0; b < 2; ++b) {
            if (guarded && F.tag() == NonlinearityTag::rational_bernoulli &&
                !(ay[b] > kDenominatorFloor)) {
                bad = true;
                return;
            }
            for (int a = 0; a < 2; ++a) e += w * F.F({ax[a], ay[b]});
        }
    });
    return bad ? std::numeric_limits<double>::infinity() : e;
}

std::vector<double> gradient_of(const Grid& g, const Nonlinearity& F,
                                const std::vector<double>& v) {
    std::vector<double> out(v.size(), 0.0);
    const double c = g.h() / 4.0;
    for_each_cell(g, v, [&](std::size_t k00, std::size_t k10, std::size_t k01, std::size_t k11,
                            const double* ax, const double* ay) {
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                const Vec2 d = F.grad({ax[a], ay[b]});
                // ax[0]: k10 - k00, ax[1]: k11 - k01; ay[0]: k01 - k00, ay[1]: k11 - k10
                if (a == 0) {
                    out[k10] += c * d[0];
                    out[k00] -= c * d[0];
                } else {
                    out[k11] += c * d[0];
                    out[k01] -= c * d[0];
                }
                if (b == 0) {
                    out[k01] += c * d[1];
                    out[k00] -= c * d[1];
                } else {
                    out[k11] += c * d[1];
                    out[k10] -= c * d[1];
                }
            }
    });
    return out;
}

void check_shape(const ObstacleProblem& p, const ScalarField& v) {
    if (!(v.grid == p.grid)) throw InvalidArgument("field does not match the problem grid");
}

void check_problem(const ObstacleProblem& p) {
    const std::size_t n = p.grid.size();
    if (p.data.values.size() != n || p.dirichlet.size() != n || p.constraint.size() != n)
        throw InvalidArgument("problem arrays do not match the grid");
    bool any = false;
    for (std::size_t k = 0; k < n; ++k) {
        if (p.dirichlet[k] && !std::isfinite(p.data.values[k]))
            throw InvalidArgument("Dirichlet data is not finite");
        any = any || p.constraint[k];
    }
    if (!any) throw InvalidArgument("constraint mask is empty");
}

double project(const ObstacleProblem& p, std::size_t k, double value) {
    return p.constraint[k] && value < 0.0 ? 0.0 : value;
}

double projected_gradient_norm(const ObstacleProblem& p, const std::vector<double>& v,
                               const std::vector<double>& g) {
    const double inv_h2 = 1.0 / (p.grid.h() * p.grid.h());
    double m = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (p.dirichlet[k]) continue;
        m = std::max(m, std::abs(v[k] - project(p, k, v[k] - g[k] * inv_h2)));
    }
    return m;
}

struct LevelOutcome {
    std::vector<double> v;
    std::vector<double> energies;
    int iterations = 0;
    double pg = 0;
    bool converged = false;
    bool monotone = true;
    int violations = 0;
};

LevelOutcome descend(const ObstacleProblem& p, std::vector<double> v, const SolveOptions& o) {
    const Grid& g = p.grid;
    const Nonlinearity Fn = p.F.normalized();
    const double s = p.F.normalization();
    LevelOutcome out;

    double e = energy_of(g, Fn, v, true);
    if (!std::isfinite(e))
        throw DenominatorDegenerate("starting field has d/dy v <= -1 + 1e-6");
    std::vector<double> grad = gradient_of(g, Fn, v);
    out.energies.push_back(e / s);

    double alpha = 1.0;
    std::vector<double> trial(v.size()), grad_new;
    for (; out.iterations < o.max_iter; ++out.iterations) {
        out.pg = projected_gradient_norm(p, v, grad);
        if (out.pg <= o.tol) {
            out.converged = true;
            break;
        }
        double t = alpha;
        double e_trial = 0.0, predicted = 0.0;
        for (;;) {
            predicted = 0.0;
            for (std::size_t k = 0; k < v.size(); ++k) {
                trial[k] = p.dirichlet[k] ? v[k] : project(p, k, v[k] - t * grad[k]);
                predicted += grad[k] * (trial[k] - v[k]);
            }
            e_trial = energy_of(g, Fn, trial, true);
            if (e_trial <= e + o.armijo * predicted) {
                grad_new = gradient_of(g, Fn, trial);
                break;
            }
            // Near the minimum the energy difference drowns in rounding; fall
            // back to the derivative form of the same condition (exact for a
            // quadratic along the step).
            if (std::isfinite(e_trial) && std::abs(e_trial - e) <= kRoundoff * std::max(1.0, std::abs(e))) {
                grad_new = gradient_of(g, Fn, trial);
                double slope = 0.0;
                for (std::size_t k = 0; k < v.size(); ++k) slope += grad_new[k] * (trial[k] - v[k]);
                if (slope <= (2 * o.armijo - 1) * predicted) break;
            }
            t *= o.backtrack;
            if (t < o.min_step) {
                throw LineSearchStall("no energy decrease at step " + std::to_string(t) +
                                      " (projected gradient " + std::to_string(out.pg) + ")");
            }
        }
        if (e_trial > e + kRoundoff * std::max(1.0, std::abs(e))) out.monotone = false;
        for (std::size_t k = 0; k < v.size(); ++k)
            if (p.constraint[k] && trial[k] < 0.0) ++out.violations;

        double sy = 0.0, yy = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (p.dirichlet[k]) continue;
            const double yk = grad_new[k] - grad[k];
            sy += (trial[k] - v[k]) * yk;
            yy += yk * yk;
        }
        // Short Barzilai-Borwein step as the next trial; Armijo keeps the descent monotone.
        alpha = sy > 0.0 && yy > 0.0 ? std::clamp(sy / yy, 1e-10, 1e10) : 2.0 * t;
        v.swap(trial);
        grad.swap(grad_new);
        e = e_trial;
        out.energies.push_back(e / s);
    }
    if (!out.converged) out.pg = projected_gradient_norm(p, v, grad);
    out.v = std::move(v);
    return out;
}

bool coarsenable(const Grid& g) {
    return (g.nx() - 1) % 2 == 0 && (g.ny() - 1) % 2 == 0 && g.nx() >= 9 && g.ny() >= 9;
}

ObstacleProblem coarsen(const ObstacleProblem& p) {
    const Grid& g = p.grid;
    const int nx = (g.nx() - 1) / 2 + 1, ny = (g.ny() - 1) / 2 + 1;
    ObstacleProblem c;
    c.grid = Grid::with_spacing(g.x_min(), g.y_min(), 2 * g.h(), nx, ny, g.side());
    c.F = p.F;
    c.data = ScalarField(c.grid);
    c.dirichlet.assign(c.grid.size(), 0);
    c.constraint.assign(c.grid.size(), 0);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const std::size_t kc = c.grid.index(i, j), kf = g.index(2 * i, 2 * j);
            c.data.values[kc] = p.data.values[kf];
            c.dirichlet[kc] = p.dirichlet[kf];
            c.constraint[kc] = p.constraint[kf];
        }
    return c;
}

std::vector<double> restrict_field(const Grid& fine, const Grid& coarse,
                                   const std::vector<double>& v) {
    std::vector<double> out(coarse.size());
    for (int j = 0; j < coarse.ny(); ++j)
        for (int i = 0; i < coarse.nx(); ++i)
            out[coarse.index(i, j)] = v[fine.index(2 * i, 2 * j)];
    return out;
}

std::vector<double> prolong(const ObstacleProblem& fine, const Grid& coarse,
                            const std::vector<double>& vc) {
    const Grid& g = fine.grid;
    std::vector<double> out(g.size());
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            const int i0 = i / 2, j0 = j / 2;
            const int i1 = std::min(i0 + (i % 2), coarse.nx() - 1);
            const int j1 = std::min(j0 + (j % 2), coarse.ny() - 1);
            const double val = 0.25 * (vc[coarse.index(i0, j0)] + vc[coarse.index(i1, j0)] +
                                       vc[coarse.index(i0, j1)] + vc[coarse.index(i1, j1)]);
            const std::size_t k = g.index(i, j);
            out[k] = fine.dirichlet[k] ? fine.data.values[k] : project(fine, k, val);
        }
    return out;
}

double one_sided_dy(const ScalarField& v, int i) {
    const Grid& g = v.grid;
    const double h = g.h();
    if (g.ny() >= 5)
        return (-25 * v.at(i, 0) + 48 * v.at(i, 1) - 36 * v.at(i, 2) + 16 * v.at(i, 3) -
                3 * v.at(i, 4)) /
               (12 * h);
    if (g.ny() >= 4)
        return (-11 * v.at(i, 0) + 18 * v.at(i, 1) - 9 * v.at(i, 2) + 2 * v.at(i, 3)) / (6 * h);
    if (g.ny() >= 3) return (-3 * v.at(i, 0) + 4 * v.at(i, 1) - v.at(i, 2)) / (2 * h);
    return (v.at(i, 1) - v.at(i, 0)) / h;
}

double row_dx(const ScalarField& v, int i, int j) {
    const Grid& g = v.grid;
    const double h = g.h();
    if (i == 0) return (v.at(1, j) - v.at(0, j)) / h;
    if (i == g.nx() - 1) return (v.at(i, j) - v.at(i - 1, j)) / h;
    return (v.at(i + 1, j) - v.at(i - 1, j)) / (2 * h);
}

}  // namespace

ObstacleProblem make_problem(const Grid& grid, const Nonlinearity& F,
                             const std::function<double(double, double)>& data,
                             bool dirichlet_bottom) {
    ScalarField d(grid);
    for (int j = 0; j < grid.ny(); ++j)
        for (int i = 0; i < grid.nx(); ++i)
            if (i == 0 || j == 0 || i == grid.nx() - 1 || j == grid.ny() - 1)
                d.at(i, j) = data(grid.x(i), grid.y(j));
    return make_problem(d, F, dirichlet_bottom);
}

ObstacleProblem make_problem(const ScalarField& data, const Nonlinearity& F,
                             bool dirichlet_bottom) {
    const Grid& g = data.grid;
    if (g.nx() < 3 || g.ny() < 3) throw GridTooSmall("obstacle grid needs at least 3x3 nodes");
    if (std::abs(g.y_min()) > 1e-12 * std::max(1.0, g.y_max()))
        throw InvalidArgument("obstacle grid must start at y = 0");
    ObstacleProblem p;
    p.grid = g;
    p.F = F;
    p.data = data;
    p.dirichlet.assign(g.size(), 0);
    p.constraint.assign(g.size(), 0);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            const std::size_t k = g.index(i, j);
            const bool edge = i == 0 || i == g.nx() - 1 || j == g.ny() - 1;
            p.dirichlet[k] = edge || (dirichlet_bottom && j == 0);
            p.constraint[k] = j == 0 && !edge;
        }
    check_problem(p);
    return p;
}

ScalarField initial_guess(const ObstacleProblem& p) {
    check_problem(p);
    const Grid& g = p.grid;
    const auto d = [&](int i, int j) { return p.data.at(i, j); };
    const int I = g.nx() - 1, J = g.ny() - 1;
    ScalarField v(g);
    for (int j = 0; j <= J; ++j)
        for (int i = 0; i <= I; ++i) {
            const double s = double(i) / I, t = double(j) / J;
            const double bottom = (1 - s) * d(0, 0) + s * d(I, 0);
            const double coons = (1 - t) * std::max(0.0, bottom) + t * d(i, J) +
                                 (1 - s) * d(0, j) + s * d(I, j) -
                                 ((1 - s) * (1 - t) * d(0, 0) + s * (1 - t) * d(I, 0) +
                                  (1 - s) * t * d(0, J) + s * t * d(I, J));
            const std::size_t k = g.index(i, j);
            v.values[k] = p.dirichlet[k] ? d(i, j) : project(p, k, coons);
        }
    return v;
}

double signorini32(double x, double y) {
    const double r = std::hypot(x, y);
    if (r == 0.0) return 0.0;
    return std::pow(r, 1.5) * std::cos(1.5 * std::atan2(y, x));
}

double energy(const ObstacleProblem& problem, const ScalarField& v) {
    check_shape(problem, v);
    return energy_of(problem.grid, problem.F, v.values, false);
}

std::vector<double> energy_gradient(const ObstacleProblem& problem, const ScalarField& v) {
    check_shape(problem, v);
    return gradient_of(problem.grid, problem.F, v.values);
}

KKTReport kkt_report(const ObstacleProblem& p, const ScalarField& v, double active_tol) {
    check_shape(p, v);
    const Grid& g = p.grid;
    const double h = g.h();
    if (active_tol < 0) active_tol = 10 * h * h;
    KKTReport r;
    const std::vector<double> grad = gradient_of(g, p.F, v.values);
    r.min_constraint_value = std::numeric_limits<double>::infinity();
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            const std::size_t k = g.index(i, j);
            if (p.constraint[k]) {
                const double f2 = p.F.grad({row_dx(v, i, j), one_sided_dy(v, i)})[1];
                r.min_constraint_value = std::min(r.min_constraint_value, v.values[k]);
                if (v.values[k] > active_tol) {
                    ++r.positive_nodes;
                    r.max_positive_part_flux = std::max(r.max_positive_part_flux, std::abs(f2));
                } else {
                    ++r.active_nodes;
                    r.max_flux_sign_violation = std::max(r.max_flux_sign_violation, f2);
                }
            } else if (!p.dirichlet[k]) {
                r.max_interior_euler_lagrange_residual =
                    std::max(r.max_interior_euler_lagrange_residual, std::abs(grad[k]) / (h * h));
            }
        }
    return r;
}

SolveResult solve(const ObstacleProblem& problem, const ScalarField& v0, double tol,
                  int max_iter) {
    SolveOptions o;
    o.tol = tol;
    o.max_iter = max_iter;
    return solve(problem, v0, o);
}

SolveResult solve(const ObstacleProblem& problem, const ScalarField& v0,
                  const SolveOptions& options) {
    check_problem(problem);
    check_shape(problem, v0);
    if (!(options.tol > 0) || options.max_iter < 0 || !(options.armijo > 0 && options.armijo < 1) ||
        !(options.backtrack > 0 && options.backtrack < 1))
        throw InvalidArgument("bad solver options");
    for (std::size_t k = 0; k < v0.values.size(); ++k) {
        const double x = v0.values[k];
        if (!std::isfinite(x)) throw Infeasible("starting field is not finite");
        if (problem.constraint[k] && !problem.dirichlet[k] && x < 0.0)
            throw Infeasible("starting field is negative on the constraint line");
        if (problem.dirichlet[k] &&
            std::abs(x - problem.data.values[k]) > 1e-12 * (1.0 + std::abs(problem.data.values[k])))
            throw Infeasible("starting field does not match the Dirichlet data");
    }

    std::vector<ObstacleProblem> ladder{problem};
    while (static_cast<int>(ladder.size()) < options.levels && coarsenable(ladder.back().grid))
        ladder.push_back(coarsen(ladder.back()));

    std::vector<double> v = v0.values;
    std::vector<std::vector<double>> starts{v};
    for (std::size_t l = 1; l < ladder.size(); ++l)
        starts.push_back(restrict_field(ladder[l - 1].grid, ladder[l].grid, starts.back()));

    SolveResult result;
    std::vector<double> current = starts.back();
    for (std::size_t l = ladder.size(); l-- > 0;) {
        if (l + 1 < ladder.size()) current = prolong(ladder[l], ladder[l + 1].grid, current);
        LevelOutcome lo = descend(ladder[l], current, options);
        result.level_iterations.push_back(lo.iterations);
        result.feasibility_violations += lo.violations;
        result.energy_monotone = result.energy_monotone && lo.monotone;
        if (l == 0) {
            result.energies = std::move(lo.energies);
            result.iterations = lo.iterations;
            result.projected_gradient = lo.pg;
            result.converged = lo.converged;
        }
        current = std::move(lo.v);
    }
    result.v = ScalarField(problem.grid, std::move(current));
    result.kkt = kkt_report(problem, result.v, options.active_tol);
    return result;
}

double variational_inequality_gap(const ObstacleProblem& problem, const ScalarField& U,
                                  const ScalarField& v) {
    check_shape(problem, U);
    check_shape(problem, v);
    const std::vector<double> grad = gradient_of(problem.grid, problem.F, U.values);
    double sum = 0.0;
    for (std::size_t k = 0; k < grad.size(); ++k) sum += grad[k] * (U.values[k] - v.values[k]);
    return sum;
}

}  // namespace cuspforge
