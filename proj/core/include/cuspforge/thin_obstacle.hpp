#pragma once

#include <functional>
#include <vector>

#include "cuspforge/grid.hpp"
#include "cuspforge/nonlinearity.hpp"

namespace cuspforge {

struct ObstacleProblem {
    Grid grid;
    ScalarField data;       // Dirichlet values, read only where dirichlet is set
    Mask dirichlet;
    Mask constraint;        // v >= 0 on these nodes unless they are Dirichlet
    Nonlinearity F = Nonlinearity::quadratic();
};

// Dirichlet on the left, right and top edges from data(x, y); the bottom row
// carries the constraint. With dirichlet_bottom the bottom row is fixed too.
ObstacleProblem make_problem(const Grid& grid, const Nonlinearity& F,
                             const std::function<double(double, double)>& data,
                             bool dirichlet_bottom = false);
ObstacleProblem make_problem(const ScalarField& data, const Nonlinearity& F,
                             bool dirichlet_bottom = false);

// Coons patch of the Dirichlet data; the bottom edge is blended linearly
// between its corners and clamped at 0.
ScalarField initial_guess(const ObstacleProblem& problem);

// r^(3/2) cos(3 theta / 2): zero on the negative axis, zero flux on the positive one.
double signorini32(double x, double y);

struct KKTReport {
    double max_interior_euler_lagrange_residual = 0;
    double max_positive_part_flux = 0;
    double max_flux_sign_violation = 0;
    double min_constraint_value = 0;
    int positive_nodes = 0;
    int active_nodes = 0;
};

// Sum over cells of h^2/4 times F at the four corner-triangle gradients.
double energy(const ObstacleProblem& problem, const ScalarField& v);
// dE/dv at every node (Dirichlet nodes included).
std::vector<double> energy_gradient(const ObstacleProblem& problem, const ScalarField& v);

// Constraint nodes with v > active_tol (default 10 h^2) form the positive
// set; F2 uses the five-point one-sided y-stencil (fourth order).
KKTReport kkt_report(const ObstacleProblem& problem, const ScalarField& v,
                     double active_tol = -1.0);

struct SolveOptions {
    double tol = 1e-8;
    int max_iter = 20000;
    double armijo = 1e-4;
    double backtrack = 0.5;
    double min_step = 1e-14;
    double active_tol = -1.0;
    int levels = 1;  // > 1: solve on coarser grids first and prolongate
};

struct SolveResult {
    ScalarField v;
    KKTReport kkt;
    std::vector<double> energies;  // accepted iterates on the finest level
    std::vector<int> level_iterations;
    int iterations = 0;
    double projected_gradient = 0;
    bool converged = false;
    bool energy_monotone = true;
    int feasibility_violations = 0;
};

// Projected gradient descent with Armijo backtracking on the normalized
// energy. The projected-gradient norm is max |v - P(v - g/h^2)| over free
// nodes. Throws Infeasible for a bad start and LineSearchStall when no step
// above min_step decreases the energy.
SolveResult solve(const ObstacleProblem& problem, const ScalarField& v0, double tol,
                  int max_iter);
SolveResult solve(const ObstacleProblem& problem, const ScalarField& v0,
                  const SolveOptions& options);

// Discrete value of the integral of grad F(grad U) . grad(U - v).
double variational_inequality_gap(const ObstacleProblem& problem, const ScalarField& U,
                                  const ScalarField& v);

}  // namespace cuspforge
