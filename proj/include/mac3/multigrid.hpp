/// @file multigrid.hpp
/// @brief Coarsening-by-three multigrid for the staggered Stokes system.
///
/// Coarse unknowns are nested in the fine grid: coarse u(I, J) sits on fine
/// u(3I, 3J+1), v(I, J) on v(3I+1, 3J) and p(I, J) on p(3I+1, 3J+1). All three
/// fields use the same transfer stencils, centered on the nested fine point.

#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mac3/lfa_twogrid.hpp"
#include "mac3/mac.hpp"
#include "mac3/relaxation.hpp"

namespace mac3 {

enum class CycleType { TwoGrid, V };

std::string_view to_string(CycleType c);
CycleType parse_cycle(std::string_view name);

/// Weighted restriction to the coarse grid (coarse = R fine).
StaggeredState restrict_state(const StaggeredState& fine, Restriction r,
                              TransferClosure closure = {});
/// P25 prolongation (fine = P coarse); the 9-scaled adjoint of P25T restriction.
StaggeredState prolong_state(const StaggeredState& coarse, TransferClosure closure = {});

/// Exact solve of L x = b, bordered with mean-zero constraints on the gauge
/// fields (pressure, plus both velocities when periodic).
class CoarseSolver {
public:
    explicit CoarseSolver(const SaddleSystem& sys);
    StaggeredState solve(const StaggeredState& b) const;

private:
    int n_;
    BoundaryMode bc_;
    int size_;
    int constraints_;
    std::shared_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> lu_;
};

struct Level {
    std::unique_ptr<SaddleSystem> system;
    std::unique_ptr<Smoother> smoother;
    std::unique_ptr<CoarseSolver> solver;  // only where an exact solve is needed
};

/// Levels n, n/3, ..., 3 with their smoothers.
class GridHierarchy {
public:
    GridHierarchy(int n, BoundaryMode bc, const RelaxParams& p, Restriction r,
                  CycleType cycle, DirichletClosure closure = {});

    int levels() const { return static_cast<int>(levels_.size()); }
    const Level& level(int l) const { return levels_[static_cast<std::size_t>(l)]; }
    int n() const { return levels_.front().system->n(); }
    BoundaryMode bc() const { return bc_; }
    Restriction restriction() const { return restriction_; }
    CycleType cycle() const { return cycle_; }
    const RelaxParams& params() const { return params_; }
    const DirichletClosure& closure() const { return closure_; }

private:
    BoundaryMode bc_;
    RelaxParams params_;
    Restriction restriction_;
    CycleType cycle_;
    DirichletClosure closure_;
    std::vector<Level> levels_;
};

/// One two-grid cycle: exact solve on level 1.
void two_grid_cycle(const GridHierarchy& hier, StaggeredState& x, const StaggeredState& b,
                    int nu1, int nu2);
/// One V-cycle starting at `level`, direct solve on the coarsest grid.
void v_cycle(const GridHierarchy& hier, StaggeredState& x, const StaggeredState& b, int nu1,
             int nu2, int level = 0);
/// Dispatch on hier.cycle().
void cycle(const GridHierarchy& hier, StaggeredState& x, const StaggeredState& b, int nu1,
           int nu2);

struct SolveOptions {
    int nu1 = 1;
    int nu2 = 0;
    int max_iters = 200;
    double tolerance = 1e-12;
    double divergence_factor = 1e6;
    std::uint64_t seed = 1;
};

struct ConvergenceReport {
    std::vector<double> residual_norms;  // r_0 .. r_k
    int iterations = 0;
    double rho = 0.0;
    bool converged = false;
    bool diverged = false;
};

/// Cycles from a seeded random guess with zero right-hand side until
/// ||r_k|| <= tolerance. rho = (||r_k|| / ||r_0||)^{1/k}.
ConvergenceReport solve(const GridHierarchy& hier, const SolveOptions& opts);

/// Asymptotic rate of the cycle: power iteration on the error from the same
/// seeded guess, renormalized every cycle. After `warmup` cycles the residual
/// contraction is averaged geometrically over `window` cycles.
double asymptotic_rate(const GridHierarchy& hier, int nu1, int nu2, int warmup = 40,
                       int window = 80, std::uint64_t seed = 1);

/// Dense error-propagation matrix of one cycle (zero right-hand side),
/// built column by column. Limited to n <= 9.
Eigen::MatrixXd assemble_two_grid_matrix(const GridHierarchy& hier, int nu1, int nu2);

/// Orthogonal projector onto the complement of the gauge modes.
Eigen::MatrixXd gauge_complement_projector(int n, BoundaryMode bc);

}  // namespace mac3
