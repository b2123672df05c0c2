/// @file relaxation.hpp
/// @brief Whole-field block relaxation sweeps for the staggered Stokes system.
///
/// Every sweep computes r = b - L x, forms a correction delta from r and
/// updates x += omega * delta. C^{-1} = diag(Q, Q), so only exact
/// Braess-Sarazin ever solves a linear system.

#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <memory>

#include "mac3/lfa_symbols.hpp"
#include "mac3/mac.hpp"

namespace mac3 {

/// The pressure Schur operator B Q B^T of one level.
class SchurOperator {
public:
    /// With `factorize`, also prepares exact solves (bordered by the
    /// mean-zero pressure constraint).
    explicit SchurOperator(const SaddleSystem& sys, bool factorize = false);

    BoundaryMode bc() const { return bc_; }
    const Eigen::SparseMatrix<double>& matrix() const { return matrix_; }
    const Eigen::VectorXd& diagonal() const { return diagonal_; }

    Eigen::VectorXd apply(const Eigen::VectorXd& p) const { return matrix_ * p; }

    /// Mean-zero solution of S x = rhs (least-squares consistent part).
    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

private:
    BoundaryMode bc_;
    Eigen::SparseMatrix<double> matrix_;
    Eigen::VectorXd diagonal_;
    std::shared_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> bordered_;
};

/// Correction delta = M^{-1} r (distributed for QDR); no damping applied.
StaggeredState qdr_correction(const SaddleSystem& sys, const StaggeredState& r,
                              const RelaxParams& p);
StaggeredState bsr_correction(const SaddleSystem& sys, const SchurOperator& schur,
                              const StaggeredState& r, const RelaxParams& p);
StaggeredState uzawa_correction(const SaddleSystem& sys, const StaggeredState& r,
                                const RelaxParams& p);

void relax_qdr(const SaddleSystem& sys, StaggeredState& x, const StaggeredState& b,
               const RelaxParams& p);
void relax_qbsr_exact(const SaddleSystem& sys, const SchurOperator& schur, StaggeredState& x,
                      const StaggeredState& b, const RelaxParams& p);
void relax_qibsr(const SaddleSystem& sys, const SchurOperator& schur, StaggeredState& x,
                 const StaggeredState& b, const RelaxParams& p);
void relax_uzawa(const SaddleSystem& sys, StaggeredState& x, const StaggeredState& b,
                 const RelaxParams& p);

/// A scheme bound to one level, holding whatever the scheme precomputes.
class Smoother {
public:
    Smoother(const SaddleSystem& sys, const RelaxParams& p);

    const RelaxParams& params() const { return params_; }

    void sweep(StaggeredState& x, const StaggeredState& b) const;
    /// Undamped correction for residual r.
    StaggeredState correction(const StaggeredState& r) const;

private:
    const SaddleSystem* sys_;
    RelaxParams params_;
    std::shared_ptr<const SchurOperator> schur_;
};

}  // namespace mac3
