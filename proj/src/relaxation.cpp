#include "mac3/relaxation.hpp"

#include <vector>

#include "mac3/errors.hpp"

namespace mac3 {

SchurOperator::SchurOperator(const SaddleSystem& sys, bool factorize)
    : bc_(sys.bc()), matrix_(assemble_schur(sys)), diagonal_(schur_diagonal(sys)) {
    for (Eigen::Index i = 0; i < diagonal_.size(); ++i) {
        if (!(diagonal_[i] > 0.0)) {
            throw NumericalError("Schur diagonal is not positive at pressure cell " +
                                 std::to_string(i));
        }
    }
    if (!factorize) return;

    // [[S, 1], [1^T, 0]]
    const int m = static_cast<int>(matrix_.rows());
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(matrix_.nonZeros() + 2 * m);
    for (int c = 0; c < matrix_.outerSize(); ++c) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(matrix_, c); it; ++it) {
            trips.emplace_back(it.row(), it.col(), it.value());
        }
    }
    for (int i = 0; i < m; ++i) {
        trips.emplace_back(i, m, 1.0);
        trips.emplace_back(m, i, 1.0);
    }
    Eigen::SparseMatrix<double> bordered(m + 1, m + 1);
    bordered.setFromTriplets(trips.begin(), trips.end());
    bordered_ = std::make_shared<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
    bordered_->compute(bordered);
    if (bordered_->info() != Eigen::Success) {
        throw NumericalError("factorization of the bordered Schur system failed");
    }
}

Eigen::VectorXd SchurOperator::solve(const Eigen::VectorXd& rhs) const {
    if (!bordered_) throw NumericalError("SchurOperator was built without a factorization");
    const Eigen::Index m = rhs.size();
    Eigen::VectorXd ext = Eigen::VectorXd::Zero(m + 1);
    ext.head(m) = rhs;
    const Eigen::VectorXd sol = bordered_->solve(ext);
    if (bordered_->info() != Eigen::Success) throw NumericalError("Schur solve failed");
    return sol.head(m);
}

StaggeredState qdr_correction(const SaddleSystem& sys, const StaggeredState& r,
                              const RelaxParams& p) {
    // Lower-triangular M_D solve in the transformed variables.
    StaggeredState hat = sys.make_state();
    sys.apply_Q(r, hat);
    hat.segment(FieldKind::U) /= p.alpha;
    hat.segment(FieldKind::V) /= p.alpha;

    StaggeredState tmp = sys.make_state();
    sys.apply_B(hat, tmp);
    tmp.segment(FieldKind::P) = r.segment(FieldKind::P) - tmp.segment(FieldKind::P);
    StaggeredState hat_p = sys.make_state();
    sys.apply_Qp(tmp, hat_p);
    hat_p.segment(FieldKind::P) /= p.alpha;

    // Distribute: delta = [[I, B^T], [0, -A_p]] hat.
    StaggeredState delta = sys.make_state();
    sys.apply_Bt(hat_p, delta);
    delta.segment(FieldKind::U) += hat.segment(FieldKind::U);
    delta.segment(FieldKind::V) += hat.segment(FieldKind::V);
    sys.apply_Ap(hat_p, delta);
    delta.segment(FieldKind::P) *= -1.0;
    return delta;
}

StaggeredState bsr_correction(const SaddleSystem& sys, const SchurOperator& schur,
                              const StaggeredState& r, const RelaxParams& p) {
    StaggeredState qr = sys.make_state();
    sys.apply_Q(r, qr);
    StaggeredState rhs = sys.make_state();
    sys.apply_B(qr, rhs);
    Eigen::VectorXd s = rhs.segment(FieldKind::P) - p.alpha * r.segment(FieldKind::P);

    StaggeredState delta = sys.make_state();
    if (p.scheme == Scheme::QIBSR) {
        delta.segment(FieldKind::P) = p.omega_j * s.cwiseQuotient(schur.diagonal());
    } else {
        delta.segment(FieldKind::P) = schur.solve(s);
    }
    // The constant pressure mode is invisible to B^T.
    delta.segment(FieldKind::P).array() -= delta.mean(FieldKind::P);

    StaggeredState grad = sys.make_state();
    sys.apply_Bt(delta, grad);
    grad.segment(FieldKind::U) = r.segment(FieldKind::U) - grad.segment(FieldKind::U);
    grad.segment(FieldKind::V) = r.segment(FieldKind::V) - grad.segment(FieldKind::V);
    StaggeredState du = sys.make_state();
    sys.apply_Q(grad, du);
    delta.segment(FieldKind::U) = du.segment(FieldKind::U) / p.alpha;
    delta.segment(FieldKind::V) = du.segment(FieldKind::V) / p.alpha;
    return delta;
}

StaggeredState uzawa_correction(const SaddleSystem& sys, const StaggeredState& r,
                                const RelaxParams& p) {
    StaggeredState delta = sys.make_state();
    sys.apply_Q(r, delta);
    delta.segment(FieldKind::U) /= p.alpha;
    delta.segment(FieldKind::V) /= p.alpha;
    StaggeredState div = sys.make_state();
    sys.apply_B(delta, div);
    delta.segment(FieldKind::P) =
        -p.sigma * (r.segment(FieldKind::P) - div.segment(FieldKind::P));
    return delta;
}

namespace {

void require(const RelaxParams& p, Scheme expected) {
    p.validate();
    if (p.scheme != expected) {
        throw ConfigError("relaxation called with scheme " + std::string(to_string(p.scheme)) +
                          ", expected " + std::string(to_string(expected)));
    }
}

void damped_update(StaggeredState& x, const StaggeredState& delta, double omega) {
    x.data() += omega * delta.data();
}

}  // namespace

void relax_qdr(const SaddleSystem& sys, StaggeredState& x, const StaggeredState& b,
               const RelaxParams& p) {
    require(p, Scheme::QDR);
    damped_update(x, qdr_correction(sys, sys.residual(x, b), p), p.omega);
}

void relax_qbsr_exact(const SaddleSystem& sys, const SchurOperator& schur, StaggeredState& x,
                      const StaggeredState& b, const RelaxParams& p) {
    require(p, Scheme::QBSR_EXACT);
    damped_update(x, bsr_correction(sys, schur, sys.residual(x, b), p), p.omega);
}

void relax_qibsr(const SaddleSystem& sys, const SchurOperator& schur, StaggeredState& x,
                 const StaggeredState& b, const RelaxParams& p) {
    require(p, Scheme::QIBSR);
    damped_update(x, bsr_correction(sys, schur, sys.residual(x, b), p), p.omega);
}

void relax_uzawa(const SaddleSystem& sys, StaggeredState& x, const StaggeredState& b,
                 const RelaxParams& p) {
    require(p, Scheme::QUZAWA);
    damped_update(x, uzawa_correction(sys, sys.residual(x, b), p), p.omega);
}

Smoother::Smoother(const SaddleSystem& sys, const RelaxParams& p) : sys_(&sys), params_(p) {
    params_.validate();
    if (p.scheme == Scheme::QBSR_EXACT || p.scheme == Scheme::QIBSR) {
        schur_ = std::make_shared<const SchurOperator>(sys, p.scheme == Scheme::QBSR_EXACT);
    }
}

StaggeredState Smoother::correction(const StaggeredState& r) const {
    switch (params_.scheme) {
        case Scheme::QDR: return qdr_correction(*sys_, r, params_);
        case Scheme::QBSR_EXACT:
        case Scheme::QIBSR: return bsr_correction(*sys_, *schur_, r, params_);
        case Scheme::QUZAWA: return uzawa_correction(*sys_, r, params_);
    }
    throw ConfigError("unknown scheme");
}

void Smoother::sweep(StaggeredState& x, const StaggeredState& b) const {
    damped_update(x, correction(sys_->residual(x, b)), params_.omega);
}

}  // namespace mac3
