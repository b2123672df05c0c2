#include "mac3/mac.hpp"

#include <stdexcept>
#include <string>
#include <vector>

#include "mac3/errors.hpp"

namespace mac3 {

bool valid_grid_size(int n) {
    if (n < 3) return false;
    while (n % 3 == 0) n /= 3;
    return n == 1;
}

StaggeredState::StaggeredState(int n, BoundaryMode bc) : n_(n), bc_(bc) {
    if (!valid_grid_size(n)) {
        throw ConfigError("grid size must be 3 * 3^k, got " + std::to_string(n));
    }
    const bool dir = bc == BoundaryMode::Dirichlet;
    layouts_[0] = {FieldKind::U, dir ? 1 : 0, dir ? n - 1 : n, 0, n, 0};
    layouts_[1] = {FieldKind::V, 0, n, dir ? 1 : 0, dir ? n - 1 : n, 0};
    layouts_[2] = {FieldKind::P, 0, n, 0, n, 0};
    layouts_[1].offset = layouts_[0].size();
    layouts_[2].offset = layouts_[1].offset + layouts_[1].size();
    data_ = Eigen::VectorXd::Zero(layouts_[2].offset + layouts_[2].size());
}

double StaggeredState::mean(FieldKind k) const { return segment(k).mean(); }

void StaggeredState::project_gauge() {
    segment(FieldKind::P).array() -= mean(FieldKind::P);
    if (bc_ == BoundaryMode::Periodic) {
        segment(FieldKind::U).array() -= mean(FieldKind::U);
        segment(FieldKind::V).array() -= mean(FieldKind::V);
    }
}

double norm(const StaggeredState& s) { return s.data().norm(); }

double dot(const StaggeredState& a, const StaggeredState& b) { return a.data().dot(b.data()); }

SaddleSystem::SaddleSystem(int n, BoundaryMode bc, DirichletClosure closure)
    : n_(n), bc_(bc), closure_(closure) {
    if (!valid_grid_size(n)) {
        throw ConfigError("grid size must be 3 * 3^k, got " + std::to_string(n));
    }
}

namespace {

int wrap(int i, int n) {
    const int r = i % n;
    return r < 0 ? r + n : r;
}

// Mirror index about the nearest wall into [lo, hi]; returns parity flips.
int mirror(int& i, int lo, int hi) {
    int flips = 0;
    while (i < lo || i > hi) {
        if (i < lo) i = 2 * lo - 1 - i;
        if (i > hi) i = 2 * hi + 1 - i;
        ++flips;
    }
    return flips;
}

}  // namespace

double SaddleSystem::fetch(const StaggeredState& x, FieldKind k, int i, int j, Ghost ghost) const {
    const int n = n_;
    if (bc_ == BoundaryMode::Periodic) return x(k, wrap(i, n), wrap(j, n));

    // Wall-normal velocity on or beyond the wall is zero.
    if (k == FieldKind::U && (i <= 0 || i >= n)) return 0.0;
    if (k == FieldKind::V && (j <= 0 || j >= n)) return 0.0;

    int flips = 0;
    if (k != FieldKind::U) flips += mirror(i, 0, n - 1);
    if (k != FieldKind::V) flips += mirror(j, 0, n - 1);
    if (flips == 0) return x(k, i, j);
    switch (ghost) {
        case Ghost::Zero: return 0.0;
        case Ghost::Even: return x(k, i, j);
        case Ghost::Odd: return (flips % 2 == 0 ? 1.0 : -1.0) * x(k, i, j);
    }
    return 0.0;
}

void SaddleSystem::apply_A(const StaggeredState& x, StaggeredState& out) const {
    const double s = 1.0 / (h() * h());
    const Ghost g = closure_.velocity_laplacian;
    for (FieldKind k : {FieldKind::U, FieldKind::V}) {
        const FieldLayout& l = x.layout(k);
        for (int j = l.j0; j < l.j0 + l.ny; ++j) {
            for (int i = l.i0; i < l.i0 + l.nx; ++i) {
                out(k, i, j) = s * (4.0 * x(k, i, j) - fetch(x, k, i - 1, j, g) -
                                    fetch(x, k, i + 1, j, g) - fetch(x, k, i, j - 1, g) -
                                    fetch(x, k, i, j + 1, g));
            }
        }
    }
}

void SaddleSystem::apply_B(const StaggeredState& x, StaggeredState& out) const {
    const double s = 1.0 / h();
    for (int j = 0; j < n_; ++j) {
        for (int i = 0; i < n_; ++i) {
            const double du = fetch(x, FieldKind::U, i + 1, j, Ghost::Zero) -
                              fetch(x, FieldKind::U, i, j, Ghost::Zero);
            const double dv = fetch(x, FieldKind::V, i, j + 1, Ghost::Zero) -
                              fetch(x, FieldKind::V, i, j, Ghost::Zero);
            out.p(i, j) = -s * (du + dv);
        }
    }
}

void SaddleSystem::apply_Bt(const StaggeredState& x, StaggeredState& out) const {
    const double s = 1.0 / h();
    const FieldLayout& lu = x.layout(FieldKind::U);
    for (int j = lu.j0; j < lu.j0 + lu.ny; ++j) {
        for (int i = lu.i0; i < lu.i0 + lu.nx; ++i) {
            out.u(i, j) = s * (x.p(i, j) - fetch(x, FieldKind::P, i - 1, j, Ghost::Zero));
        }
    }
    const FieldLayout& lv = x.layout(FieldKind::V);
    for (int j = lv.j0; j < lv.j0 + lv.ny; ++j) {
        for (int i = lv.i0; i < lv.i0 + lv.nx; ++i) {
            out.v(i, j) = s * (x.p(i, j) - fetch(x, FieldKind::P, i, j - 1, Ghost::Zero));
        }
    }
}

void SaddleSystem::apply_mass(const StaggeredState& x, StaggeredState& out, FieldKind k,
                              Ghost g) const {
    const double s = h() * h() / 36.0;
    const FieldLayout& l = x.layout(k);
    for (int j = l.j0; j < l.j0 + l.ny; ++j) {
        for (int i = l.i0; i < l.i0 + l.nx; ++i) {
            const double edges = fetch(x, k, i - 1, j, g) + fetch(x, k, i + 1, j, g) +
                                 fetch(x, k, i, j - 1, g) + fetch(x, k, i, j + 1, g);
            const double corners = fetch(x, k, i - 1, j - 1, g) + fetch(x, k, i + 1, j - 1, g) +
                                   fetch(x, k, i - 1, j + 1, g) + fetch(x, k, i + 1, j + 1, g);
            out(k, i, j) = s * (16.0 * x(k, i, j) + 4.0 * edges + corners);
        }
    }
}

void SaddleSystem::apply_Q(const StaggeredState& x, StaggeredState& out) const {
    apply_mass(x, out, FieldKind::U, closure_.velocity_mass);
    apply_mass(x, out, FieldKind::V, closure_.velocity_mass);
}

void SaddleSystem::apply_Qp(const StaggeredState& x, StaggeredState& out) const {
    apply_mass(x, out, FieldKind::P, closure_.pressure_mass);
}

void SaddleSystem::apply_Ap(const StaggeredState& x, StaggeredState& out) const {
    const double s = 1.0 / (h() * h());
    const Ghost g = closure_.pressure_laplacian;
    const FieldKind k = FieldKind::P;
    for (int j = 0; j < n_; ++j) {
        for (int i = 0; i < n_; ++i) {
            out.p(i, j) = s * (4.0 * x.p(i, j) - fetch(x, k, i - 1, j, g) -
                               fetch(x, k, i + 1, j, g) - fetch(x, k, i, j - 1, g) -
                               fetch(x, k, i, j + 1, g));
        }
    }
}

void SaddleSystem::apply(const StaggeredState& x, StaggeredState& out) const {
    StaggeredState grad = make_state();
    apply_A(x, out);
    apply_Bt(x, grad);
    out.segment(FieldKind::U) += grad.segment(FieldKind::U);
    out.segment(FieldKind::V) += grad.segment(FieldKind::V);
    apply_B(x, out);
}

StaggeredState SaddleSystem::apply(const StaggeredState& x) const {
    StaggeredState out = make_state();
    apply(x, out);
    return out;
}

void SaddleSystem::apply_schur(const StaggeredState& x, StaggeredState& out) const {
    StaggeredState grad = make_state();
    StaggeredState mass = make_state();
    apply_Bt(x, grad);
    apply_Q(grad, mass);
    apply_B(mass, out);
}

StaggeredState SaddleSystem::residual(const StaggeredState& x, const StaggeredState& b) const {
    if (x.size() != b.size() || x.n() != n_ || b.n() != n_) {
        throw std::invalid_argument("residual: state shape mismatch");
    }
    StaggeredState r = apply(x);
    r.data() = b.data() - r.data();
    return r;
}

Eigen::SparseMatrix<double> assemble(const StateOperator& op, int n, BoundaryMode bc) {
    StaggeredState e(n, bc);
    StaggeredState col(n, bc);
    const int size = e.size();
    std::vector<Eigen::Triplet<double>> trips;
    for (int c = 0; c < size; ++c) {
        e.data()[c] = 1.0;
        col.set_zero();
        op(e, col);
        for (int r = 0; r < size; ++r) {
            if (col.data()[r] != 0.0) trips.emplace_back(r, c, col.data()[r]);
        }
        e.data()[c] = 0.0;
    }
    Eigen::SparseMatrix<double> m(size, size);
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
}

namespace {

// Cell colouring such that same-coloured cells are never coupled by B Q B^T
// (stencil radius 2). Periodic grids need the period to divide n.
int colour_period(const SaddleSystem& sys) {
    if (sys.bc() == BoundaryMode::Dirichlet) return std::min(sys.n(), 5);
    if (sys.n() % 9 == 0) return 9;
    return sys.n();  // n = 3: every cell its own colour
}

}  // namespace

Eigen::VectorXd schur_diagonal(const SaddleSystem& sys) {
    const int n = sys.n();
    const int period = colour_period(sys);
    StaggeredState probe = sys.make_state();
    StaggeredState out = sys.make_state();
    Eigen::VectorXd diag(n * n);
    const FieldLayout& lp = probe.layout(FieldKind::P);
    for (int ci = 0; ci < period; ++ci) {
        for (int cj = 0; cj < period; ++cj) {
            probe.set_zero();
            for (int j = cj; j < n; j += period) {
                for (int i = ci; i < n; i += period) probe.p(i, j) = 1.0;
            }
            sys.apply_schur(probe, out);
            for (int j = cj; j < n; j += period) {
                for (int i = ci; i < n; i += period) {
                    diag[lp.index(i, j) - lp.offset] = out.p(i, j);
                }
            }
        }
    }
    return diag;
}

Eigen::SparseMatrix<double> assemble_schur(const SaddleSystem& sys) {
    const int n = sys.n();
    StaggeredState e = sys.make_state();
    StaggeredState out = sys.make_state();
    const FieldLayout& lp = e.layout(FieldKind::P);
    std::vector<Eigen::Triplet<double>> trips;
    for (int c = 0; c < n * n; ++c) {
        e.data()[lp.offset + c] = 1.0;
        out.set_zero();
        sys.apply_schur(e, out);
        const auto col = out.segment(FieldKind::P);
        for (int r = 0; r < n * n; ++r) {
            if (col[r] != 0.0) trips.emplace_back(r, c, col[r]);
        }
        e.data()[lp.offset + c] = 0.0;
    }
    Eigen::SparseMatrix<double> m(n * n, n * n);
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
}

}  // namespace mac3
