/// @file mac.hpp
/// @brief Staggered (MAC) discretization of the 2D Stokes system on the unit
///        square, periodic or with homogeneous Dirichlet velocity.
///
/// Grid layout with n cells per direction and h = 1/n:
///   u(i, j) at (i h, (j + 1/2) h)      vertical edge midpoints
///   v(i, j) at ((i + 1/2) h, j h)      horizontal edge midpoints
///   p(i, j) at ((i + 1/2) h, (j + 1/2) h)  cell centers
/// Periodic: all indices run over 0..n-1. Dirichlet: the wall-normal velocity
/// unknowns on the boundary are eliminated, so u has i = 1..n-1 and v has
/// j = 1..n-1. Tangential stencil legs that leave the domain use ghost values.
///
/// All operator actions are matrix-free. assemble() builds an explicit sparse
/// matrix by probing, for coarse solves and small oracle problems only.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <functional>

namespace mac3 {

enum class BoundaryMode { Periodic, Dirichlet };

/// How a stencil leg that leaves the domain tangentially is closed.
enum class Ghost {
    Zero,  // contributes nothing
    Odd,   // ghost = -interior (zero value on the wall)
    Even,  // ghost = interior (zero normal derivative)
};

enum class FieldKind { U = 0, V = 1, P = 2 };

/// Closure of transfer stencil legs that cross a wall, per field type.
/// Wall-normal velocity legs are always dropped (the unknowns are eliminated).
struct TransferClosure {
    Ghost velocity = Ghost::Zero;
    Ghost pressure = Ghost::Even;

    Ghost of(FieldKind k) const { return k == FieldKind::P ? pressure : velocity; }
};

/// Per-operator boundary closure used in Dirichlet mode.
struct DirichletClosure {
    Ghost velocity_laplacian = Ghost::Odd;
    Ghost velocity_mass = Ghost::Odd;
    Ghost pressure_mass = Ghost::Even;
    Ghost pressure_laplacian = Ghost::Even;
    TransferClosure transfer;
};

/// Index range of one staggered field.
struct FieldLayout {
    FieldKind kind = FieldKind::U;
    int i0 = 0, nx = 0;  // physical i = i0 .. i0 + nx - 1
    int j0 = 0, ny = 0;
    int offset = 0;      // position in the flat vector

    int size() const { return nx * ny; }
    int index(int i, int j) const { return offset + (j - j0) * nx + (i - i0); }
};

/// Flat storage [u | v | p] of one staggered state.
class StaggeredState {
public:
    StaggeredState() = default;
    StaggeredState(int n, BoundaryMode bc);

    int n() const { return n_; }
    double h() const { return 1.0 / n_; }
    BoundaryMode bc() const { return bc_; }

    const FieldLayout& layout(FieldKind k) const { return layouts_[static_cast<int>(k)]; }

    double& operator()(FieldKind k, int i, int j) { return data_[layout(k).index(i, j)]; }
    double operator()(FieldKind k, int i, int j) const { return data_[layout(k).index(i, j)]; }
    double& u(int i, int j) { return (*this)(FieldKind::U, i, j); }
    double& v(int i, int j) { return (*this)(FieldKind::V, i, j); }
    double& p(int i, int j) { return (*this)(FieldKind::P, i, j); }
    double u(int i, int j) const { return (*this)(FieldKind::U, i, j); }
    double v(int i, int j) const { return (*this)(FieldKind::V, i, j); }
    double p(int i, int j) const { return (*this)(FieldKind::P, i, j); }

    Eigen::VectorXd& data() { return data_; }
    const Eigen::VectorXd& data() const { return data_; }
    auto segment(FieldKind k) { return data_.segment(layout(k).offset, layout(k).size()); }
    auto segment(FieldKind k) const { return data_.segment(layout(k).offset, layout(k).size()); }

    int size() const { return static_cast<int>(data_.size()); }
    void set_zero() { data_.setZero(); }

    /// Mean of one field.
    double mean(FieldKind k) const;
    /// Subtract the pressure mean (Dirichlet) or all three means (periodic).
    void project_gauge();

private:
    int n_ = 0;
    BoundaryMode bc_ = BoundaryMode::Periodic;
    std::array<FieldLayout, 3> layouts_{};
    Eigen::VectorXd data_;
};

/// True for n = 3 * 3^k.
bool valid_grid_size(int n);

/// Euclidean norm over all unknowns.
double norm(const StaggeredState& s);
double dot(const StaggeredState& a, const StaggeredState& b);

/// Matrix-free Stokes operator [[A, B^T], [B, 0]] and the mass actions used
/// by the smoothers.
class SaddleSystem {
public:
    SaddleSystem(int n, BoundaryMode bc, DirichletClosure closure = {});

    int n() const { return n_; }
    double h() const { return 1.0 / n_; }
    BoundaryMode bc() const { return bc_; }
    const DirichletClosure& closure() const { return closure_; }

    StaggeredState make_state() const { return StaggeredState(n_, bc_); }

    /// out = L x.
    void apply(const StaggeredState& x, StaggeredState& out) const;
    StaggeredState apply(const StaggeredState& x) const;

    /// Velocity blocks of out = A x (p block untouched).
    void apply_A(const StaggeredState& x, StaggeredState& out) const;
    /// p block of out = B x (negative divergence of the velocity).
    void apply_B(const StaggeredState& x, StaggeredState& out) const;
    /// velocity blocks of out = B^T x (gradient of the pressure).
    void apply_Bt(const StaggeredState& x, StaggeredState& out) const;
    /// velocity blocks of out = Q x (bilinear mass, per component).
    void apply_Q(const StaggeredState& x, StaggeredState& out) const;
    /// p block of out = Q_p x.
    void apply_Qp(const StaggeredState& x, StaggeredState& out) const;
    /// p block of out = A_p x, the cell-centered five-point -Laplacian.
    void apply_Ap(const StaggeredState& x, StaggeredState& out) const;
    /// p block of out = B Q B^T x.
    void apply_schur(const StaggeredState& x, StaggeredState& out) const;

    /// r = b - L x.
    StaggeredState residual(const StaggeredState& x, const StaggeredState& b) const;

private:
    // value of field k at (i, j) with the boundary closure applied
    double fetch(const StaggeredState& x, FieldKind k, int i, int j, Ghost ghost) const;
    void apply_mass(const StaggeredState& x, StaggeredState& out, FieldKind k, Ghost g) const;

    int n_;
    BoundaryMode bc_;
    DirichletClosure closure_;
};

using StateOperator = std::function<void(const StaggeredState&, StaggeredState&)>;

/// Sparse matrix of a linear state operator, by applying it to unit vectors.
Eigen::SparseMatrix<double> assemble(const StateOperator& op, int n, BoundaryMode bc);

/// Diagonal of the Schur operator B Q B^T restricted to the pressure block.
Eigen::VectorXd schur_diagonal(const SaddleSystem& sys);

/// Sparse matrix of B Q B^T on the pressure unknowns.
Eigen::SparseMatrix<double> assemble_schur(const SaddleSystem& sys);

}  // namespace mac3
