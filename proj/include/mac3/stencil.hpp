/// @file stencil.hpp
/// @brief Constant-coefficient 2D stencils and their Fourier symbols.
///
/// A stencil stores dimensionless coefficients together with an integer mesh
/// power p, so that the physical operator coefficient at offset k is
/// s_k * h^p. The same table therefore serves every grid level.

#pragma once

#include <complex>
#include <map>
#include <string_view>
#include <utility>

namespace mac3 {

using Complex = std::complex<double>;

/// Integer stencil offset (k1 along x, k2 along y).
struct Offset {
    int k1 = 0;
    int k2 = 0;
    auto operator<=>(const Offset&) const = default;
};

/// Fourier frequency pair in radians.
struct Frequency {
    double t1 = 0.0;
    double t2 = 0.0;
};

class Stencil {
public:
    Stencil() = default;
    Stencil(std::map<Offset, double> entries, int h_power);

    const std::map<Offset, double>& entries() const { return entries_; }
    int h_power() const { return h_power_; }

    /// Coefficient at an offset (zero outside the support).
    double at(Offset k) const;
    double at(int k1, int k2) const { return at(Offset{k1, k2}); }

    /// Sum of all coefficients (the symbol at theta = 0 without scaling).
    double sum() const;

    /// Radius of the support in the max norm.
    int radius() const;

    bool is_symmetric(double tol = 0.0) const;

    Stencil transposed() const;
    Stencil scaled(double factor) const;

private:
    std::map<Offset, double> entries_;
    int h_power_ = 0;
};

/// h^p * sum_k s_k exp(i theta . k).
Complex symbol(const Stencil& s, Frequency theta, double h);

namespace stencils {

/// Five-point -Laplacian, (1/h^2)[-1; -1 4 -1; -1].
Stencil laplacian_5pt();
/// Half-grid x-difference (1/h)[-1 0 1].
Stencil grad_x_half();
/// Half-grid y-difference (1/h)[1; 0; -1] (top row is +1).
Stencil grad_y_half();
/// Bilinear mass stencil (h^2/36)[1 4 1; 4 16 4; 1 4 1].
Stencil mass_Q();
/// Pressure mass stencil; identical coefficients to mass_Q.
Stencil mass_Qp();
/// 5x5 prolongation (1/9) outer([1 2 3 2 1]).
Stencil p25();
/// Injection [1].
Stencil r1();
/// (1/9) ones(3x3).
Stencil r9();
/// (1/16)[1 2 1; 2 4 2; 1 2 1].
Stencil r9b();
/// P25^T / 9.
Stencil rP25T();

}  // namespace stencils

}  // namespace mac3
