/// @file lfa_symbols.hpp
/// @brief 3x3 Fourier symbols of the staggered Stokes operator and of the
///        mass-based block smoothers, plus sampled smoothing factors.
///
/// Fourier modes are evaluated at the physical location of each unknown, so
/// gradient entries carry sin(theta/2). Unknown ordering is (u, v, p).

#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "mac3/linalg.hpp"
#include "mac3/stencil.hpp"

namespace mac3 {

enum class Scheme { QDR, QBSR_EXACT, QIBSR, QUZAWA };

std::string_view to_string(Scheme s);
/// Accepts "QDR", "QBSR" / "QBSR_EXACT", "QIBSR", "QUZAWA" (case-insensitive).
Scheme parse_scheme(std::string_view name);

/// Relaxation parameters. omega is the outer damping, alpha scales C,
/// sigma is the Uzawa pressure weight and omega_j the inner Jacobi weight.
struct RelaxParams {
    Scheme scheme = Scheme::QDR;
    double omega = 1.0;
    double alpha = 1.0;
    double sigma = 0.0;
    double omega_j = 0.0;

    /// Throws ConfigError when an invariant is violated.
    void validate() const;

    static RelaxParams qdr(double alpha, double omega);
    static RelaxParams qbsr(double alpha, double omega);
    static RelaxParams qibsr(double alpha, double omega, double omega_j);
    static RelaxParams quzawa(double alpha, double omega, double sigma);
};

/// m = sin^2(t1/2) + sin^2(t2/2), m_s = (Q/h^2)^{-1}, m_r = 4 m / m_s.
struct AuxSymbols {
    double m = 0.0;
    double m_s = 0.0;
    double m_r = 0.0;
};

AuxSymbols aux_symbols(Frequency theta);

struct BlockSymbol {
    Matrix3c m;
    Frequency theta;
    double h = 1.0;
};

/// Diagonal entry of the Schur stencil B Q B^T on an unbounded grid.
inline constexpr double kSchurStencilCenter = 4.0 / 3.0;

BlockSymbol stokes_symbol(Frequency theta, double h);
BlockSymbol dist_K_symbol(Frequency theta, double h);
BlockSymbol dist_P_symbol(Frequency theta, double h);

/// Symbol of the smoother M (M_D, M_B, M_U, or the effective M for the
/// inexact Braess-Sarazin sweep). Throws NumericalError if the effective M
/// of QIBSR is requested where the approximate inverse is singular.
BlockSymbol smoother_symbol(const RelaxParams& p, Frequency theta, double h);

/// The correction operator actually applied to the residual:
/// P M_D^{-1} for QDR, M^{-1} otherwise. nullopt where M is singular.
std::optional<Matrix3c> correction_symbol(const RelaxParams& p, Frequency theta, double h);

/// S = I - omega * correction * L. nullopt marks a skipped frequency.
std::optional<BlockSymbol> relax_error_symbol(const RelaxParams& p, Frequency theta, double h);

struct SmoothingSweep {
    double factor = 0.0;
    Frequency argmax;
    int evaluated = 0;
    int skipped = 0;
};

/// max over HIGH lattice samples of rho(S(theta)).
SmoothingSweep smoothing_sweep(const RelaxParams& p, int n, double h = 1.0);
double smoothing_factor(const RelaxParams& p, int n, double h = 1.0);

}  // namespace mac3
