#include "mac3/lfa_symbols.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "mac3/errors.hpp"
#include "mac3/frequency.hpp"

namespace mac3 {

namespace {

constexpr Complex kI{0.0, 1.0};

std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

// Symbol of the half-grid gradient (p -> u or p -> v). The stencil offsets
// are in half-cell units, hence the halved frequency.
Complex grad_symbol(const Stencil& s, Frequency theta, double h) {
    return symbol(s, {theta.t1 / 2.0, theta.t2 / 2.0}, h);
}

struct Pieces {
    Complex a;   // scalar -Laplacian
    Complex gx;  // gradient u <- p
    Complex gy;  // gradient v <- p
    double q;    // mass symbol (real)
};

Pieces pieces(Frequency theta, double h) {
    static const Stencil lap = stencils::laplacian_5pt();
    static const Stencil gx = stencils::grad_x_half();
    static const Stencil gy = stencils::grad_y_half();
    static const Stencil mass = stencils::mass_Q();
    return {symbol(lap, theta, h), grad_symbol(gx, theta, h), grad_symbol(gy, theta, h),
            symbol(mass, theta, h).real()};
}

Matrix3c inexact_bsr_correction(const RelaxParams& p, const Pieces& s) {
    // Rows give (delta_u, delta_v, delta_p) as combinations of (r_u, r_v, r_p).
    // q = B C^{-1} r_u - alpha r_p, with B = -grad^T, C^{-1} = Q.
    // delta_p = (omega_j / d) q, delta_u = alpha^{-1} Q (r_u - grad delta_p).
    const double jac = p.omega_j / kSchurStencilCenter;
    Eigen::RowVector3cd q_row;
    q_row << -s.gx * s.q, -s.gy * s.q, -p.alpha;
    const Eigen::RowVector3cd dp = jac * q_row;
    Matrix3c n = Matrix3c::Zero();
    n.row(2) = dp;
    Eigen::RowVector3cd e0(1.0, 0.0, 0.0), e1(0.0, 1.0, 0.0);
    n.row(0) = (s.q / p.alpha) * (e0 - s.gx * dp);
    n.row(1) = (s.q / p.alpha) * (e1 - s.gy * dp);
    return n;
}

}  // namespace

std::string_view to_string(Scheme s) {
    switch (s) {
        case Scheme::QDR: return "QDR";
        case Scheme::QBSR_EXACT: return "QBSR";
        case Scheme::QIBSR: return "QIBSR";
        case Scheme::QUZAWA: return "QUZAWA";
    }
    return "?";
}

Scheme parse_scheme(std::string_view name) {
    const std::string u = upper(name);
    if (u == "QDR" || u == "Q-DR") return Scheme::QDR;
    if (u == "QBSR" || u == "QBSR_EXACT" || u == "Q-BSR") return Scheme::QBSR_EXACT;
    if (u == "QIBSR" || u == "Q-IBSR") return Scheme::QIBSR;
    if (u == "QUZAWA" || u == "UZAWA" || u == "Q-UZAWA") return Scheme::QUZAWA;
    throw ConfigError("unknown scheme '" + std::string(name) +
                      "' (expected QDR, QBSR, QIBSR or QUZAWA)");
}

void RelaxParams::validate() const {
    if (!(omega >= 0.0) || !std::isfinite(omega)) {
        throw ConfigError("omega must be a finite non-negative number");
    }
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be positive");
    if (scheme == Scheme::QUZAWA && !(sigma > 0.0)) {
        throw ConfigError("sigma must be positive for QUZAWA");
    }
    if (scheme == Scheme::QIBSR && !(omega_j > 0.0 && omega_j < 2.0)) {
        throw ConfigError("omega_j must lie in (0, 2) for QIBSR");
    }
}

RelaxParams RelaxParams::qdr(double alpha, double omega) {
    return {Scheme::QDR, omega, alpha, 0.0, 0.0};
}
RelaxParams RelaxParams::qbsr(double alpha, double omega) {
    return {Scheme::QBSR_EXACT, omega, alpha, 0.0, 0.0};
}
RelaxParams RelaxParams::qibsr(double alpha, double omega, double omega_j) {
    return {Scheme::QIBSR, omega, alpha, 0.0, omega_j};
}
RelaxParams RelaxParams::quzawa(double alpha, double omega, double sigma) {
    return {Scheme::QUZAWA, omega, alpha, sigma, 0.0};
}

AuxSymbols aux_symbols(Frequency theta) {
    const double s1 = std::sin(theta.t1 / 2.0);
    const double s2 = std::sin(theta.t2 / 2.0);
    const double c1 = std::cos(theta.t1);
    const double c2 = std::cos(theta.t2);
    AuxSymbols a;
    a.m = s1 * s1 + s2 * s2;
    a.m_s = 9.0 / (4.0 + 2.0 * c1 + 2.0 * c2 + c1 * c2);
    a.m_r = 4.0 * a.m / a.m_s;
    return a;
}

BlockSymbol stokes_symbol(Frequency theta, double h) {
    const Pieces s = pieces(theta, h);
    Matrix3c m;
    m << s.a, 0.0, s.gx,
         0.0, s.a, s.gy,
         -s.gx, -s.gy, 0.0;
    return {m, theta, h};
}

BlockSymbol dist_K_symbol(Frequency theta, double h) {
    const Pieces s = pieces(theta, h);
    Matrix3c m;
    m << s.a, 0.0, 0.0,
         0.0, s.a, 0.0,
         -s.gx, -s.gy, s.a;
    return {m, theta, h};
}

BlockSymbol dist_P_symbol(Frequency theta, double h) {
    const Pieces s = pieces(theta, h);
    Matrix3c m;
    m << 1.0, 0.0, s.gx,
         0.0, 1.0, s.gy,
         0.0, 0.0, -s.a;
    return {m, theta, h};
}

BlockSymbol smoother_symbol(const RelaxParams& p, Frequency theta, double h) {
    const Pieces s = pieces(theta, h);
    const Complex c = p.alpha / s.q;  // alpha C, with C^{-1} = Q
    Matrix3c m = Matrix3c::Zero();
    switch (p.scheme) {
        case Scheme::QDR:
            m << c, 0.0, 0.0,
                 0.0, c, 0.0,
                 -s.gx, -s.gy, c;  // alpha E with E = Q_p^{-1}
            break;
        case Scheme::QBSR_EXACT:
            m << c, 0.0, s.gx,
                 0.0, c, s.gy,
                 -s.gx, -s.gy, 0.0;
            break;
        case Scheme::QUZAWA:
            m << c, 0.0, 0.0,
                 0.0, c, 0.0,
                 -s.gx, -s.gy, -1.0 / p.sigma;
            break;
        case Scheme::QIBSR: {
            Eigen::FullPivLU<Matrix3c> lu(inexact_bsr_correction(p, s));
            if (!lu.isInvertible()) {
                throw NumericalError("QIBSR smoother symbol is singular at this frequency");
            }
            m = lu.inverse();
            break;
        }
    }
    return {m, theta, h};
}

std::optional<Matrix3c> correction_symbol(const RelaxParams& p, Frequency theta, double h) {
    if (p.scheme == Scheme::QIBSR) return inexact_bsr_correction(p, pieces(theta, h));
    Eigen::FullPivLU<Matrix3c> lu(smoother_symbol(p, theta, h).m);
    if (!lu.isInvertible()) return std::nullopt;
    Matrix3c inv = lu.inverse();
    if (p.scheme == Scheme::QDR) inv = dist_P_symbol(theta, h).m * inv;
    return inv;
}

std::optional<BlockSymbol> relax_error_symbol(const RelaxParams& p, Frequency theta, double h) {
    const BlockSymbol l = stokes_symbol(theta, h);
    if (p.omega == 0.0 || l.m.isZero(0.0)) return BlockSymbol{Matrix3c::Identity(), theta, h};
    auto corr = correction_symbol(p, theta, h);
    if (!corr) return std::nullopt;
    return BlockSymbol{Matrix3c::Identity() - p.omega * (*corr) * l.m, theta, h};
}

SmoothingSweep smoothing_sweep(const RelaxParams& p, int n, double h) {
    p.validate();
    SmoothingSweep out;
    for (const Frequency& theta : high_freq_samples(n)) {
        auto s = relax_error_symbol(p, theta, h);
        if (!s) {
            ++out.skipped;
            continue;
        }
        ++out.evaluated;
        const double rho = spectral_radius(s->m);
        if (rho > out.factor) {
            out.factor = rho;
            out.argmax = theta;
        }
    }
    return out;
}

double smoothing_factor(const RelaxParams& p, int n, double h) {
    return smoothing_sweep(p, n, h).factor;
}

}  // namespace mac3
