#include "mac3/lfa_twogrid.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cctype>
#include <numbers>
#include <string>

#include "mac3/errors.hpp"
#include "mac3/frequency.hpp"

namespace mac3 {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

std::string_view to_string(Restriction r) {
    switch (r) {
        case Restriction::R1: return "R1";
        case Restriction::R9: return "R9";
        case Restriction::R9B: return "R9B";
        case Restriction::P25T: return "P25T";
    }
    return "?";
}

Restriction parse_restriction(std::string_view name) {
    std::string u(name);
    std::transform(u.begin(), u.end(), u.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (u == "R1") return Restriction::R1;
    if (u == "R9") return Restriction::R9;
    if (u == "R9B") return Restriction::R9B;
    if (u == "P25T" || u == "P25T/9" || u == "RP25T") return Restriction::P25T;
    throw ConfigError("unknown transfer '" + std::string(name) +
                      "' (expected R1, R9, R9B or P25T)");
}

Stencil TransferPair::prolongation_stencil() const { return stencils::p25(); }

Stencil TransferPair::restriction_stencil() const {
    switch (restriction) {
        case Restriction::R1: return stencils::r1();
        case Restriction::R9: return stencils::r9();
        case Restriction::R9B: return stencils::r9b();
        case Restriction::P25T: return stencils::rP25T();
    }
    throw ConfigError("unknown restriction tag");
}

std::string TransferPair::label() const {
    return "P25/" + std::string(to_string(restriction));
}

HarmonicSet harmonics(Frequency base) {
    HarmonicSet hs;
    hs.base = base;
    int k = 0;
    for (int i = -1; i <= 1; ++i) {
        for (int j = -1; j <= 1; ++j) {
            hs.shift[k] = {i, j};
            hs.theta[k] = {base.t1 + 2.0 * kPi * i / 3.0, base.t2 + 2.0 * kPi * j / 3.0};
            ++k;
        }
    }
    return hs;
}

double alias_sign(int field, Offset shift) {
    int parity = 0;
    switch (field) {
        case 0: parity = shift.k2; break;
        case 1: parity = shift.k1; break;
        default: parity = shift.k1 + shift.k2; break;
    }
    return (parity % 2 == 0) ? 1.0 : -1.0;
}

CMatrix expanded_fine_symbol(const SymbolFunction& op, const HarmonicSet& hs) {
    CMatrix out = CMatrix::Zero(kExpandedSize, kExpandedSize);
    for (int a = 0; a < kHarmonics; ++a) {
        out.block<3, 3>(3 * a, 3 * a) = op(hs.theta[a]);
    }
    return out;
}

BlockSymbol coarse_symbol(Frequency base, double h) {
    return stokes_symbol({3.0 * base.t1, 3.0 * base.t2}, 3.0 * h);
}

TransferSymbols transfer_symbols(const TransferPair& tp, const HarmonicSet& hs) {
    const Stencil pro = tp.prolongation_stencil();
    const Stencil res = tp.restriction_stencil();
    TransferSymbols t{CMatrix::Zero(kExpandedSize, 3), CMatrix::Zero(3, kExpandedSize)};
    for (int a = 0; a < kHarmonics; ++a) {
        const Complex ps = symbol(pro, hs.theta[a], 1.0) / 9.0;
        const Complex rs = symbol(res, hs.theta[a], 1.0);
        for (int f = 0; f < 3; ++f) {
            const double s = alias_sign(f, hs.shift[a]);
            t.prolongation(3 * a + f, f) = s * ps;
            t.restriction(f, 3 * a + f) = s * rs;
        }
    }
    return t;
}

std::optional<CMatrix> two_grid_symbol(Frequency base, int nu1, int nu2, const RelaxParams& p,
                                       const TransferPair& tp, double h, TwoGridOptions opts) {
    const HarmonicSet hs = harmonics(base);

    CMatrix smoother = CMatrix::Zero(kExpandedSize, kExpandedSize);
    for (int a = 0; a < kHarmonics; ++a) {
        auto s = relax_error_symbol(p, hs.theta[a], h);
        if (!s) return std::nullopt;
        smoother.block<3, 3>(3 * a, 3 * a) = s->m;
    }

    const CMatrix fine =
        expanded_fine_symbol([h](Frequency t) { return stokes_symbol(t, h).m; }, hs);
    const Matrix3c coarse = coarse_symbol(base, h).m;

    CMatrix cgc = CMatrix::Identity(kExpandedSize, kExpandedSize);
    if (coarse.isZero(0.0) && opts.pseudo_inverse_at_zero) {
        // pseudo-inverse of the zero matrix: no correction
    } else {
        Eigen::FullPivLU<Matrix3c> lu(coarse);
        if (!lu.isInvertible()) return std::nullopt;
        const TransferSymbols t = transfer_symbols(tp, hs);
        cgc -= t.prolongation * lu.inverse() * t.restriction * fine;
    }
    return matrix_power(smoother, nu2) * cgc * matrix_power(smoother, nu1);
}

TwoGridSweep two_grid_sweep(int nu1, int nu2, const RelaxParams& p, const TransferPair& tp,
                            int n, double h) {
    p.validate();
    if (nu1 < 0 || nu2 < 0) throw ConfigError("smoothing step counts must be non-negative");
    TwoGridSweep out;
    for (const Frequency& theta : low_freq_samples(n)) {
        auto e = two_grid_symbol(theta, nu1, nu2, p, tp, h);
        if (!e) {
            ++out.skipped;
            continue;
        }
        ++out.evaluated;
        const double rho = spectral_radius(*e);
        if (rho > out.factor) {
            out.factor = rho;
            out.argmax = theta;
        }
    }
    return out;
}

double two_grid_convergence_factor(int nu1, int nu2, const RelaxParams& p,
                                   const TransferPair& tp, int n, double h) {
    return two_grid_sweep(nu1, nu2, p, tp, n, h).factor;
}

double periodic_lattice_factor(int nu1, int nu2, const RelaxParams& p, const TransferPair& tp,
                               int n) {
    p.validate();
    const double h = 1.0 / n;
    double rho = 0.0;
    for (const Frequency& theta : periodic_low_lattice(n)) {
        auto e = two_grid_symbol(theta, nu1, nu2, p, tp, h, {.pseudo_inverse_at_zero = true});
        if (!e) throw NumericalError("periodic_lattice_factor: singular symbol on lattice");
        if (theta.t1 == 0.0 && theta.t2 == 0.0) {
            // constants are invariant under every cycle; drop them
            const int b = 3 * HarmonicSet::kBaseIndex;
            e->middleRows(b, 3).setZero();
            e->middleCols(b, 3).setZero();
        }
        rho = std::max(rho, spectral_radius(*e));
    }
    return rho;
}

}  // namespace mac3
