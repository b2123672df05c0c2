/// @file lfa_twogrid.hpp
/// @brief Two-grid local Fourier analysis for coarsening by three.
///
/// Each LOW base frequency couples to nine 3h-harmonics theta + (2pi/3)(i, j),
/// i, j in {-1, 0, 1}, stored in lexicographic (i, j) order. Expanded objects
/// are 27x27 with harmonic-major, field-minor (u, v, p) ordering.
///
/// Because modes are evaluated at the physical location of each staggered
/// unknown, the nine harmonics alias onto the same coarse mode only up to a
/// field-dependent sign: (-1)^j for u, (-1)^i for v and (-1)^(i+j) for p.
/// Those signs enter both transfer symbols.

#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string_view>

#include "mac3/lfa_symbols.hpp"
#include "mac3/linalg.hpp"
#include "mac3/stencil.hpp"

namespace mac3 {

inline constexpr int kHarmonics = 9;
inline constexpr int kExpandedSize = 27;

enum class Restriction { R1, R9, R9B, P25T };

std::string_view to_string(Restriction r);
/// Accepts "R1", "R9", "R9B", "P25T" (also "P25T/9").
Restriction parse_restriction(std::string_view name);

/// Prolongation is always P25; only the restriction varies.
struct TransferPair {
    Restriction restriction = Restriction::P25T;

    Stencil prolongation_stencil() const;
    Stencil restriction_stencil() const;
    std::string label() const;
};

struct HarmonicSet {
    Frequency base;
    std::array<Frequency, kHarmonics> theta;
    std::array<Offset, kHarmonics> shift;  // (i, j)

    /// Index of the unshifted member.
    static constexpr int kBaseIndex = 4;
};

HarmonicSet harmonics(Frequency base);

/// Sign relating harmonic `shift` of field f (0 = u, 1 = v, 2 = p) to the
/// common coarse mode.
double alias_sign(int field, Offset shift);

using SymbolFunction = std::function<Matrix3c(Frequency)>;

/// Block-diagonal placement of nine 3x3 symbols.
CMatrix expanded_fine_symbol(const SymbolFunction& op, const HarmonicSet& hs);

/// Direct rediscretization on the coarse mesh: stokes_symbol(3 theta, 3h).
BlockSymbol coarse_symbol(Frequency base, double h);

struct TransferSymbols {
    CMatrix prolongation;  // 27 x 3
    CMatrix restriction;   // 3 x 27
};

TransferSymbols transfer_symbols(const TransferPair& tp, const HarmonicSet& hs);

struct TwoGridOptions {
    /// When the coarse symbol vanishes identically (3 theta = 0 on a periodic
    /// lattice), use its pseudo-inverse (no coarse correction) instead of
    /// skipping the frequency.
    bool pseudo_inverse_at_zero = false;
};

/// S^nu2 (I - P L_H^{-1} R L) S^nu1; nullopt when the sample must be skipped.
std::optional<CMatrix> two_grid_symbol(Frequency base, int nu1, int nu2, const RelaxParams& p,
                                       const TransferPair& tp, double h,
                                       TwoGridOptions opts = {});

struct TwoGridSweep {
    double factor = 0.0;
    Frequency argmax;
    int evaluated = 0;
    int skipped = 0;
};

/// max over LOW lattice samples of rho(E(theta)).
TwoGridSweep two_grid_sweep(int nu1, int nu2, const RelaxParams& p, const TransferPair& tp,
                            int n, double h);
double two_grid_convergence_factor(int nu1, int nu2, const RelaxParams& p,
                                   const TransferPair& tp, int n, double h);

/// The same quantity on the Fourier lattice of an n x n periodic grid
/// (theta = 2 pi k / n, h = 1/n). At theta = 0 the coarse correction uses the
/// pseudo-inverse and the three constant modes are excluded.
double periodic_lattice_factor(int nu1, int nu2, const RelaxParams& p, const TransferPair& tp,
                               int n);

}  // namespace mac3
