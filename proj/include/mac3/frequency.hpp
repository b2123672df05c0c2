/// @file frequency.hpp
/// @brief Frequency classification and sampling for coarsening by three.
///
/// LOW frequencies are [-pi/3, pi/3)^2, HIGH is the rest of [-pi, pi)^2.
/// Sample lattices are indexed by integers so that the LOW/HIGH split is
/// exact and never depends on floating-point rounding at -pi/3.
///
/// The LFA sample lattice is theta_k = -pi/2 + 2 pi k / n per component,
/// anchored at the corner of the fundamental domain [-pi/2, 3pi/2)^2 and then
/// wrapped into [-pi, pi). For n not divisible by 4 it contains neither
/// theta = 0 nor any frequency where the 3h coarse symbol is singular.

#pragma once

#include <vector>

#include "mac3/stencil.hpp"

namespace mac3 {

enum class FrequencyClass { Low, High };

/// Wraps both components into [-pi, pi).
Frequency canonicalize(Frequency theta);

/// LOW iff both canonical components lie in [-pi/3, pi/3).
FrequencyClass classify(Frequency theta);

/// A sample theta = pi * (m1, m2) / den.
struct LatticePoint {
    int m1 = 0;
    int m2 = 0;
    int den = 1;
    Frequency theta() const;
    bool is_low() const;
};

/// The n x n sample lattice, canonicalized, all classes.
/// Requires n divisible by 3 and n >= 9.
std::vector<LatticePoint> lfa_samples(int n);

/// HIGH members of lfa_samples(n).
std::vector<Frequency> high_freq_samples(int n);

/// LOW members of lfa_samples(n).
std::vector<Frequency> low_freq_samples(int n);

/// Unshifted lattice theta = 2 pi k / n, k in [-n/2, n/2), LOW members only.
/// This matches the Fourier modes of an n x n periodic grid.
std::vector<Frequency> periodic_low_lattice(int n);

}  // namespace mac3
