/// @file lfa_analytic.hpp
/// @brief Closed-form optimal smoothing results for mass-based relaxation
///        with coarsening by three.
///
/// Exact rationals are carried as reduced integer pairs and converted to
/// double only at the boundary.

#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

namespace mac3 {

/// Reduced fraction with positive denominator.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    constexpr Rational() = default;
    Rational(std::int64_t n, std::int64_t d);

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Rational&) const = default;

    friend Rational operator+(Rational a, Rational b);
    friend Rational operator-(Rational a, Rational b);
    friend Rational operator*(Rational a, Rational b);
    friend Rational operator/(Rational a, Rational b);
};

std::string to_string(const Rational& r);

/// A value that is either a rational or the square root of one.
struct ExactValue {
    Rational r;
    bool is_sqrt = false;
    double value() const;
    std::string to_string() const;
};

// --- scalar mass-Laplacian analysis ---------------------------------------

/// g(x, y) = (2 - x - y)(4 + 2x + 2y + xy), with x = cos t1, y = cos t2.
double g(double x, double y);

/// True iff (x, y) is the image of a HIGH frequency: x <= 1/2 or y <= 1/2.
bool in_high_region(double x, double y);

struct GExtrema {
    Rational min;
    Rational max;
    std::pair<double, double> argmin;
    std::pair<double, double> argmax;
};

/// min 15/4 at (1, 1/2), max 8 at (0, 0) over the HIGH region.
GExtrema g_extrema();

struct OptimalResult {
    std::string scheme;
    /// Optimal omega / alpha (QDR, QBSR, scalar); empty for Uzawa.
    std::optional<Rational> omega_over_alpha;
    ExactValue mu_opt;
    /// Range of the symbol Q A_s (= m_r) over HIGH frequencies.
    std::pair<Rational, Rational> mr_bounds;
    /// Admissible omega interval (QBSR: omega_B; Uzawa: omega_U).
    std::optional<std::pair<double, double>> omega_interval;
    /// Uzawa representative point (omega_U, alpha_U, sigma).
    std::optional<Rational> omega_u, alpha_u, sigma;

    double mu() const { return mu_opt.value(); }
};

OptimalResult optimal_scalar();
OptimalResult optimal_qdr();
OptimalResult optimal_qbsr();
OptimalResult optimal_uzawa();

// --- Uzawa machinery ------------------------------------------------------

struct UzawaSpectrum {
    std::complex<double> lambda1;
    std::complex<double> lambda2;
    double lambda3 = 0.0;
    double discriminant = 0.0;
    double m2 = 0.0;
};

/// Roots of (l - m_r/a)(l^2 - (1+s) m_r/a l + m_r s/a).
/// Requires alpha_u > 0, sigma > 0 and m_r in [5/6, 16/9].
UzawaSpectrum uzawa_spectrum(double m_r, double alpha_u, double sigma);

/// m2 = 4 alpha sigma / (1 + sigma)^2.
double uzawa_m2(double alpha_u, double sigma);

/// Complex-branch factor Psi(5/6); gamma = min(m2, 16/9) must be >= 5/6.
double uzawa_mu_C(double omega_u, double alpha_u, double sigma, double gamma);

/// Real-branch factor over m_r in [gamma, 16/9]; requires m2 <= 16/9.
double uzawa_mu_R(double omega_u, double alpha_u, double sigma, double m2);

/// Feasible omega_U interval for the optimal family.
std::pair<double, double> uzawa_omega_interval();

struct UzawaParams {
    double alpha_u = 0.0;
    double sigma = 0.0;
};

/// alpha_U = 376 w^2 / (9 (47 w - 15)), sigma = 15 / (47 w - 15).
/// Throws std::domain_error outside uzawa_omega_interval().
UzawaParams uzawa_params_from_omega(double omega_u);

// --- cost model -----------------------------------------------------------

/// T1/T2 with T1 = W log_{1/3} eps, T2 = (W/3) log_{17/47} eps.
double cost_ratio(double eps = 1e-10);

}  // namespace mac3
