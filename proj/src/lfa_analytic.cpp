#include "mac3/lfa_analytic.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mac3 {

Rational::Rational(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::domain_error("Rational: zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    const std::int64_t g = std::gcd(n, d);
    num = g == 0 ? 0 : n / g;
    den = g == 0 ? 1 : d / g;
}

Rational operator+(Rational a, Rational b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
Rational operator-(Rational a, Rational b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
Rational operator*(Rational a, Rational b) { return {a.num * b.num, a.den * b.den}; }
Rational operator/(Rational a, Rational b) { return {a.num * b.den, a.den * b.num}; }

std::string to_string(const Rational& r) {
    if (r.den == 1) return std::to_string(r.num);
    return std::to_string(r.num) + "/" + std::to_string(r.den);
}

double ExactValue::value() const { return is_sqrt ? std::sqrt(r.value()) : r.value(); }

std::string ExactValue::to_string() const {
    return is_sqrt ? "sqrt(" + mac3::to_string(r) + ")" : mac3::to_string(r);
}

double g(double x, double y) { return (2.0 - x - y) * (4.0 + 2.0 * x + 2.0 * y + x * y); }

bool in_high_region(double x, double y) { return x <= 0.5 || y <= 0.5; }

GExtrema g_extrema() { return {Rational(15, 4), Rational(8, 1), {1.0, 0.5}, {0.0, 0.0}}; }

namespace {

// Q A_s = (2/9) g, so the HIGH range of m_r is (2/9)[15/4, 8] = [5/6, 16/9].
std::pair<Rational, Rational> mr_range() {
    const GExtrema e = g_extrema();
    return {Rational(2, 9) * e.min, Rational(2, 9) * e.max};
}

// Equioscillation of |1 - w m| at both ends of [lo, hi].
OptimalResult equioscillation(const std::string& name) {
    const auto [lo, hi] = mr_range();
    const Rational w = Rational(2, 1) / (lo + hi);
    OptimalResult r;
    r.scheme = name;
    r.omega_over_alpha = w;
    r.mu_opt = {Rational(1, 1) - lo * w, false};
    r.mr_bounds = {lo, hi};
    return r;
}

}  // namespace

OptimalResult optimal_scalar() { return equioscillation("scalar"); }

OptimalResult optimal_qdr() { return equioscillation("QDR"); }

OptimalResult optimal_qbsr() {
    OptimalResult r = equioscillation("QBSR");
    r.omega_interval = {Rational(30, 47).value(), Rational(64, 47).value()};
    return r;
}

OptimalResult optimal_uzawa() {
    OptimalResult r;
    r.scheme = "QUZAWA";
    r.mu_opt = {Rational(17, 47), true};
    r.mr_bounds = mr_range();
    r.omega_interval = uzawa_omega_interval();
    r.omega_u = Rational(1, 1);
    r.alpha_u = Rational(376, 1) / (Rational(9, 1) * Rational(47 - 15, 1));
    r.sigma = Rational(15, 47 - 15);
    return r;
}

double uzawa_m2(double alpha_u, double sigma) {
    return 4.0 * alpha_u * sigma / ((1.0 + sigma) * (1.0 + sigma));
}

UzawaSpectrum uzawa_spectrum(double m_r, double alpha_u, double sigma) {
    if (!(alpha_u > 0.0) || !(sigma > 0.0)) {
        throw std::domain_error("uzawa_spectrum: alpha_u and sigma must be positive");
    }
    constexpr double kTol = 1e-12;
    if (m_r < 5.0 / 6.0 - kTol || m_r > 16.0 / 9.0 + kTol) {
        throw std::domain_error("uzawa_spectrum: m_r must lie in [5/6, 16/9]");
    }
    UzawaSpectrum s;
    s.m2 = uzawa_m2(alpha_u, sigma);
    s.lambda3 = m_r / alpha_u;
    const double b = (1.0 + sigma) * m_r / alpha_u;  // sum of roots
    const double c = m_r * sigma / alpha_u;          // product of roots
    s.discriminant = (m_r * (1.0 + sigma) * (1.0 + sigma) / (alpha_u * alpha_u)) * (m_r - s.m2);
    if (s.discriminant >= 0.0) {
        // Larger root first, the other from the product.
        const double big = 0.5 * (b + std::sqrt(s.discriminant));
        s.lambda1 = big;
        s.lambda2 = c / big;
    } else {
        const double im = 0.5 * std::sqrt(-s.discriminant);
        s.lambda1 = {0.5 * b, im};
        s.lambda2 = {0.5 * b, -im};
    }
    return s;
}

double uzawa_mu_C(double omega_u, double alpha_u, double sigma, double gamma) {
    if (!(omega_u > 0.0) || !(alpha_u > 0.0) || !(sigma > 0.0)) {
        throw std::domain_error("uzawa_mu_C: parameters must be positive");
    }
    if (gamma < 5.0 / 6.0 - 1e-14) {
        throw std::domain_error("uzawa_mu_C: complex branch requires gamma >= 5/6");
    }
    const double rad = 1.0 + 5.0 * omega_u * (omega_u * sigma - sigma - 1.0) / (6.0 * alpha_u);
    if (rad < 0.0) throw std::domain_error("uzawa_mu_C: negative radicand");
    return std::sqrt(rad);
}

double uzawa_mu_R(double omega_u, double alpha_u, double sigma, double m2) {
    if (!(omega_u > 0.0) || !(alpha_u > 0.0) || !(sigma > 0.0)) {
        throw std::domain_error("uzawa_mu_R: parameters must be positive");
    }
    const double rad = 1.0 - 9.0 * m2 / 16.0;
    if (rad < 0.0) {
        throw std::domain_error("uzawa_mu_R: m2 > 16/9, only the complex branch applies");
    }
    const double chi1 = (8.0 / 9.0) * (1.0 + std::sqrt(rad));
    const double chi2 = (8.0 / 9.0) * (1.0 - std::sqrt(rad));
    const double a = (1.0 + sigma) * omega_u / alpha_u;
    return a >= 9.0 / 8.0 ? a * chi1 - 1.0 : 1.0 - a * chi2;
}

std::pair<double, double> uzawa_omega_interval() {
    const double mu = std::sqrt(17.0 / 47.0);
    return {225.0 / (47.0 * (16.0 * mu - 1.0)), 30.0 / (47.0 * (1.0 - mu))};
}

UzawaParams uzawa_params_from_omega(double omega_u) {
    const auto [lo, hi] = uzawa_omega_interval();
    if (!(omega_u >= lo && omega_u <= hi)) {
        std::ostringstream msg;
        msg << "omega_U = " << omega_u << " outside feasible interval [" << lo << ", " << hi << "]";
        throw std::domain_error(msg.str());
    }
    const double d = 47.0 * omega_u - 15.0;
    return {376.0 * omega_u * omega_u / (9.0 * d), 15.0 / d};
}

double cost_ratio(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("cost_ratio: eps must lie in (0, 1)");
    const double t1 = std::log(eps) / std::log(1.0 / 3.0);
    const double t2 = (1.0 / 3.0) * std::log(eps) / std::log(17.0 / 47.0);
    return t1 / t2;
}

}  // namespace mac3
