#include "doctest.h"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "mac3/errors.hpp"
#include "mac3/frequency.hpp"
#include "mac3/lfa_analytic.hpp"
#include "mac3/lfa_symbols.hpp"
#include "mac3/linalg.hpp"

using namespace mac3;
using std::numbers::pi;

namespace {

const Complex I{0.0, 1.0};

std::vector<Complex> sorted(std::vector<Complex> v) {
    std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return v;
}

std::vector<Complex> eig(const Matrix3c& m) {
    const CVector e = eigenvalues(m);
    return {e.data(), e.data() + e.size()};
}

// Characteristic polynomial by Faddeev-LeVerrier, roots by Durand-Kerner.
std::vector<Complex> charpoly_roots(const CMatrix& a) {
    const int n = static_cast<int>(a.rows());
    std::vector<Complex> c(n + 1);
    c[n] = 1.0;
    CMatrix m = CMatrix::Zero(n, n);
    for (int k = 1; k <= n; ++k) {
        m = a * m + c[n - k + 1] * CMatrix::Identity(n, n);
        c[n - k] = -(a * m).trace() / static_cast<double>(k);
    }
    std::vector<Complex> z(n);
    for (int i = 0; i < n; ++i) z[i] = std::pow(Complex(0.4, 0.9), i);
    for (int it = 0; it < 2000; ++it) {
        for (int i = 0; i < n; ++i) {
            Complex p = c[n];
            for (int k = n - 1; k >= 0; --k) p = p * z[i] + c[k];
            Complex d = 1.0;
            for (int j = 0; j < n; ++j) {
                if (j != i) d *= z[i] - z[j];
            }
            z[i] -= p / d;
        }
    }
    return z;
}

// Coefficients (c0, c1, c2) of det(lambda I - m) = lambda^3 + c2 lambda^2 + c1 lambda + c0.
// Repeated eigenvalues are ill-conditioned, these coefficients are not.
Eigen::Vector3cd charpoly3(const Matrix3c& m) {
    const Complex minors = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) -
                           m(0, 2) * m(2, 0) + m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
    return {-m.determinant(), minors, -m.trace()};
}

Eigen::Vector3cd charpoly_from_roots(Complex a, Complex b, Complex c) {
    return {-a * b * c, a * b + a * c + b * c, -(a + b + c)};
}

}  // namespace

TEST_CASE("Stokes symbol entries") {
    const Matrix3c l = stokes_symbol({pi / 2, pi / 2}, 1.0).m;
    CHECK(std::abs(l(0, 0) - 4.0) < 1e-14);
    CHECK(std::abs(l(1, 1) - 4.0) < 1e-14);
    CHECK(std::abs(l(0, 2) - I * std::sqrt(2.0)) < 1e-14);
    CHECK(std::abs(l(2, 0) + I * std::sqrt(2.0)) < 1e-14);
    CHECK(std::abs(l(2, 2)) == 0.0);
    CHECK(stokes_symbol({0, 0}, 0.1).m.isZero(1e-12));
    CHECK(std::abs(stokes_symbol({pi, 0}, 1.0).m.determinant()) > 1.0);

    // hand formula at a generic point
    const double h = 1.0 / 27, t1 = 0.7, t2 = -2.1;
    const double m = std::pow(std::sin(t1 / 2), 2) + std::pow(std::sin(t2 / 2), 2);
    const Matrix3c g = stokes_symbol({t1, t2}, h).m;
    CHECK(std::abs(g(0, 0) - 4 * m / (h * h)) < 1e-9);
    CHECK(std::abs(g(1, 2) - I * 2.0 * std::sin(t2 / 2) / h) < 1e-10);
}

TEST_CASE("distributive transform: K = L P") {
    for (Frequency t : {Frequency{pi / 3, pi / 5}, Frequency{-2.0, 0.4}, Frequency{pi, pi}}) {
        const double h = 1.0 / 81;
        const Matrix3c k = dist_K_symbol(t, h).m;
        const Matrix3c lp = stokes_symbol(t, h).m * dist_P_symbol(t, h).m;
        CHECK((k - lp).cwiseAbs().maxCoeff() < 1e-12 * (1 + k.cwiseAbs().maxCoeff()));
    }
    CHECK(dist_K_symbol({0, 0}, 1.0).m.isZero(0.0));
    CHECK(std::abs(dist_K_symbol({pi, pi}, 1.0).m(0, 0) - 8.0) < 1e-14);
    CHECK(std::abs(dist_K_symbol({pi, pi}, 1.0).m(2, 2) - 8.0) < 1e-14);
}

TEST_CASE("smoother symbols") {
    const Matrix3c mb = smoother_symbol(RelaxParams::qbsr(1.0, 1.0), {pi / 2, pi / 2}, 1.0).m;
    CHECK(std::abs(mb(0, 0) - 9.0 / 4.0) < 1e-14);
    CHECK(std::abs(mb(1, 1) - 9.0 / 4.0) < 1e-14);

    const double sigma = 15.0 / 32.0;
    const Matrix3c mu = smoother_symbol(RelaxParams::quzawa(1.3, 1.0, sigma), {0.3, 1.2}, 0.1).m;
    CHECK(std::abs(mu(2, 2) + 1.0 / sigma) < 1e-14);

    const Matrix3c md = smoother_symbol(RelaxParams::qdr(1.0, 0.5), {0.3, 1.2}, 0.1).m;
    for (auto [r, c] : {std::pair{0, 1}, {0, 2}, {1, 0}, {1, 2}}) CHECK(md(r, c) == Complex(0.0));

    // inexact BSR: the effective M inverts the applied correction
    const RelaxParams ib = RelaxParams::qibsr(47.0 / 36, 1.0, 0.9);
    const Matrix3c mi = smoother_symbol(ib, {1.0, -2.0}, 1.0 / 9).m;
    const Matrix3c ci = *correction_symbol(ib, {1.0, -2.0}, 1.0 / 9);
    CHECK((mi * ci - Matrix3c::Identity()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("relaxation error symbols") {
    // QDR at (pi/2, pi/2): m_r = 16/9, all eigenvalues 1 - (36/47)(16/9) = -17/47
    const auto s = relax_error_symbol(RelaxParams::qdr(1.0, 36.0 / 47), {pi / 2, pi / 2}, 1.0);
    REQUIRE(s);
    const Complex lam = -17.0 / 47.0;
    CHECK((charpoly3(s->m) - charpoly_from_roots(lam, lam, lam)).norm() < 1e-12);
    CHECK(spectral_radius(s->m) == doctest::Approx(17.0 / 47.0).epsilon(1e-6));

    for (Scheme sc : {Scheme::QDR, Scheme::QBSR_EXACT, Scheme::QIBSR, Scheme::QUZAWA}) {
        RelaxParams p{sc, 0.0, 1.0, 0.5, 0.9};
        const auto id = relax_error_symbol(p, {0.4, 2.2}, 0.1);
        REQUIRE(id);
        CHECK(id->m.isIdentity(0.0));
    }
}

TEST_CASE("spectral radius") {
    CHECK(spectral_radius(CMatrix::Identity(3, 3)) == doctest::Approx(1.0));
    CMatrix d = CMatrix::Zero(3, 3);
    d(0, 0) = 0.5;
    d(1, 1) = -0.8;
    d(2, 2) = Complex(0.0, 0.3);
    CHECK(spectral_radius(d) == doctest::Approx(0.8));

    // 4x4 random matrices against the characteristic-polynomial oracle
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 20; ++trial) {
        CMatrix a(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) a(i, j) = Complex(nd(rng), nd(rng));
        const auto roots = sorted(charpoly_roots(a));
        const CVector ev = eigenvalues(a);
        const auto got = sorted({ev.data(), ev.data() + 4});
        for (int i = 0; i < 4; ++i) CHECK(std::abs(roots[i] - got[i]) < 1e-10);
        double rho = 0;
        for (Complex r : roots) rho = std::max(rho, std::abs(r));
        CHECK(std::abs(spectral_radius(a) - rho) < 1e-10);
    }
    CHECK_THROWS_AS(eigenvalues(CMatrix::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("m_r stays in [5/6, 16/9] over HIGH samples") {
    for (const Frequency& t : high_freq_samples(81)) {
        const AuxSymbols a = aux_symbols(t);
        CHECK(a.m >= 0.0);
        CHECK(a.m <= 2.0);
        CHECK(a.m_r >= 5.0 / 6.0 - 1e-12);
        CHECK(a.m_r <= 16.0 / 9.0 + 1e-12);
    }
}

TEST_CASE("per-frequency spectra of the smoothers") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> th(-pi, pi);
    const double h = 1.0 / 81;
    for (int trial = 0; trial < 100; ++trial) {
        const Frequency t{th(rng), th(rng)};
        if (std::abs(t.t1) < 1e-3 && std::abs(t.t2) < 1e-3) continue;
        const AuxSymbols a = aux_symbols(t);

        // exact BSR: eig(M_B^{-1} L) = {1, 1, 4m / (alpha m_s)}
        const double alpha = 1.3;
        const Matrix3c mb = smoother_symbol(RelaxParams::qbsr(alpha, 1.0), t, h).m;
        const Matrix3c l = stokes_symbol(t, h).m;
        const Complex lb = 4 * a.m / (alpha * a.m_s);
        CHECK((charpoly3(mb.inverse() * l) - charpoly_from_roots(1.0, 1.0, lb)).norm() < 1e-10);

        // QDR: one triple eigenvalue 1 - (omega/alpha) 4m/m_s
        const RelaxParams qd = RelaxParams::qdr(0.7, 0.7 * 36 / 47.0);
        const auto sd = relax_error_symbol(qd, t, h);
        const Complex ld = 1 - (qd.omega / qd.alpha) * 4 * a.m / a.m_s;
        CHECK((charpoly3(sd->m) - charpoly_from_roots(ld, ld, ld)).norm() < 1e-10);
        CHECK(std::abs(spectral_radius(sd->m) - std::abs(ld)) < 1e-6);

        if (classify(t) != FrequencyClass::High) continue;
        // Uzawa: eig(M_U^{-1} L) = roots of the factored characteristic polynomial
        const double au = 47.0 / 36, sg = 15.0 / 32;
        const Matrix3c mu = smoother_symbol(RelaxParams::quzawa(au, 1.0, sg), t, h).m;
        const UzawaSpectrum us = uzawa_spectrum(a.m_r, au, sg);
        const auto eu = eig(mu.inverse() * l);
        for (Complex w : {us.lambda1, us.lambda2, Complex(us.lambda3)}) {
            double best = 1e300;
            for (Complex e : eu) best = std::min(best, std::abs(e - w));
            CHECK(best < 1e-10);
        }
    }
}

TEST_CASE("sampled smoothing factors") {
    CHECK(std::abs(smoothing_factor(RelaxParams::qdr(1.0, 36.0 / 47), 81) - 17.0 / 47) <= 1e-3);
    CHECK(std::abs(smoothing_factor(RelaxParams::qbsr(1.0, 36.0 / 47), 81) - 17.0 / 47) <= 1e-3);
    CHECK(std::abs(smoothing_factor(RelaxParams::quzawa(47.0 / 36, 1.0, 15.0 / 32), 81) -
                   std::sqrt(17.0 / 47)) <= 2e-3);
    CHECK(smoothing_factor(RelaxParams::qdr(1.0, 0.0), 81) == doctest::Approx(1.0));
    const SmoothingSweep sw = smoothing_sweep(RelaxParams::qdr(1.0, 36.0 / 47), 27);
    CHECK(sw.evaluated == 27 * 27 * 8 / 9);
    CHECK(sw.skipped == 0);
}

TEST_CASE("parameter validation and names") {
    CHECK_THROWS_AS(RelaxParams::qdr(0.0, 1.0).validate(), ConfigError);
    CHECK_THROWS_AS(RelaxParams::quzawa(1.0, 1.0, 0.0).validate(), ConfigError);
    CHECK_THROWS_AS(RelaxParams::qibsr(1.0, 1.0, 2.0).validate(), ConfigError);
    CHECK_NOTHROW(RelaxParams::qibsr(47.0 / 36, 1.0, 0.9).validate());
    CHECK(parse_scheme("qibsr") == Scheme::QIBSR);
    CHECK(parse_scheme("QBSR_EXACT") == Scheme::QBSR_EXACT);
    CHECK_THROWS_AS(parse_scheme("gs"), ConfigError);
}
