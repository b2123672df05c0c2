#include "mac3/frequency.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mac3 {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap(double t) {
    double w = std::fmod(t + kPi, 2.0 * kPi);
    if (w < 0.0) w += 2.0 * kPi;
    return w - kPi;
}

void check_resolution(int n) {
    if (n < 9 || n % 3 != 0) {
        throw std::invalid_argument("sampling resolution must be a multiple of 3 and >= 9, got " +
                                    std::to_string(n));
    }
}

}  // namespace

Frequency canonicalize(Frequency theta) { return {wrap(theta.t1), wrap(theta.t2)}; }

FrequencyClass classify(Frequency theta) {
    const Frequency c = canonicalize(theta);
    auto low = [](double t) { return t >= -kPi / 3.0 && t < kPi / 3.0; };
    return (low(c.t1) && low(c.t2)) ? FrequencyClass::Low : FrequencyClass::High;
}

Frequency LatticePoint::theta() const {
    return {kPi * m1 / static_cast<double>(den), kPi * m2 / static_cast<double>(den)};
}

bool LatticePoint::is_low() const {
    // -den/3 <= m < den/3, evaluated as 3m against den.
    auto low = [this](int m) { return -den <= 3 * m && 3 * m < den; };
    return low(m1) && low(m2);
}

std::vector<LatticePoint> lfa_samples(int n) {
    check_resolution(n);
    // -pi/2 + 2 pi k / n = pi (4k - n) / (2n), wrapped into [-2n, 2n).
    const int den = 2 * n;
    std::vector<int> ms;
    ms.reserve(n);
    for (int k = 0; k < n; ++k) {
        int m = 4 * k - n;
        if (m >= den) m -= 2 * den;
        ms.push_back(m);
    }
    std::vector<LatticePoint> out;
    out.reserve(static_cast<std::size_t>(n) * n);
    for (int m1 : ms) {
        for (int m2 : ms) out.push_back({m1, m2, den});
    }
    return out;
}

std::vector<Frequency> high_freq_samples(int n) {
    std::vector<Frequency> out;
    for (const auto& p : lfa_samples(n)) {
        if (!p.is_low()) out.push_back(p.theta());
    }
    return out;
}

std::vector<Frequency> low_freq_samples(int n) {
    std::vector<Frequency> out;
    for (const auto& p : lfa_samples(n)) {
        if (p.is_low()) out.push_back(p.theta());
    }
    return out;
}

std::vector<Frequency> periodic_low_lattice(int n) {
    if (n < 3 || n % 3 != 0) {
        throw std::invalid_argument("periodic lattice size must be a multiple of 3");
    }
    std::vector<Frequency> out;
    for (int k1 = -n / 2; k1 < n - n / 2; ++k1) {
        for (int k2 = -n / 2; k2 < n - n / 2; ++k2) {
            // theta = 2 pi k / n = pi (2k) / n
            LatticePoint p{2 * k1, 2 * k2, n};
            if (p.is_low()) out.push_back(p.theta());
        }
    }
    return out;
}

}  // namespace mac3
