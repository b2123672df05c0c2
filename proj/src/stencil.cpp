#include "mac3/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mac3 {

Stencil::Stencil(std::map<Offset, double> entries, int h_power)
    : entries_(std::move(entries)), h_power_(h_power) {
    for (const auto& [k, c] : entries_) {
        if (!std::isfinite(c)) {
            throw std::invalid_argument("Stencil: non-finite coefficient");
        }
    }
}

double Stencil::at(Offset k) const {
    auto it = entries_.find(k);
    return it == entries_.end() ? 0.0 : it->second;
}

double Stencil::sum() const {
    double total = 0.0;
    for (const auto& [k, c] : entries_) total += c;
    return total;
}

int Stencil::radius() const {
    int r = 0;
    for (const auto& [k, c] : entries_) {
        r = std::max({r, std::abs(k.k1), std::abs(k.k2)});
    }
    return r;
}

bool Stencil::is_symmetric(double tol) const {
    for (const auto& [k, c] : entries_) {
        if (std::abs(c - at(-k.k1, -k.k2)) > tol) return false;
    }
    return true;
}

Stencil Stencil::transposed() const {
    std::map<Offset, double> t;
    for (const auto& [k, c] : entries_) t[{-k.k1, -k.k2}] = c;
    return Stencil(std::move(t), h_power_);
}

Stencil Stencil::scaled(double factor) const {
    std::map<Offset, double> t;
    for (const auto& [k, c] : entries_) t[k] = c * factor;
    return Stencil(std::move(t), h_power_);
}

Complex symbol(const Stencil& s, Frequency theta, double h) {
    Complex acc{0.0, 0.0};
    for (const auto& [k, c] : s.entries()) {
        const double phase = theta.t1 * k.k1 + theta.t2 * k.k2;
        acc += c * Complex(std::cos(phase), std::sin(phase));
    }
    return acc * std::pow(h, s.h_power());
}

namespace stencils {

namespace {

// Builds a stencil from a row-major table whose first row is the top
// (largest k2), as stencils are usually printed.
Stencil from_table(std::initializer_list<std::initializer_list<double>> rows,
                   double scale, int h_power) {
    const int ny = static_cast<int>(rows.size());
    std::map<Offset, double> entries;
    int r = 0;
    for (const auto& row : rows) {
        const int nx = static_cast<int>(row.size());
        int c = 0;
        for (double v : row) {
            if (v != 0.0) {
                entries[{c - nx / 2, ny / 2 - r}] = v * scale;
            }
            ++c;
        }
        ++r;
    }
    return Stencil(std::move(entries), h_power);
}

}  // namespace

Stencil laplacian_5pt() {
    return from_table({{0, -1, 0}, {-1, 4, -1}, {0, -1, 0}}, 1.0, -2);
}

Stencil grad_x_half() { return from_table({{-1, 0, 1}}, 1.0, -1); }

Stencil grad_y_half() { return from_table({{1}, {0}, {-1}}, 1.0, -1); }

Stencil mass_Q() {
    return from_table({{1, 4, 1}, {4, 16, 4}, {1, 4, 1}}, 1.0 / 36.0, 2);
}

Stencil mass_Qp() { return mass_Q(); }

Stencil p25() {
    constexpr double w[5] = {1, 2, 3, 2, 1};
    std::map<Offset, double> entries;
    for (int a = 0; a < 5; ++a) {
        for (int b = 0; b < 5; ++b) {
            entries[{a - 2, b - 2}] = w[a] * w[b] / 9.0;
        }
    }
    return Stencil(std::move(entries), 0);
}

Stencil r1() { return Stencil({{{0, 0}, 1.0}}, 0); }

Stencil r9() {
    return from_table({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}, 1.0 / 9.0, 0);
}

Stencil r9b() {
    return from_table({{1, 2, 1}, {2, 4, 2}, {1, 2, 1}}, 1.0 / 16.0, 0);
}

Stencil rP25T() { return p25().transposed().scaled(1.0 / 9.0); }

}  // namespace stencils

}  // namespace mac3
