#include "sway/profiles.hpp"

#include <array>
#include <cmath>
#include <utility>

#include "sway/errors.hpp"

namespace sway {

std::string to_string(ProfileUnit unit) {
    return unit == ProfileUnit::dimensionless ? "1" : "m";
}

PolynomialProfile::PolynomialProfile(std::vector<double> coefficients, double tf,
                                     ProfileUnit unit)
    : coefficients_(std::move(coefficients)), tf_(tf), unit_(unit) {
    if (!(tf > 0.0)) throw InvalidInput("profile duration must be positive");
    if (coefficients_.empty()) coefficients_.push_back(0.0);
}

double PolynomialProfile::evaluate(double t, int order) const {
    if (order < 0 || order > 3) throw InvalidInput("derivative order must be in 0..3");
    const double slack = 1e-9 * std::max(tf_, 1.0);
    if (t < -slack || t > tf_ + slack)
        throw DomainError("profile evaluated outside [0, tf]");
    double s = t / tf_;
    s = std::min(std::max(s, 0.0), 1.0);

    // Horner on the order-th derivative polynomial in S.
    const int n = static_cast<int>(coefficients_.size());
    double acc = 0.0;
    for (int j = n - 1; j >= order; --j) {
        double factor = 1.0;
        for (int k = 0; k < order; ++k) factor *= static_cast<double>(j - k);
        acc = acc * s + coefficients_[static_cast<size_t>(j)] * factor;
    }
    for (int j = 0; j < order; ++j) acc /= tf_;
    return acc;
}

double evaluate(const PolynomialProfile& profile, double t, int order) {
    return profile.evaluate(t, order);
}

double scaling_gamma(double l0, double lf) {
    if (!(l0 > 0.0) || !(lf > 0.0)) throw InvalidInput("rope lengths must be positive");
    return std::pow(lf / l0, 0.25);
}

PolynomialProfile build_scaling_profile(double l0, double lf, double a6, double a7, double tf) {
    if (!(tf > 0.0)) throw InvalidInput("duration must be positive");
    const double gamma = scaling_gamma(l0, lf);
    std::vector<double> c(8, 0.0);
    c[0] = 1.0;
    c[3] = -10.0 + 10.0 * gamma - a6 - 3.0 * a7;
    c[4] = 15.0 - 15.0 * gamma + 3.0 * a6 + 8.0 * a7;
    c[5] = 3.0 * (-2.0 + 2.0 * gamma - a6 - 2.0 * a7);
    c[6] = a6;
    c[7] = a7;
    return PolynomialProfile(std::move(c), tf, ProfileUnit::dimensionless);
}

PolynomialProfile build_transport_profile(double b6, double b7, double tf) {
    if (!(tf > 0.0)) throw InvalidInput("duration must be positive");
    std::vector<double> c(8, 0.0);
    c[3] = -(b6 + 3.0 * b7);
    c[4] = 3.0 * b6 + 8.0 * b7;
    c[5] = -3.0 * (b6 + 2.0 * b7);
    c[6] = b6;
    c[7] = b7;
    return PolynomialProfile(std::move(c), tf, ProfileUnit::meters);
}

namespace {

// The six end conditions reduce to three linear constraints on the S^3..S^5
// coefficients once the value, slope and curvature sums over the higher
// monomials are known: sum c_j = 0, sum j c_j = 0, sum j(j-1) c_j = 0 at S=1.
std::array<double, 3> solve_low_coefficients(double sum0, double sum1, double sum2) {
    // [1  1  1 ] [c3]   [-sum0]
    // [3  4  5 ] [c4] = [-sum1]
    // [6 12 20 ] [c5]   [-sum2]
    double m[3][4] = {{1.0, 1.0, 1.0, -sum0}, {3.0, 4.0, 5.0, -sum1}, {6.0, 12.0, 20.0, -sum2}};
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::fabs(m[r][col]) > std::fabs(m[pivot][col])) pivot = r;
        std::swap(m[col], m[pivot]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = m[r][col] / m[col][col];
            for (int k = col; k < 4; ++k) m[r][k] -= f * m[col][k];
        }
    }
    return {m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]};
}

}  // namespace

PolynomialProfile build_extended_transport_profile(double b6, double b7,
                                                   std::span<const double> extras, double tf) {
    if (!(tf > 0.0)) throw InvalidInput("duration must be positive");
    std::vector<double> c(8 + extras.size(), 0.0);
    c[6] = b6;
    c[7] = b7;
    for (size_t k = 0; k < extras.size(); ++k) c[8 + k] = extras[k];

    double sum0 = 0.0, sum1 = 0.0, sum2 = 0.0;
    for (size_t j = 6; j < c.size(); ++j) {
        const double dj = static_cast<double>(j);
        sum0 += c[j];
        sum1 += dj * c[j];
        sum2 += dj * (dj - 1.0) * c[j];
    }
    const auto low = solve_low_coefficients(sum0, sum1, sum2);
    c[3] = low[0];
    c[4] = low[1];
    c[5] = low[2];
    return PolynomialProfile(std::move(c), tf, ProfileUnit::meters);
}

}  // namespace sway
