#include "qtrap/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qtrap::closed_form {

CalogeroParams::CalogeroParams(double gamma) : gamma_(gamma), laguerre_order_(0.0) {
    if (!(gamma > -0.25)) throw DomainError("Calogero coupling must satisfy gamma > -1/4");
    laguerre_order_ = 0.5 * std::sqrt(1.0 + 4.0 * gamma);
}

MultitrapParams::MultitrapParams(double q) : q_(q) {
    if (!(q > 0.0)) throw DomainError("multitrap requires q > 0");
}

std::vector<double> MultitrapParams::nodes_in(const Interval& interval) const {
    std::vector<double> nodes;
    const long first = static_cast<long>(std::ceil(interval.a() * q_ / kPi - 1e-12));
    const long last = static_cast<long>(std::floor(interval.b() * q_ / kPi + 1e-12));
    for (long k = first; k <= last; ++k) nodes.push_back(static_cast<double>(k) * kPi / q_);
    return nodes;
}

ExponentialSum quasi_momentum_mode(double alpha, long n) {
    const double p = 2.0 * static_cast<double>(n) + reduce_angle(alpha) / kPi;
    return ExponentialSum::single(1.0 / std::sqrt(kPi), cplx(0.0, p));
}

Spectrum momentum_spectrum(double alpha, IntegerRange labels) {
    if (labels.last < labels.first) throw DomainError("momentum_spectrum: empty label range");
    const double a = reduce_angle(alpha);
    Spectrum s;
    for (long n = labels.first; n <= labels.last; ++n) {
        s.labels.push_back(n);
        s.eigenvalues.push_back(2.0 * static_cast<double>(n) + a / kPi);
        s.modes.push_back(quasi_momentum_mode(a, n));
    }
    return s;
}

Spectrum h_alpha_spectrum(double alpha, IntegerRange labels) {
    const Spectrum p = momentum_spectrum(alpha, labels);
    std::vector<std::size_t> order(p.size());
    std::iota(order.begin(), order.end(), 0);
    auto energy = [&](std::size_t i) { return p.eigenvalues[i] * p.eigenvalues[i]; };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
        return energy(l) < energy(r) || (energy(l) == energy(r) && p.labels[l] < p.labels[r]);
    });
    Spectrum s;
    for (std::size_t i : order) {
        s.labels.push_back(p.labels[i]);
        s.eigenvalues.push_back(energy(i));
        s.modes.push_back(p.modes[i]);
    }
    return s;
}

ExponentialSum well_mode(long n) {
    if (n < 0) throw DomainError("well_mode: n >= 0");
    return ExponentialSum::sine(std::sqrt(2.0 / kPi), static_cast<double>(n + 1));
}

Spectrum infinite_well_spectrum(std::size_t n_max) {
    Spectrum s;
    for (std::size_t n = 0; n <= n_max; ++n) {
        const double k = static_cast<double>(n + 1);
        s.labels.push_back(static_cast<long>(n));
        s.eigenvalues.push_back(k * k);
        s.modes.push_back(well_mode(static_cast<long>(n)));
    }
    return s;
}

double laguerre(std::size_t n, double order, double y) {
    double prev = 1.0;
    if (n == 0) return prev;
    double cur = 1.0 + order - y;
    for (std::size_t k = 1; k < n; ++k) {
        const double kk = static_cast<double>(k);
        const double next = ((2.0 * kk + 1.0 + order - y) * cur - (kk + order) * prev) / (kk + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

Spectrum calogero_spectrum(const CalogeroParams& params, std::size_t n_max) {
    Spectrum s;
    const double offset = 2.0 + std::sqrt(1.0 + 4.0 * params.gamma());
    for (std::size_t n = 0; n <= n_max; ++n) {
        s.labels.push_back(static_cast<long>(n));
        s.eigenvalues.push_back(4.0 * static_cast<double>(n) + offset);
    }
    return s;
}

CalogeroMode::CalogeroMode(CalogeroParams params, std::size_t n, Side side)
    : params_(params), n_(n), side_(side) {}

double CalogeroMode::energy() const {
    return 4.0 * static_cast<double>(n_) + 2.0 + std::sqrt(1.0 + 4.0 * params_.gamma());
}

void CalogeroMode::branch(double r, double& f, double& df, double& d2f) const {
    const double a = params_.laguerre_order();
    const double beta = params_.origin_exponent();
    const double y = r * r;
    const double lag = laguerre(n_, a, y);
    // d/dy L_n^a = -L_{n-1}^{a+1}, d^2/dy^2 L_n^a = L_{n-2}^{a+2}
    const double dlag = n_ >= 1 ? -laguerre(n_ - 1, a + 1.0, y) : 0.0;
    const double d2lag = n_ >= 2 ? laguerre(n_ - 2, a + 2.0, y) : 0.0;

    const double u = std::pow(r, beta) * std::exp(-0.5 * y);
    const double g = beta / r - r;  // u'/u
    const double du = u * g;
    const double d2u = u * (g * g - beta / y - 1.0);
    const double w = lag;
    const double dw = 2.0 * r * dlag;
    const double d2w = 2.0 * dlag + 4.0 * y * d2lag;

    f = u * w;
    df = du * w + u * dw;
    d2f = d2u * w + 2.0 * du * dw + u * d2w;
}

double CalogeroMode::value(double x) const {
    const double r = side_ == Side::Positive ? x : -x;
    if (r <= 0.0) return 0.0;
    double f, df, d2f;
    branch(r, f, df, d2f);
    return f;
}

double CalogeroMode::derivative(double x) const {
    const double r = side_ == Side::Positive ? x : -x;
    if (r <= 0.0) return 0.0;
    double f, df, d2f;
    branch(r, f, df, d2f);
    return side_ == Side::Positive ? df : -df;
}

double CalogeroMode::second_derivative(double x) const {
    const double r = side_ == Side::Positive ? x : -x;
    if (r <= 0.0) return 0.0;
    double f, df, d2f;
    branch(r, f, df, d2f);
    return d2f;
}

WaveFunction CalogeroMode::sample(const Grid& grid) const {
    CVector v(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) v[j] = value(grid.point(j));
    return WaveFunction(grid, std::move(v));
}

double centrifugal_coupling(int n) { return static_cast<double>(n) * static_cast<double>(n - 1); }

WaveFunction centrifugal_ground_state(int n, const Grid& grid) {
    if (n < 2) throw DomainError("centrifugal_ground_state: n >= 2 required, got " + std::to_string(n));
    if (grid.interval().a() < 0.0) throw DomainError("centrifugal_ground_state: grid must lie in [0, inf)");
    CVector v(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) v[j] = std::pow(grid.point(j), n);
    WaveFunction phi(grid, std::move(v));
    phi.mark_generalized();
    return phi;
}

WaveFunction multitrap_ground_state(const MultitrapParams& params, const Grid& grid) {
    CVector v(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) v[j] = std::sin(params.q() * grid.point(j));
    WaveFunction phi(grid, std::move(v));
    phi.mark_generalized();
    return phi;
}

}  // namespace qtrap::closed_form
