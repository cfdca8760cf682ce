#include "qtrap/kinematics.hpp"

#include <algorithm>
#include <cmath>

#include "qtrap/parallel.hpp"

namespace qtrap::kinematics {

namespace {

const cplx kI{0.0, 1.0};

// int_0^1 (1 - t) e^{-iut} dt
cplx half_hat(double u) {
    if (std::abs(u) < 0.1) {
        cplx sum{};
        cplx term = 0.5;  // (-iu)^k / (k+2)!
        for (int k = 0; k < 14; ++k) {
            sum += term;
            term *= -kI * u / static_cast<double>(k + 3);
        }
        return sum;
    }
    return 1.0 / (kI * u) + (1.0 - std::exp(-kI * u)) / (u * u);
}

// sin(v)/v squared
double sinc2(double v) {
    if (std::abs(v) < 1e-4) return 1.0 - v * v / 3.0;
    const double s = std::sin(v) / v;
    return s * s;
}

void require_interior(const WaveFunction& f, const char* what) {
    if (f.grid().is_periodic()) throw StructuralError(std::string(what) + ": needs an interior grid");
}

}  // namespace

std::vector<double> symmetric_momenta(double p_max, std::size_t count) {
    if (count < 2 || !(p_max > 0.0)) throw DomainError("symmetric_momenta: need p_max > 0 and count >= 2");
    std::vector<double> p(count);
    const double step = 2.0 * p_max / static_cast<double>(count - 1);
    for (std::size_t k = 0; k < count; ++k) p[k] = -p_max + step * static_cast<double>(k);
    p[count - 1] = p_max;
    return p;
}

std::vector<cplx> fourier_amplitudes(const WaveFunction& f, std::span<const double> p_grid) {
    require_interior(f, "fourier_transform");
    const Grid& grid = f.grid();
    const double h = grid.spacing();
    const double a = grid.interval().a();
    const double b = grid.interval().b();
    const auto v = f.values();
    const std::size_t n = v.size();
    const cplx fa = f.value_at_a();
    const cplx fb = f.value_at_b();

    std::vector<cplx> out(p_grid.size());
    parallel_for(p_grid.size(), [&](std::size_t k) {
        const double p = p_grid[k];
        // sum_j f_j e^{-ip x_j}, phases re-anchored every 64 points
        const cplx step = std::exp(-kI * p * h);
        cplx sum{};
        cplx phase{};
        for (std::size_t j = 0; j < n; ++j) {
            if (j % 64 == 0) phase = std::exp(-kI * p * grid.point(j));
            sum += v[j] * phase;
            phase *= step;
        }
        cplx integral = h * sinc2(0.5 * p * h) * sum;
        if (fa != cplx{}) integral += fa * h * std::exp(-kI * p * a) * half_hat(p * h);
        if (fb != cplx{}) integral += fb * h * std::exp(-kI * p * b) * std::conj(half_hat(p * h));
        out[k] = integral / kTwoPi;
    });
    return out;
}

MomentumDistribution fourier_transform(const WaveFunction& f, const std::vector<double>& p_grid) {
    f.require_normalized(1e-8);
    const auto amp = fourier_amplitudes(f, p_grid);
    MomentumDistribution dist;
    dist.p_grid = p_grid;
    dist.density.resize(amp.size());
    for (std::size_t k = 0; k < amp.size(); ++k) dist.density[k] = kTwoPi * std::norm(amp[k]);
    return dist;
}

double probability_position(const WaveFunction& f, const Interval& m) {
    f.require_normalized(1e-8);
    return squared_norm_on(f, m);
}

double probability_momentum(const MomentumDistribution& dist, const Interval& k) {
    const auto& p = dist.p_grid;
    if (p.size() < 2 || p.size() != dist.density.size())
        throw StructuralError("probability_momentum: malformed distribution");
    if (!std::is_sorted(p.begin(), p.end())) throw StructuralError("probability_momentum: p grid must increase");
    const double slack = 1e-12 * std::max(1.0, p.back() - p.front());
    if (k.a() < p.front() - slack || k.b() > p.back() + slack)
        throw DomainError("probability_momentum: interval exceeds the computed momentum window");
    const double lo = std::max(k.a(), p.front());
    const double hi = std::min(k.b(), p.back());
    double sum = 0.0;
    for (std::size_t j = 0; j + 1 < p.size(); ++j) {
        const double l = std::max(lo, p[j]);
        const double r = std::min(hi, p[j + 1]);
        if (r <= l) continue;
        const double w = p[j + 1] - p[j];
        auto interp = [&](double x) { return dist.density[j] + (dist.density[j + 1] - dist.density[j]) * (x - p[j]) / w; };
        sum += 0.5 * (r - l) * (interp(l) + interp(r));
    }
    return sum;
}

Uncertainty uncertainty_product(const WaveFunction& f) {
    require_interior(f, "uncertainty_product");
    f.require_normalized(1e-8);
    const Grid& grid = f.grid();
    const double h = grid.spacing();
    const auto v = f.values();
    const std::size_t n = v.size();

    // samples with the endpoint data at both ends
    CVector s(n + 2);
    std::vector<double> x(n + 2);
    s[0] = f.value_at_a();
    x[0] = grid.interval().a();
    for (std::size_t j = 0; j < n; ++j) {
        s[j + 1] = v[j];
        x[j + 1] = grid.point(j);
    }
    s[n + 1] = f.value_at_b();
    x[n + 1] = grid.interval().b();

    double m0 = 0.0, m1 = 0.0, m2 = 0.0, p2 = 0.0;
    cplx p1{};
    for (std::size_t j = 0; j < n + 2; ++j) {
        const double w = (j == 0 || j == n + 1) ? 0.5 * h : h;
        const double rho = std::norm(s[j]);
        m0 += w * rho;
        m1 += w * rho * x[j];
        m2 += w * rho * x[j] * x[j];
        if (j + 1 < n + 2) p2 += std::norm(s[j + 1] - s[j]) / h;
        if (j > 0 && j + 1 < n + 2) p1 += h * std::conj(s[j]) * (s[j + 1] - s[j - 1]) / (2.0 * h);
    }
    const double mean_q = m1 / m0;
    const double var_q = std::max(0.0, m2 / m0 - mean_q * mean_q);
    const double mean_p = p1.imag() / m0;
    const double var_p = std::max(0.0, p2 / m0 - mean_p * mean_p);
    const double dq = std::sqrt(var_q);
    const double dp = std::sqrt(var_p);
    return Uncertainty{mean_q, mean_p, dq, dp, dq * dp};
}

}  // namespace qtrap::kinematics
