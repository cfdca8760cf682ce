#include "qtrap/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qtrap {

double reduce_angle(double alpha) {
    double r = std::fmod(alpha, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

// ---------------------------------------------------------------- Interval

Interval::Interval(double a, double b) : Interval(a, b, false) {}

Interval::Interval(double a, double b, bool half) : a_(a), b_(b), half_line_(half) {
    if (std::isnan(a) || std::isnan(b)) throw DomainError("Interval: NaN endpoint");
    if (!(a < b)) throw DomainError("Interval: requires a < b");
    if (!half && std::isinf(b)) throw DomainError("Interval: infinite b requires half_line()");
}

Interval Interval::half_line(double a) {
    return Interval(a, std::numeric_limits<double>::infinity(), true);
}

double Interval::length() const { return b_ - a_; }

bool Interval::overlaps(const Interval& other) const {
    return std::max(a_, other.a_) <= std::min(b_, other.b_);
}

// -------------------------------------------------------------------- Grid

Grid::Grid(Interval interval, std::size_t n, Kind kind)
    : interval_(interval), n_(n), h_(0.0), kind_(kind) {
    if (interval.is_half_line()) throw DomainError("Grid: interval must be finite");
    if (n == 0) throw DomainError("Grid: needs at least one point");
    const double len = interval.length();
    h_ = kind == Kind::Interior ? len / static_cast<double>(n + 1) : len / static_cast<double>(n);
}

Grid Grid::interior(Interval interval, std::size_t n) { return Grid(interval, n, Kind::Interior); }

Grid Grid::periodic(Interval interval, std::size_t n) { return Grid(interval, n, Kind::Periodic); }

double Grid::point(std::size_t j) const {
    const double offset = kind_ == Kind::Interior ? static_cast<double>(j + 1) : static_cast<double>(j);
    return interval_.a() + offset * h_;
}

std::vector<double> Grid::points() const {
    std::vector<double> xs(n_);
    for (std::size_t j = 0; j < n_; ++j) xs[j] = point(j);
    return xs;
}

// ------------------------------------------------------------ WaveFunction

WaveFunction::WaveFunction(Grid grid, CVector values)
    : grid_(std::move(grid)), values_(std::move(values)), support_(grid_.interval()) {
    if (values_.size() != grid_.size())
        throw StructuralError("WaveFunction: " + std::to_string(values_.size()) + " values for a grid of " +
                              std::to_string(grid_.size()) + " points");
}

WaveFunction::WaveFunction(Grid grid, CVector values, EndpointValues endpoints)
    : WaveFunction(std::move(grid), std::move(values)) {
    endpoints_ = endpoints;
}

WaveFunction& WaveFunction::set_support(const Interval& support) {
    support_ = support;
    normalized_ = false;
    return *this;
}

WaveFunction& WaveFunction::mark_generalized() {
    generalized_ = true;
    normalized_ = false;
    return *this;
}

cplx WaveFunction::value_at_a() const {
    if (endpoints_) return endpoints_->at_a;
    if (grid_.is_periodic()) return values_.front();
    return {};
}

cplx WaveFunction::value_at_b() const {
    if (endpoints_) return endpoints_->at_b;
    if (grid_.is_periodic()) return values_.front();
    return {};
}

namespace {

// Integral over [lo, hi] of the piecewise-linear interpolant through (xs, ys).
cplx clipped_trapezoid(const std::vector<double>& xs, const CVector& ys, double lo, double hi) {
    cplx sum{};
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
        const double x0 = xs[k];
        const double x1 = xs[k + 1];
        const double l = std::max(lo, x0);
        const double r = std::min(hi, x1);
        if (r <= l) continue;
        const double w = x1 - x0;
        auto interp = [&](double x) { return ys[k] + (ys[k + 1] - ys[k]) * ((x - x0) / w); };
        sum += 0.5 * (r - l) * (interp(l) + interp(r));
    }
    return sum;
}

void require_same_grid(const WaveFunction& f, const WaveFunction& g, const char* what) {
    if (!(f.grid() == g.grid())) throw StructuralError(std::string(what) + ": grid mismatch");
}

// Quadrature of conj(f) g: full trapezoid unless a support clip is active.
cplx quadrature(const WaveFunction& f, const WaveFunction& g, double lo, double hi) {
    const Grid& grid = f.grid();
    const double h = grid.spacing();
    const Interval& iv = grid.interval();
    const std::size_t n = grid.size();
    auto fv = f.values();
    auto gv = g.values();

    lo = std::max(lo, iv.a());
    hi = std::min(hi, iv.b());
    if (hi < lo) return {};

    const bool whole = lo <= iv.a() && hi >= iv.b();
    if (whole) {
        cplx sum{};
        for (std::size_t j = 0; j < n; ++j) sum += std::conj(fv[j]) * gv[j];
        sum *= h;
        if (!grid.is_periodic()) {
            sum += 0.5 * h *
                   (std::conj(f.value_at_a()) * g.value_at_a() + std::conj(f.value_at_b()) * g.value_at_b());
        }
        return sum;
    }

    std::vector<double> xs;
    CVector ys;
    xs.reserve(n + 2);
    ys.reserve(n + 2);
    if (!grid.is_periodic()) {
        xs.push_back(iv.a());
        ys.push_back(std::conj(f.value_at_a()) * g.value_at_a());
    }
    for (std::size_t j = 0; j < n; ++j) {
        xs.push_back(grid.point(j));
        ys.push_back(std::conj(fv[j]) * gv[j]);
    }
    xs.push_back(iv.b());
    ys.push_back(grid.is_periodic() ? std::conj(fv[0]) * gv[0] : std::conj(f.value_at_b()) * g.value_at_b());
    return clipped_trapezoid(xs, ys, lo, hi);
}

}  // namespace

double WaveFunction::squared_norm() const { return inner_product(*this, *this).real(); }

double WaveFunction::norm() const { return std::sqrt(std::max(0.0, squared_norm())); }

WaveFunction WaveFunction::normalize() const {
    if (generalized_) throw DomainError("normalize: generalized (non-L^2) function");
    const double nrm = norm();
    if (!(nrm > 0.0) || !std::isfinite(nrm)) throw DomainError("normalize: zero or non-finite norm");
    WaveFunction out = (1.0 / nrm) * *this;
    out.normalized_ = true;
    return out;
}

void WaveFunction::require_normalized(double tol) const {
    if (generalized_) throw PreconditionError("wave function is generalized (non-L^2)");
    const double nrm2 = squared_norm();
    if (std::abs(nrm2 - 1.0) > tol)
        throw PreconditionError("wave function not normalized: ||f||^2 = " + std::to_string(nrm2));
}

WaveFunction& WaveFunction::operator+=(const WaveFunction& other) {
    require_same_grid(*this, other, "operator+=");
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
    if (endpoints_ || other.endpoints_) {
        endpoints_ = EndpointValues{value_at_a() + other.value_at_a(), value_at_b() + other.value_at_b()};
    }
    support_ = Interval(std::min(support_.a(), other.support_.a()), std::max(support_.b(), other.support_.b()));
    normalized_ = false;
    generalized_ = generalized_ || other.generalized_;
    return *this;
}

WaveFunction& WaveFunction::operator-=(const WaveFunction& other) {
    return *this += (-1.0) * other;
}

WaveFunction& WaveFunction::operator*=(cplx s) {
    for (auto& v : values_) v *= s;
    if (endpoints_) {
        endpoints_->at_a *= s;
        endpoints_->at_b *= s;
    }
    normalized_ = normalized_ && std::abs(std::abs(s) - 1.0) < 1e-14;
    return *this;
}

WaveFunction operator+(WaveFunction l, const WaveFunction& r) { return l += r; }
WaveFunction operator-(WaveFunction l, const WaveFunction& r) { return l -= r; }
WaveFunction operator*(cplx s, WaveFunction f) { return f *= s; }

cplx inner_product(const WaveFunction& f, const WaveFunction& g) {
    require_same_grid(f, g, "inner_product");
    const double lo = std::max(f.support().a(), g.support().a());
    const double hi = std::min(f.support().b(), g.support().b());
    return quadrature(f, g, lo, hi);
}

double squared_norm_on(const WaveFunction& f, const Interval& region) {
    const double lo = std::max(f.support().a(), region.a());
    const double hi = std::min(f.support().b(), region.b());
    if (hi < lo) return 0.0;
    return quadrature(f, f, lo, hi).real();
}

WaveFunction restrict_indicator(const WaveFunction& f, const Interval& region) {
    const Grid& grid = f.grid();
    CVector vals(f.values().begin(), f.values().end());
    const double lo = std::max(f.support().a(), region.a());
    const double hi = std::min(f.support().b(), region.b());
    const bool disjoint = hi < lo;
    for (std::size_t j = 0; j < vals.size(); ++j) {
        const double x = grid.point(j);
        if (disjoint || x < lo || x > hi) vals[j] = 0.0;
    }
    WaveFunction out = [&] {
        if (!f.endpoints()) return WaveFunction(grid, std::move(vals));
        EndpointValues ends = *f.endpoints();
        const Interval& iv = grid.interval();
        if (disjoint || iv.a() < lo) ends.at_a = 0.0;
        if (disjoint || iv.b() > hi) ends.at_b = 0.0;
        return WaveFunction(grid, std::move(vals), ends);
    }();
    if (f.generalized()) out.mark_generalized();
    if (disjoint) return out;
    out.set_support(Interval(lo, hi > lo ? hi : std::nextafter(lo, std::numeric_limits<double>::infinity())));
    return out;
}

double max_abs_difference(const WaveFunction& f, const WaveFunction& g) {
    require_same_grid(f, g, "max_abs_difference");
    double m = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) m = std::max(m, std::abs(f[j] - g[j]));
    return m;
}

double l2_distance(const WaveFunction& f, const WaveFunction& g) {
    require_same_grid(f, g, "l2_distance");
    return (f - g).norm();
}

BoundaryTrace trace_of(const WaveFunction& f) {
    const Grid& grid = f.grid();
    const std::size_t n = grid.size();
    if (n < 3) throw DomainError("trace_of: needs at least 3 grid points");
    if (grid.is_periodic() && !f.endpoints())
        throw PreconditionError("trace_of: periodic-grid samples need explicit endpoint values");
    const double h = grid.spacing();
    auto v = f.values();

    BoundaryTrace t;
    t.value_a = f.value_at_a();
    t.value_b = f.value_at_b();
    if (grid.is_periodic()) {
        // x_0 = a is stored; b is not.
        t.deriv_a = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
        t.deriv_b = (3.0 * t.value_b - 4.0 * v[n - 1] + v[n - 2]) / (2.0 * h);
    } else {
        t.deriv_a = (-3.0 * t.value_a + 4.0 * v[0] - v[1]) / (2.0 * h);
        t.deriv_b = (3.0 * t.value_b - 4.0 * v[n - 1] + v[n - 2]) / (2.0 * h);
    }

    double sup_v = std::max(std::abs(t.value_a), std::abs(t.value_b));
    for (auto z : v) sup_v = std::max(sup_v, std::abs(z));
    double sup_d = std::max(std::abs(t.deriv_a), std::abs(t.deriv_b));
    for (std::size_t j = 1; j + 1 < n; ++j) sup_d = std::max(sup_d, std::abs(v[j + 1] - v[j - 1]) / (2.0 * h));
    t.sup_value = sup_v;
    t.sup_deriv = sup_d;
    return t;
}

// ---------------------------------------------------------- ExponentialSum

ExponentialSum ExponentialSum::single(cplx coefficient, cplx exponent) {
    return ExponentialSum({Term{coefficient, exponent}});
}

ExponentialSum ExponentialSum::sine(double amplitude, double k) {
    // sin(kx) = (e^{ikx} - e^{-ikx}) / 2i
    const cplx c = amplitude / cplx(0.0, 2.0);
    return ExponentialSum({Term{c, cplx(0.0, k)}, Term{-c, cplx(0.0, -k)}});
}

cplx ExponentialSum::value(double x) const {
    cplx s{};
    for (const auto& t : terms_) s += t.coefficient * std::exp(t.exponent * x);
    return s;
}

cplx ExponentialSum::derivative(double x) const {
    cplx s{};
    for (const auto& t : terms_) s += t.coefficient * t.exponent * std::exp(t.exponent * x);
    return s;
}

cplx ExponentialSum::second_derivative(double x) const {
    cplx s{};
    for (const auto& t : terms_) s += t.coefficient * t.exponent * t.exponent * std::exp(t.exponent * x);
    return s;
}

WaveFunction ExponentialSum::sample(const Grid& grid) const {
    CVector vals(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) vals[j] = value(grid.point(j));
    return WaveFunction(grid, std::move(vals),
                        EndpointValues{value(grid.interval().a()), value(grid.interval().b())});
}

BoundaryTrace ExponentialSum::trace(const Interval& interval, std::size_t dense) const {
    BoundaryTrace t;
    const double a = interval.a();
    const double b = interval.b();
    t.value_a = value(a);
    t.value_b = value(b);
    t.deriv_a = derivative(a);
    t.deriv_b = derivative(b);
    const std::size_t m = std::max<std::size_t>(dense, 2);
    for (std::size_t j = 0; j < m; ++j) {
        const double x = a + (b - a) * static_cast<double>(j) / static_cast<double>(m - 1);
        t.sup_value = std::max(t.sup_value, std::abs(value(x)));
        t.sup_deriv = std::max(t.sup_deriv, std::abs(derivative(x)));
    }
    return t;
}

ExponentialSum& ExponentialSum::operator+=(const ExponentialSum& other) {
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    return *this;
}

ExponentialSum& ExponentialSum::operator*=(cplx s) {
    for (auto& t : terms_) t.coefficient *= s;
    return *this;
}

ExponentialSum operator+(ExponentialSum l, const ExponentialSum& r) { return l += r; }
ExponentialSum operator*(cplx s, ExponentialSum f) { return f *= s; }

// ---------------------------------------------------------------- 2x2 algebra

ComplexMatrix2 ComplexMatrix2::adjoint() const {
    ComplexMatrix2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r(i, j) = std::conj((*this)(j, i));
    return r;
}

ComplexMatrix2 ComplexMatrix2::operator*(const ComplexMatrix2& o) const {
    ComplexMatrix2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r(i, j) = (*this)(i, 0) * o(0, j) + (*this)(i, 1) * o(1, j);
    return r;
}

std::array<cplx, 2> ComplexMatrix2::apply(const std::array<cplx, 2>& v) const {
    return {(*this)(0, 0) * v[0] + (*this)(0, 1) * v[1], (*this)(1, 0) * v[0] + (*this)(1, 1) * v[1]};
}

cplx ComplexMatrix2::determinant() const { return m[0] * m[3] - m[1] * m[2]; }

double ComplexMatrix2::unitarity_defect() const {
    const ComplexMatrix2 p = adjoint() * *this;
    return max_abs_difference(p, identity());
}

ComplexMatrix2 ComplexMatrix2::identity() { return ComplexMatrix2{{1.0, 0.0, 0.0, 1.0}}; }

double max_abs_difference(const ComplexMatrix2& l, const ComplexMatrix2& r) {
    double d = 0.0;
    for (std::size_t k = 0; k < 4; ++k) d = std::max(d, std::abs(l.m[k] - r.m[k]));
    return d;
}

UnitaryMatrix2::UnitaryMatrix2(const ComplexMatrix2& m) : m_(m) {
    const double defect = m.unitarity_defect();
    if (!(defect <= kTolerance)) throw DomainError("UnitaryMatrix2: U^dagger U - I = " + std::to_string(defect));
    if (std::abs(std::abs(m.determinant()) - 1.0) > kTolerance) throw DomainError("UnitaryMatrix2: |det U| != 1");
}

UnitaryMatrix2 UnitaryMatrix2::identity() { return UnitaryMatrix2(ComplexMatrix2::identity()); }

UnitaryMatrix2 UnitaryMatrix2::minus_identity() { return UnitaryMatrix2(ComplexMatrix2{{-1.0, 0.0, 0.0, -1.0}}); }

// ---------------------------------------------------------------- Spectrum

double Spectrum::orthonormality_defect() const {
    double d = 0.0;
    for (std::size_t i = 0; i < vectors.size(); ++i)
        for (std::size_t j = i; j < vectors.size(); ++j) {
            const cplx ip = inner_product(vectors[i], vectors[j]);
            d = std::max(d, std::abs(ip - (i == j ? 1.0 : 0.0)));
        }
    return d;
}

}  // namespace qtrap
