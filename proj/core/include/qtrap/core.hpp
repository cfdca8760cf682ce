#pragma once

// Shared domain types: intervals, grids, sampled wave functions, closed-form
// exponential descriptors, boundary traces, 2x2 unitaries and spectra.
//
// Units: hbar = 1, 2m = 1, so H = -d^2/dx^2 + V.

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "qtrap/errors.hpp"

namespace qtrap {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Reduce an angle into [0, 2*pi).
double reduce_angle(double alpha);

class Interval {
public:
    Interval(double a, double b);
    static Interval half_line(double a);

    double a() const { return a_; }
    double b() const { return b_; }
    bool is_half_line() const { return half_line_; }
    double length() const;
    bool contains(double x) const { return x >= a_ && x <= b_; }
    bool overlaps(const Interval& other) const;

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    Interval(double a, double b, bool half);
    double a_;
    double b_;
    bool half_line_ = false;
};

/// Uniform mesh on a finite interval.
///
/// Interior grids hold the n points a + j*h, j = 1..n, h = (b-a)/(n+1); the
/// endpoints are not part of the state vector and Dirichlet data enter only
/// through the stencil. Periodic grids hold a + j*h, j = 0..n-1, h = (b-a)/n,
/// with b identified with a (used for quasi-periodic problems).
class Grid {
public:
    enum class Kind { Interior, Periodic };

    static Grid interior(Interval interval, std::size_t n);
    static Grid periodic(Interval interval, std::size_t n);

    const Interval& interval() const { return interval_; }
    std::size_t size() const { return n_; }
    double spacing() const { return h_; }
    Kind kind() const { return kind_; }
    bool is_periodic() const { return kind_ == Kind::Periodic; }

    /// Coordinate of the j-th stored point, j in [0, size()).
    double point(std::size_t j) const;
    std::vector<double> points() const;

    friend bool operator==(const Grid& l, const Grid& r) {
        return l.kind_ == r.kind_ && l.n_ == r.n_ && l.interval_ == r.interval_;
    }

private:
    Grid(Interval interval, std::size_t n, Kind kind);
    Interval interval_;
    std::size_t n_;
    double h_;
    Kind kind_;
};

/// Values at the two interval endpoints, for data that does not vanish there.
struct EndpointValues {
    cplx at_a;
    cplx at_b;
};

/// Complex samples on a grid.
///
/// On an interior grid the endpoint values are zero unless `endpoints` is set;
/// quadrature is the composite trapezoid rule on the piecewise-linear
/// integrand, including whatever endpoint data is present and clipped to
/// `support()` (set by restrict_indicator, whole interval otherwise).
/// Generalized (non-L^2) functions, such as zero-energy ground states on a
/// half line, carry a flag so norm-dependent code can reject them.
class WaveFunction {
public:
    WaveFunction(Grid grid, CVector values);
    WaveFunction(Grid grid, CVector values, EndpointValues endpoints);

    const Grid& grid() const { return grid_; }
    std::span<const cplx> values() const { return values_; }
    CVector& mutable_values() { return values_; }
    const std::optional<EndpointValues>& endpoints() const { return endpoints_; }
    /// Closed interval outside of which the function vanishes identically.
    const Interval& support() const { return support_; }
    WaveFunction& set_support(const Interval& support);
    std::size_t size() const { return values_.size(); }
    cplx operator[](std::size_t j) const { return values_[j]; }

    bool normalized() const { return normalized_; }
    bool generalized() const { return generalized_; }
    WaveFunction& mark_generalized();

    /// Value at the left/right interval ends (zero unless endpoint data is carried).
    cplx value_at_a() const;
    cplx value_at_b() const;

    double squared_norm() const;
    double norm() const;
    /// Returns the normalized function; throws DomainError on zero or generalized input.
    WaveFunction normalize() const;
    /// Throws PreconditionError unless the quadrature norm is 1 within `tol`.
    void require_normalized(double tol = 1e-8) const;

    WaveFunction& operator+=(const WaveFunction& other);
    WaveFunction& operator-=(const WaveFunction& other);
    WaveFunction& operator*=(cplx s);

private:
    Grid grid_;
    CVector values_;
    std::optional<EndpointValues> endpoints_;
    Interval support_;
    bool normalized_ = false;
    bool generalized_ = false;
};

WaveFunction operator+(WaveFunction l, const WaveFunction& r);
WaveFunction operator-(WaveFunction l, const WaveFunction& r);
WaveFunction operator*(cplx s, WaveFunction f);

/// Trapezoid quadrature of conj(f) * g. Throws StructuralError on grid mismatch.
cplx inner_product(const WaveFunction& f, const WaveFunction& g);

/// Trapezoid quadrature of |f|^2 over the part of the grid inside `region`.
double squared_norm_on(const WaveFunction& f, const Interval& region);

/// chi_region * f: values at points outside the closed region are zeroed and
/// the support is intersected with the region (a disjoint region gives the
/// zero function). Idempotent.
WaveFunction restrict_indicator(const WaveFunction& f, const Interval& region);

/// Max-norm distance between sample vectors; grids must match.
double max_abs_difference(const WaveFunction& f, const WaveFunction& g);

/// L^2 (trapezoid) distance ||f - g||.
double l2_distance(const WaveFunction& f, const WaveFunction& g);

/// Endpoint values and derivatives plus sup norms of value and derivative,
/// the data needed to test boundary conditions at both ends of [a, b].
struct BoundaryTrace {
    cplx value_a;
    cplx value_b;
    cplx deriv_a;
    cplx deriv_b;
    double sup_value = 0.0;
    double sup_deriv = 0.0;
};

/// Trace of grid samples: endpoint values from the function (zero on interior
/// grids without endpoint data) and one-sided second-order derivatives.
BoundaryTrace trace_of(const WaveFunction& f);

/// Finite sum of exponentials sum_k c_k exp(s_k x).
///
/// Closed-form descriptor used for deficiency vectors, quasi-momentum
/// eigenfunctions and sine modes; derivatives are exact.
class ExponentialSum {
public:
    struct Term {
        cplx coefficient;
        cplx exponent;
    };

    ExponentialSum() = default;
    explicit ExponentialSum(std::vector<Term> terms) : terms_(std::move(terms)) {}
    static ExponentialSum single(cplx coefficient, cplx exponent);
    /// amplitude * sin(k x)
    static ExponentialSum sine(double amplitude, double k);

    std::span<const Term> terms() const { return terms_; }

    cplx value(double x) const;
    cplx derivative(double x) const;
    cplx second_derivative(double x) const;

    /// Samples on the grid; on interior grids the endpoint values are attached.
    WaveFunction sample(const Grid& grid) const;
    /// Exact endpoint data on [a, b]; sup norms from `dense` uniform samples.
    BoundaryTrace trace(const Interval& interval, std::size_t dense = 4097) const;

    ExponentialSum& operator+=(const ExponentialSum& other);
    ExponentialSum& operator*=(cplx s);

private:
    std::vector<Term> terms_;
};

ExponentialSum operator+(ExponentialSum l, const ExponentialSum& r);
ExponentialSum operator*(cplx s, ExponentialSum f);

/// Plain 2x2 complex matrix, row-major: {u11, u12, u21, u22}.
struct ComplexMatrix2 {
    std::array<cplx, 4> m{};

    cplx operator()(int row, int col) const { return m[static_cast<std::size_t>(2 * row + col)]; }
    cplx& operator()(int row, int col) { return m[static_cast<std::size_t>(2 * row + col)]; }

    ComplexMatrix2 adjoint() const;
    ComplexMatrix2 operator*(const ComplexMatrix2& r) const;
    std::array<cplx, 2> apply(const std::array<cplx, 2>& v) const;
    cplx determinant() const;
    /// max |(M^dagger M - I)_ij|
    double unitarity_defect() const;
    static ComplexMatrix2 identity();
};

double max_abs_difference(const ComplexMatrix2& l, const ComplexMatrix2& r);

/// A 2x2 matrix known to be unitary (U^dagger U = I within 1e-12).
class UnitaryMatrix2 {
public:
    static constexpr double kTolerance = 1e-12;

    /// Throws DomainError if the matrix is not unitary within kTolerance.
    explicit UnitaryMatrix2(const ComplexMatrix2& m);
    static UnitaryMatrix2 identity();
    static UnitaryMatrix2 minus_identity();

    const ComplexMatrix2& matrix() const { return m_; }
    cplx operator()(int row, int col) const { return m_(row, col); }

private:
    ComplexMatrix2 m_;
};

struct Dirichlet {};
/// g(0) = e^{i alpha} g(pi), g'(0) = e^{i alpha} g'(pi); alpha stored reduced mod 2 pi.
struct QuasiPeriodic {
    explicit QuasiPeriodic(double a) : alpha(reduce_angle(a)) {}
    double alpha;
};
struct GeneralU {
    UnitaryMatrix2 u;
};

using BoundaryCondition = std::variant<Dirichlet, QuasiPeriodic, GeneralU>;

/// Ordered eigen-data. `vectors` holds discrete eigenvectors (quadrature
/// orthonormal), `modes` closed-form eigenfunctions; either may be empty.
struct Spectrum {
    std::vector<long> labels;
    std::vector<double> eigenvalues;
    std::vector<WaveFunction> vectors;
    std::vector<ExponentialSum> modes;

    std::size_t size() const { return eigenvalues.size(); }
    /// max |<v_i, v_j> - delta_ij| over the discrete vectors.
    double orthonormality_defect() const;
};

}  // namespace qtrap
