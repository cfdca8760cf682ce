#pragma once

// Exactly solvable models: quasi-momentum family p_alpha and its square
// H_alpha on [0, pi], the infinite well, the Calogero oscillator
// -d^2/dx^2 + x^2 + gamma/x^2, the centrifugal ground state x^n and the
// multitrap ground state sin(qx). These are the oracles for the discrete solver.

#include <cstddef>
#include <vector>

#include "qtrap/core.hpp"

namespace qtrap::closed_form {

/// Inclusive integer label range [first, last].
struct IntegerRange {
    long first;
    long last;
};

class CalogeroParams {
public:
    /// Throws DomainError unless gamma > -1/4.
    explicit CalogeroParams(double gamma);

    double gamma() const { return gamma_; }
    /// Laguerre order (1/2) sqrt(1 + 4 gamma).
    double laguerre_order() const { return laguerre_order_; }
    /// Vanishing exponent at the origin, laguerre_order + 1/2.
    double origin_exponent() const { return laguerre_order_ + 0.5; }

private:
    double gamma_;
    double laguerre_order_;
};

class MultitrapParams {
public:
    explicit MultitrapParams(double q);
    double q() const { return q_; }
    /// Barrier positions k*pi/q inside the closed interval.
    std::vector<double> nodes_in(const Interval& interval) const;

private:
    double q_;
};

/// e_n^alpha(x) = pi^{-1/2} exp(i (2n + alpha/pi) x).
///
/// These satisfy g(pi) = e^{i alpha} g(0); in the g(0) = e^{i alpha'} g(pi)
/// convention of the boundary-condition layer they belong to alpha' = 2 pi - alpha.
ExponentialSum quasi_momentum_mode(double alpha, long n);

/// Eigenvalues 2n + alpha/pi with modes e_n^alpha, in label order.
Spectrum momentum_spectrum(double alpha, IntegerRange labels);

/// Eigenvalues (2n + alpha/pi)^2 with modes e_n^alpha, sorted ascending
/// (ties by label). For alpha = 0 every nonzero level is doubly degenerate.
Spectrum h_alpha_spectrum(double alpha, IntegerRange labels);

/// sqrt(2/pi) sin((n+1) x) on [0, pi].
ExponentialSum well_mode(long n);

/// E_n = (n+1)^2, n = 0..n_max, with well modes.
Spectrum infinite_well_spectrum(std::size_t n_max);

/// Generalized Laguerre polynomial L_n^order(y) by three-term recurrence.
double laguerre(std::size_t n, double order, double y);

/// E_n = 4n + 2 + sqrt(1 + 4 gamma), n = 0..n_max, for one half line. Each
/// level is doubly degenerate on the full line (one copy on each side of 0).
Spectrum calogero_spectrum(const CalogeroParams& params, std::size_t n_max);

/// Calogero eigenfunction x^{a+1/2} exp(-x^2/2) L_n^a(x^2) (unnormalized),
/// supported on one side of the origin.
class CalogeroMode {
public:
    enum class Side { Positive, Negative };

    CalogeroMode(CalogeroParams params, std::size_t n, Side side = Side::Positive);

    double energy() const;
    double value(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;
    /// Samples on the grid (real values), zero on the opposite side.
    WaveFunction sample(const Grid& grid) const;

private:
    // f(r), f'(r), f''(r) for r > 0 on the positive branch.
    void branch(double r, double& f, double& df, double& d2f) const;

    CalogeroParams params_;
    std::size_t n_;
    Side side_;
};

/// n(n-1)/x^2: the coupling for which x^n is a zero-energy solution.
double centrifugal_coupling(int n);

/// Samples of phi(x) = x^n on a grid inside [0, inf), flagged generalized.
WaveFunction centrifugal_ground_state(int n, const Grid& grid);

/// Samples of sin(qx), flagged generalized (not square integrable on the line).
WaveFunction multitrap_ground_state(const MultitrapParams& params, const Grid& grid);

}  // namespace qtrap::closed_form
