#pragma once

// Full-line position and momentum probabilities of confined states, moments
// and the uncertainty product. Convention:
//   f~(p) = (1/2 pi) int f(x) e^{-ipx} dx,  momentum density 2 pi |f~(p)|^2,
// so that int |f|^2 dx = int 2 pi |f~|^2 dp.

#include <span>
#include <vector>

#include "qtrap/core.hpp"

namespace qtrap::kinematics {

struct MomentumDistribution {
    static constexpr const char* kConvention = "density = 2 pi |f~(p)|^2, f~(p) = (1/2 pi) int f(x) e^{-ipx} dx";

    std::vector<double> p_grid;
    std::vector<double> density;
};

/// count uniformly spaced momenta on [-p_max, p_max] (count >= 2).
std::vector<double> symmetric_momenta(double p_max, std::size_t count);

/// f~(p) for f extended by zero outside its grid interval, by exact
/// integration of the piecewise-linear interpolant of the samples (endpoint
/// data included). Interior grids only.
std::vector<cplx> fourier_amplitudes(const WaveFunction& f, std::span<const double> p_grid);

/// Momentum density on p_grid; f must be normalized within 1e-8.
MomentumDistribution fourier_transform(const WaveFunction& f, const std::vector<double>& p_grid);

/// int_M |f|^2 dx; f must be normalized within 1e-8.
double probability_position(const WaveFunction& f, const Interval& m);

/// Trapezoid integral of the density over K (interpolated at the ends of K).
/// p_grid must be increasing; K outside the computed window is a DomainError.
double probability_momentum(const MomentumDistribution& dist, const Interval& k);

struct Uncertainty {
    double mean_q;
    double mean_p;
    double delta_q;
    double delta_p;
    double product;
};

/// Position moments by quadrature; <P> = Im int conj(f) f' (centered
/// differences) and <P^2> = int |f'|^2 on the piecewise-linear interpolant.
Uncertainty uncertainty_product(const WaveFunction& f);

}  // namespace qtrap::kinematics
