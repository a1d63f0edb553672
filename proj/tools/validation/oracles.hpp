#pragma once

#include "cvsheet/field2d.hpp"
#include "cvsheet/grid.hpp"

#include <cstdint>
#include <vector>

// Reference computations that do not go through the spectral or elliptic machinery of the library.
namespace cvs::oracle {

/// Inverse Fourier transform of (1 + xi^2)^{-order/2} on the line, for 1 < order < 2, at distance r >= 0.
double bessel_potential(double order, double r);

/// <d1>^s h(x) for the Gaussian h = exp(-x^2 / width^2), 0 < s < 1, as the convolution of the kernel of
/// order 2 - s with (1 - d1^2) h, integrated by adaptive quadrature.
double bessel_derivative_of_gaussian(double x, double width, double s);

/// Neutral tangential-velocity jump of two flat layers of depths (h_l, h_u) carrying unit fields,
/// from the dispersion relation written with coth(k h) symbols.
double coth_neutral_jump(double k, double depth_lower, double depth_upper);

/// Localized random band-limited profile: a Gaussian envelope of the given width times a random
/// combination of the first `modes` Fourier modes of the grid period, zero mean. The profile
/// depends on (seed, index, length) only, never on the point count.
std::vector<double> random_packet(const Grid1D& grid, std::uint64_t seed, std::uint64_t index, int modes,
                                  double width);

/// Random periodic profile made of the first `modes` Fourier modes with amplitudes decaying like 1/m.
std::vector<double> random_modes(const Grid1D& grid, std::uint64_t seed, std::uint64_t index, int modes,
                                 double amplitude);

/// Each row of `field` moved so that out(x1) = field(x1 + shift), by exact Fourier phase factors.
Field2D shift_rows(const Grid1D& grid, const Field2D& field, double shift);
std::vector<double> shift_line(const Grid1D& grid, std::span<const double> line, double shift);

}  // namespace cvs::oracle
