#pragma once

#include <string>

#include "qsa/bitcore.hpp"
#include "qsa/spectral.hpp"
#include "qsa/transport.hpp"

namespace qsa {

/// Grayscale n x n heatmap; the color scale is clipped to p1 +- 3 sigma_cell
/// so bias stripes stay visible regardless of overall dataset bias.
std::string svg_heatmap(const Heatmap& hm, const std::string& title);

/// Bulk eigenvalue histogram with the scaled MP density overlay and a
/// vertical marker at n/4 (clipped to the plotted range when off-scale).
std::string svg_spectrum(const SpectralResult& result, double gamma,
                         const std::string& title);

std::string svg_triangle(const TrianglePlot& plot, const std::string& title);

} // namespace qsa
