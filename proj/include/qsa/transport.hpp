#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qsa/bitcore.hpp"

namespace qsa {

/// A dataset embedded on the unit interval: each bit-string becomes its
/// integer value (qubit 0 = MSB) divided by 2^n.
struct TransportSample {
    std::vector<double> values; // each in [0,1)
    std::string source;
    uint32_t n = 0;
};

TransportSample to_transport(const BitMatrix& bm);

/// 1-Wasserstein distance between two empirical distributions. Equal sizes
/// reduce to sorted matching; unequal sizes use the exact piecewise-constant
/// quantile functions.
double wasserstein1(const TransportSample& a, const TransportSample& b);

/// Symmetric pairwise W1 matrix with zero diagonal.
std::vector<std::vector<double>> distance_matrix(const std::vector<TransportSample>& samples);

struct TrianglePlot {
    std::array<std::string, 3> labels;
    std::array<std::array<double, 2>, 3> coordinates; // A at origin, B on +x axis
    std::array<double, 3> edge_lengths;               // d_ab, d_ac, d_bc
    bool degenerate = false;                          // triangle inequality at/past boundary
};

TrianglePlot triangle_embed(double d_ab, double d_ac, double d_bc);

} // namespace qsa
