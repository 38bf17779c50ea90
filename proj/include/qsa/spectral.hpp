#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsa/bitcore.hpp"

namespace qsa {

/// Parameters of the Marchenko-Pastur density: variance sigma^2 and
/// rectangular ratio gamma = n/k.
struct MpParams {
    double sigma2 = 1.0;
    double gamma = 0.5;

    double lambda_minus() const;
    double lambda_plus() const;
};

/// MP density at lambda; zero outside the support [lambda-, lambda+].
double mp_density(double lambda, const MpParams& params);

struct Histogram {
    std::vector<double> edges;  // bins+1 ascending edges
    std::vector<size_t> counts; // bins entries

    size_t total() const;
};

Histogram make_histogram(const std::vector<double>& values, size_t bins, double lo, double hi);

/// Eigenvalues of (1/k) X^T X for a k x n binary block, ascending.
/// Round-off negatives are clamped to zero.
std::vector<double> gram_eigenvalues(const BlockView& block);

/// Max element-wise residual of the Wishart split
/// (1/k) X^T X = (1/4k)(Y^T Y + Y^T J + J^T Y + J^T J), Y = 2X - J.
/// Both sides are evaluated independently; exact identity up to round-off.
double wishart_decomposition_check(const BlockView& block);

struct SpectralResult {
    uint32_t n = 0;
    size_t k = 0;
    size_t blocks = 0;
    std::vector<double> outliers;         // largest eigenvalue per block
    std::vector<double> bulk_eigenvalues; // all non-top eigenvalues
    Histogram bulk_histogram;
    double mean_top = 0.0;
    double signed_distance = 0.0; // mean_top - n/4

    /// Fraction of bulk (non-top) eigenvalues <= cutoff.
    double bulk_fraction_below(double cutoff) const;
};

SpectralResult empirical_spectrum(const BitMatrix& bm, double gamma = 0.5, size_t bins = 100);

enum class CurveMode { ByQubits, ByCycles };

struct DistanceRow {
    std::string name;
    uint32_t n = 0;
    uint32_t m = 0;
    double signed_distance = 0.0;
};

/// One signed outlier distance per dataset, sorted by n or by m.
std::vector<DistanceRow> distance_curve(const std::vector<const BitMatrix*>& datasets,
                                        CurveMode mode, double gamma = 0.5);

} // namespace qsa
