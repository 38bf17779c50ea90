#include "qsa/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

namespace qsa {

double MpParams::lambda_minus() const {
    const double s = 1.0 - std::sqrt(gamma);
    return sigma2 * s * s;
}

double MpParams::lambda_plus() const {
    const double s = 1.0 + std::sqrt(gamma);
    return sigma2 * s * s;
}

double mp_density(double lambda, const MpParams& params) {
    if (params.sigma2 <= 0.0) throw InvalidArgument("mp_density: sigma2 must be > 0");
    if (params.gamma <= 0.0 || params.gamma > 1.0)
        throw InvalidArgument("mp_density: gamma must be in (0,1]");
    const double lo = params.lambda_minus();
    const double hi = params.lambda_plus();
    if (lambda <= lo || lambda >= hi) return 0.0;
    const double num = std::sqrt((hi - lambda) * (lambda - lo));
    return num / (2.0 * std::numbers::pi * params.sigma2 * params.gamma * lambda);
}

size_t Histogram::total() const {
    size_t t = 0;
    for (size_t c : counts) t += c;
    return t;
}

Histogram make_histogram(const std::vector<double>& values, size_t bins, double lo, double hi) {
    if (bins < 1 || !(hi > lo)) throw InvalidArgument("make_histogram: bad bin layout");
    Histogram h;
    h.edges.resize(bins + 1);
    for (size_t i = 0; i <= bins; ++i)
        h.edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
    h.counts.assign(bins, 0);
    const double scale = static_cast<double>(bins) / (hi - lo);
    for (double v : values) {
        if (v < lo || v > hi) continue;
        auto idx = static_cast<size_t>((v - lo) * scale);
        if (idx >= bins) idx = bins - 1;
        h.counts[idx]++;
    }
    return h;
}

namespace {

// Column-major bitset view of a block: word w of column j holds rows 64w..64w+63.
std::vector<uint64_t> pack_columns(const BlockView& block, size_t words_per_col) {
    const uint32_t n = block.cols();
    std::vector<uint64_t> cols(static_cast<size_t>(n) * words_per_col, 0);
    for (size_t i = 0; i < block.rows; ++i) {
        uint64_t w = block.row_word(i);
        const size_t word = i / 64;
        const uint64_t bit = uint64_t{1} << (i % 64);
        while (w) {
            const auto j = static_cast<uint32_t>(std::countr_zero(w));
            cols[j * words_per_col + word] |= bit;
            w &= w - 1;
        }
    }
    return cols;
}

Eigen::MatrixXd gram_matrix(const BlockView& block) {
    const uint32_t n = block.cols();
    const size_t k = block.rows;
    const size_t wpc = (k + 63) / 64;
    const auto cols = pack_columns(block, wpc);
    Eigen::MatrixXd g(n, n);
    for (uint32_t a = 0; a < n; ++a) {
        for (uint32_t b = a; b < n; ++b) {
            uint64_t ones = 0;
            for (size_t w = 0; w < wpc; ++w)
                ones += std::popcount(cols[a * wpc + w] & cols[b * wpc + w]);
            const double v = static_cast<double>(ones) / static_cast<double>(k);
            g(a, b) = v;
            g(b, a) = v;
        }
    }
    return g;
}

} // namespace

std::vector<double> gram_eigenvalues(const BlockView& block) {
    if (block.rows == 0) throw InvalidArgument("gram_eigenvalues: empty block");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram_matrix(block),
                                                          Eigen::EigenvaluesOnly);
    std::vector<double> ev(solver.eigenvalues().data(),
                           solver.eigenvalues().data() + block.cols());
    for (double& v : ev)
        if (v < 0.0) v = 0.0;
    std::sort(ev.begin(), ev.end());
    return ev;
}

double wishart_decomposition_check(const BlockView& block) {
    const uint32_t n = block.cols();
    const auto k = static_cast<Eigen::Index>(block.rows);
    Eigen::MatrixXd x(k, n);
    for (Eigen::Index i = 0; i < k; ++i)
        for (uint32_t j = 0; j < n; ++j) x(i, j) = block.bit(static_cast<size_t>(i), j);
    const Eigen::MatrixXd j_mat = Eigen::MatrixXd::Ones(k, n);
    const Eigen::MatrixXd y = 2.0 * x - j_mat;
    const Eigen::MatrixXd lhs = (x.transpose() * x) / static_cast<double>(k);
    const Eigen::MatrixXd rhs = (y.transpose() * y + y.transpose() * j_mat +
                                 j_mat.transpose() * y + j_mat.transpose() * j_mat) /
                                (4.0 * static_cast<double>(k));
    return (lhs - rhs).cwiseAbs().maxCoeff();
}

SpectralResult empirical_spectrum(const BitMatrix& bm, double gamma, size_t bins) {
    if (gamma <= 0.0 || gamma > 1.0)
        throw InvalidArgument("empirical_spectrum: gamma must be in (0,1]");
    const uint32_t n = bm.cols();
    const auto k = static_cast<size_t>(std::llround(n / gamma));
    const auto blocks = slice_blocks(bm, k);

    SpectralResult result;
    result.n = n;
    result.k = k;
    result.blocks = blocks.size();
    result.outliers.reserve(blocks.size());
    result.bulk_eigenvalues.reserve(blocks.size() * (n - 1));
    for (const auto& block : blocks) {
        const auto ev = gram_eigenvalues(block);
        result.outliers.push_back(ev.back());
        result.bulk_eigenvalues.insert(result.bulk_eigenvalues.end(), ev.begin(), ev.end() - 1);
    }
    double sum = 0.0;
    for (double v : result.outliers) sum += v;
    result.mean_top = sum / static_cast<double>(result.outliers.size());
    result.signed_distance = result.mean_top - static_cast<double>(n) / 4.0;

    double hi = 0.0;
    for (double v : result.bulk_eigenvalues) hi = std::max(hi, v);
    if (hi <= 0.0) hi = 1.0;
    result.bulk_histogram = make_histogram(result.bulk_eigenvalues, bins, 0.0, hi);
    return result;
}

double SpectralResult::bulk_fraction_below(double cutoff) const {
    if (bulk_eigenvalues.empty()) return 0.0;
    size_t count = 0;
    for (double v : bulk_eigenvalues)
        if (v <= cutoff) ++count;
    return static_cast<double>(count) / static_cast<double>(bulk_eigenvalues.size());
}

std::vector<DistanceRow> distance_curve(const std::vector<const BitMatrix*>& datasets,
                                        CurveMode mode, double gamma) {
    std::vector<DistanceRow> rows;
    rows.reserve(datasets.size());
    for (const BitMatrix* bm : datasets) {
        const auto spectrum = empirical_spectrum(*bm, gamma);
        rows.push_back({bm->meta().name, bm->cols(), bm->meta().cycle, spectrum.signed_distance});
    }
    std::stable_sort(rows.begin(), rows.end(), [mode](const DistanceRow& a, const DistanceRow& b) {
        return mode == CurveMode::ByQubits ? a.n < b.n : a.m < b.m;
    });
    return rows;
}

} // namespace qsa
