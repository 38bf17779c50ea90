#include "qsa/transport.hpp"

#include <algorithm>
#include <cmath>

namespace qsa {

TransportSample to_transport(const BitMatrix& bm) {
    if (bm.cols() > 63) throw InvalidArgument("to_transport: n must be <= 63");
    const uint32_t n = bm.cols();
    const double scale = std::ldexp(1.0, -static_cast<int>(n)); // 1 / 2^n
    TransportSample sample;
    sample.source = bm.meta().name;
    sample.n = n;
    sample.values.resize(bm.rows());
    for (size_t i = 0; i < bm.rows(); ++i) {
        // Row word keeps qubit 0 at bit 0; the embedding wants qubit 0 as MSB.
        const uint64_t w = bm.row_word(i);
        uint64_t value = 0;
        for (uint32_t j = 0; j < n; ++j) value |= ((w >> j) & 1u) << (n - 1 - j);
        sample.values[i] = static_cast<double>(value) * scale;
    }
    return sample;
}

namespace {

double w1_equal_sorted(const std::vector<double>& a, const std::vector<double>& b) {
    double sum = 0.0;
    for (size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
    return sum / static_cast<double>(a.size());
}

// Integral of |Fa^-1(q) - Fb^-1(q)| over q in (0,1) for sorted samples.
double w1_quantile_sorted(const std::vector<double>& a, const std::vector<double>& b) {
    const auto na = static_cast<double>(a.size());
    const auto nb = static_cast<double>(b.size());
    size_t ia = 0, ib = 0;
    double q = 0.0;
    double sum = 0.0;
    while (ia < a.size() && ib < b.size()) {
        const double qa = static_cast<double>(ia + 1) / na;
        const double qb = static_cast<double>(ib + 1) / nb;
        const double q_next = std::min(qa, qb);
        sum += (q_next - q) * std::abs(a[ia] - b[ib]);
        q = q_next;
        if (qa <= q_next) ++ia;
        if (qb <= q_next) ++ib;
    }
    return sum;
}

} // namespace

double wasserstein1(const TransportSample& a, const TransportSample& b) {
    if (a.values.empty() || b.values.empty())
        throw InvalidArgument("wasserstein1: empty sample");
    std::vector<double> sa = a.values;
    std::vector<double> sb = b.values;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    return sa.size() == sb.size() ? w1_equal_sorted(sa, sb) : w1_quantile_sorted(sa, sb);
}

std::vector<std::vector<double>> distance_matrix(const std::vector<TransportSample>& samples) {
    if (samples.size() < 2) throw InvalidArgument("distance_matrix: need at least 2 samples");
    const size_t count = samples.size();
    std::vector<std::vector<double>> matrix(count, std::vector<double>(count, 0.0));
    for (size_t i = 0; i < count; ++i) {
        for (size_t j = i + 1; j < count; ++j) {
            const double d = wasserstein1(samples[i], samples[j]);
            matrix[i][j] = d;
            matrix[j][i] = d;
        }
    }
    return matrix;
}

TrianglePlot triangle_embed(double d_ab, double d_ac, double d_bc) {
    if (d_ab < 0.0 || d_ac < 0.0 || d_bc < 0.0)
        throw InvalidArgument("triangle_embed: distances must be >= 0");
    TrianglePlot plot;
    plot.labels = {"A", "B", "C"};
    plot.edge_lengths = {d_ab, d_ac, d_bc};
    plot.coordinates[0] = {0.0, 0.0};
    plot.coordinates[1] = {d_ab, 0.0};
    if (d_ab == 0.0) {
        if (std::abs(d_ac - d_bc) > 1e-9)
            throw InvalidArgument("triangle_embed: d_ab=0 requires d_ac == d_bc");
        plot.coordinates[2] = {d_ac, 0.0};
        plot.degenerate = true;
        return plot;
    }
    const double x = (d_ab * d_ab + d_ac * d_ac - d_bc * d_bc) / (2.0 * d_ab);
    const double y2 = d_ac * d_ac - x * x;
    double y = 0.0;
    if (y2 > 1e-9) {
        y = std::sqrt(y2);
    } else {
        plot.degenerate = true;
        if (y2 > 0.0) y = std::sqrt(y2);
    }
    plot.coordinates[2] = {x, y};
    return plot;
}

} // namespace qsa
