#include "qsa/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qsa {

namespace {

std::string escape_xml(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string svg_open(double width, double height) {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    return os.str();
}

void add_title(std::ostringstream& os, const std::string& title, double x, double y) {
    os << "  <text x=\"" << x << "\" y=\"" << y
       << "\" font-family=\"sans-serif\" font-size=\"14\">" << escape_xml(title) << "</text>\n";
}

} // namespace

std::string svg_heatmap(const Heatmap& hm, const std::string& title) {
    const uint32_t n = hm.n;
    const double cell = std::max(4.0, 512.0 / n);
    const double margin = 40.0;
    const double width = margin * 2 + cell * n;
    const double height = margin * 2 + cell * n + 20.0;
    const double sigma_cell =
        std::sqrt(std::max(hm.p1 * (1.0 - hm.p1), 1e-12) /
                  std::max<double>(1.0, static_cast<double>(hm.blocks_used)));
    const double lo = hm.p1 - 3.0 * sigma_cell;
    const double hi = hm.p1 + 3.0 * sigma_cell;

    std::ostringstream os;
    os << svg_open(width, height);
    add_title(os, title, margin, 24.0);
    for (uint32_t r = 0; r < n; ++r) {
        for (uint32_t c = 0; c < n; ++c) {
            const double v = std::clamp((hm.cell(r, c) - lo) / (hi - lo), 0.0, 1.0);
            const int gray = static_cast<int>(std::lround(v * 255.0));
            os << "  <rect x=\"" << margin + c * cell << "\" y=\"" << margin + r * cell
               << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\"rgb(" << gray
               << ',' << gray << ',' << gray << ")\"/>\n";
        }
    }
    os << "  <text x=\"" << margin << "\" y=\"" << margin * 1.5 + cell * n
       << "\" font-family=\"sans-serif\" font-size=\"12\">p1=" << hm.p1 << " scale=[" << lo
       << ',' << hi << "] blocks=" << hm.blocks_used << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

std::string svg_spectrum(const SpectralResult& result, double gamma, const std::string& title) {
    const double width = 640.0, height = 420.0;
    const double ml = 50.0, mr = 20.0, mt = 40.0, mb = 40.0;
    const double pw = width - ml - mr, ph = height - mt - mb;
    const Histogram& h = result.bulk_histogram;
    const double x_lo = h.edges.front();
    const double x_hi = h.edges.back();
    size_t max_count = 1;
    for (size_t c : h.counts) max_count = std::max(max_count, c);

    auto px = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * pw; };
    auto py = [&](double y) { return mt + ph - y / static_cast<double>(max_count) * ph; };

    std::ostringstream os;
    os << svg_open(width, height);
    add_title(os, title, ml, 24.0);
    for (size_t i = 0; i < h.counts.size(); ++i) {
        const double x0 = px(h.edges[i]);
        const double x1 = px(h.edges[i + 1]);
        const double y = py(static_cast<double>(h.counts[i]));
        os << "  <rect x=\"" << x0 << "\" y=\"" << y << "\" width=\"" << x1 - x0
           << "\" height=\"" << mt + ph - y << "\" fill=\"steelblue\"/>\n";
    }
    // MP density of (1/4k) Y^T Y: eigenvalues scaled by 1/4, so plot 4*rho(4x).
    const MpParams params{1.0, gamma};
    const double bin_width = (x_hi - x_lo) / static_cast<double>(h.counts.size());
    const double norm = static_cast<double>(h.total()) * bin_width;
    os << "  <polyline fill=\"none\" stroke=\"crimson\" stroke-width=\"1.5\" points=\"";
    constexpr int kSamples = 256;
    for (int i = 0; i <= kSamples; ++i) {
        const double x = x_lo + (x_hi - x_lo) * i / kSamples;
        const double density = 4.0 * mp_density(4.0 * x, params) * norm;
        os << px(x) << ',' << py(std::min(density, static_cast<double>(max_count))) << ' ';
    }
    os << "\"/>\n";
    // n/4 outlier reference marker
    const double marker = std::min(static_cast<double>(result.n) / 4.0, x_hi);
    os << "  <line x1=\"" << px(marker) << "\" y1=\"" << mt << "\" x2=\"" << px(marker)
       << "\" y2=\"" << mt + ph << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
    os << "  <text x=\"" << ml << "\" y=\"" << height - 12.0
       << "\" font-family=\"sans-serif\" font-size=\"12\">mean_top=" << result.mean_top
       << " signed_distance=" << result.signed_distance << " blocks=" << result.blocks
       << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

std::string svg_triangle(const TrianglePlot& plot, const std::string& title) {
    const double width = 480.0, height = 420.0;
    double x_lo = 0.0, x_hi = 0.0, y_lo = 0.0, y_hi = 0.0;
    for (const auto& c : plot.coordinates) {
        x_lo = std::min(x_lo, c[0]);
        x_hi = std::max(x_hi, c[0]);
        y_lo = std::min(y_lo, c[1]);
        y_hi = std::max(y_hi, c[1]);
    }
    const double span = std::max({x_hi - x_lo, y_hi - y_lo, 1e-12});
    const double margin = 60.0;
    const double scale = (std::min(width, height) - 2 * margin) / span;
    auto px = [&](double x) { return margin + (x - x_lo) * scale; };
    auto py = [&](double y) { return height - margin - (y - y_lo) * scale; };

    std::ostringstream os;
    os << svg_open(width, height);
    add_title(os, title, margin, 24.0);
    os << "  <polygon fill=\"none\" stroke=\"black\" points=\"";
    for (const auto& c : plot.coordinates) os << px(c[0]) << ',' << py(c[1]) << ' ';
    os << "\"/>\n";
    static constexpr const char* kColors[3] = {"green", "crimson", "royalblue"};
    for (size_t i = 0; i < 3; ++i) {
        const auto& c = plot.coordinates[i];
        os << "  <circle cx=\"" << px(c[0]) << "\" cy=\"" << py(c[1])
           << "\" r=\"4\" fill=\"" << kColors[i] << "\"/>\n";
        os << "  <text x=\"" << px(c[0]) + 6.0 << "\" y=\"" << py(c[1]) - 6.0
           << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape_xml(plot.labels[i])
           << "</text>\n";
    }
    if (plot.degenerate)
        os << "  <text x=\"" << margin << "\" y=\"" << height - 12.0
           << "\" font-family=\"sans-serif\" font-size=\"12\">degenerate (collinear)</text>\n";
    os << "</svg>\n";
    return os.str();
}

} // namespace qsa
