#include "jitterlink/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "jitterlink/error.hpp"

namespace jitterlink {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

const char* const kPalette[] = {"#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf", "#e377c2"};

std::string escape(const std::string& text) {
    std::string out;
    for (const char c : text) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fixed(double v, int digits = 2) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

}  // namespace

void write_plot_svg(const std::filesystem::path& path, const GainHistogram* hist,
                    const std::vector<Curve>& curves, const PlotLabels& labels) {
    double x_lo = std::numeric_limits<double>::infinity();
    double x_hi = -x_lo;
    double y_hi = 0.0;
    if (hist && !hist->densities.empty()) {
        x_lo = hist->bin_edges.front();
        x_hi = hist->bin_edges.back();
        y_hi = *std::max_element(hist->densities.begin(), hist->densities.end());
    }
    for (const auto& c : curves) {
        for (std::size_t i = 0; i < c.x.size(); ++i) {
            if (!std::isfinite(c.y[i])) continue;
            x_lo = std::min(x_lo, c.x[i]);
            x_hi = std::max(x_hi, c.x[i]);
            y_hi = std::max(y_hi, c.y[i]);
        }
    }
    if (!std::isfinite(x_lo) || !(x_hi > x_lo)) {
        x_lo = 0.0;
        x_hi = 1.0;
    }
    if (!(y_hi > 0.0)) y_hi = 1.0;
    y_hi *= 1.05;

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
    auto sy = [&](double y) { return kTop + plot_h - std::clamp(y / y_hi, 0.0, 1.0) * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
        << escape(labels.title) << "</text>\n";

    if (hist) {
        svg << "<g fill=\"#4a7fc1\" fill-opacity=\"0.75\">\n";
        for (std::size_t i = 0; i < hist->densities.size(); ++i) {
            const double x0 = sx(hist->bin_edges[i]);
            const double x1 = sx(hist->bin_edges[i + 1]);
            const double y = sy(hist->densities[i]);
            svg << "<rect x=\"" << fixed(x0) << "\" y=\"" << fixed(y) << "\" width=\"" << fixed(std::max(x1 - x0, 0.1))
                << "\" height=\"" << fixed(kTop + plot_h - y) << "\"/>\n";
        }
        svg << "</g>\n";
    }

    for (std::size_t c = 0; c < curves.size(); ++c) {
        const auto& curve = curves[c];
        svg << "<polyline fill=\"none\" stroke-width=\"1.6\" stroke=\"" << kPalette[c % std::size(kPalette)]
            << "\" points=\"";
        for (std::size_t i = 0; i < curve.x.size(); ++i) {
            if (!std::isfinite(curve.y[i])) continue;
            svg << fixed(sx(curve.x[i])) << ',' << fixed(sy(curve.y[i])) << ' ';
        }
        svg << "\"/>\n";
        const double ly = kTop + 16.0 * static_cast<double>(c + 1);
        svg << "<line x1=\"" << kWidth - 230 << "\" y1=\"" << ly - 4 << "\" x2=\"" << kWidth - 205 << "\" y2=\"" << ly - 4
            << "\" stroke-width=\"2\" stroke=\"" << kPalette[c % std::size(kPalette)] << "\"/>\n"
            << "<text x=\"" << kWidth - 200 << "\" y=\"" << ly << "\">" << escape(curve.label) << "</text>\n";
    }

    // Axes with five ticks each.
    svg << "<g stroke=\"black\" fill=\"none\">\n"
        << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w << "\" y2=\"" << kTop + plot_h << "\"/>\n"
        << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + plot_h << "\"/>\n"
        << "</g>\n";
    for (int i = 0; i <= 5; ++i) {
        const double fx = x_lo + (x_hi - x_lo) * i / 5.0;
        const double fy = y_hi * i / 5.0;
        svg << "<text x=\"" << fixed(sx(fx)) << "\" y=\"" << kTop + plot_h + 16 << "\" text-anchor=\"middle\">"
            << fixed(fx, 3) << "</text>\n"
            << "<text x=\"" << kLeft - 6 << "\" y=\"" << fixed(sy(fy) + 4) << "\" text-anchor=\"end\">" << fixed(fy, 2)
            << "</text>\n";
    }
    svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">"
        << escape(labels.x_label) << "</text>\n"
        << "<text transform=\"translate(16," << kTop + plot_h / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
        << escape(labels.y_label) << "</text>\n"
        << "</svg>\n";

    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << svg.str();
    if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace jitterlink
