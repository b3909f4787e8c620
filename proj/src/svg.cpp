#include "specal/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "specal/errors.hpp"

namespace specal {
namespace svg {

namespace {

/// Fixed two-decimal pixel coordinates keep files small and byte-stable.
std::string px_fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

/// Round tick step: 1/2/5 x 10^k covering the span with ~6 ticks.
double tick_step(double span) {
    if (!(span > 0)) return 1.0;
    const double raw = span / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double frac = raw / mag;
    if (frac <= 1.0) return mag;
    if (frac <= 2.0) return 2.0 * mag;
    if (frac <= 5.0) return 5.0 * mag;
    return 10.0 * mag;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

Document::Document(double width, double height) : width_(width), height_(height) {}

void Document::line(double x1, double y1, double x2, double y2, const std::string& stroke,
                    double stroke_width) {
    std::ostringstream e;
    e << "<line x1=\"" << px_fmt(x1) << "\" y1=\"" << px_fmt(y1) << "\" x2=\"" << px_fmt(x2)
      << "\" y2=\"" << px_fmt(y2) << "\" stroke=\"" << stroke << "\" stroke-width=\""
      << px_fmt(stroke_width) << "\"/>";
    elements_.push_back(e.str());
}

void Document::polyline(const std::vector<std::pair<double, double>>& pts,
                        const std::string& stroke, double stroke_width, double opacity) {
    std::ostringstream e;
    e << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\""
      << px_fmt(stroke_width) << "\"";
    if (opacity < 1.0) e << " stroke-opacity=\"" << px_fmt(opacity) << "\"";
    e << " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) e << ' ';
        e << px_fmt(pts[i].first) << ',' << px_fmt(pts[i].second);
    }
    e << "\"/>";
    elements_.push_back(e.str());
}

void Document::circle(double cx, double cy, double r, const std::string& fill, double opacity) {
    std::ostringstream e;
    e << "<circle cx=\"" << px_fmt(cx) << "\" cy=\"" << px_fmt(cy) << "\" r=\"" << px_fmt(r)
      << "\" fill=\"" << fill << "\"";
    if (opacity < 1.0) e << " fill-opacity=\"" << px_fmt(opacity) << "\"";
    e << "/>";
    elements_.push_back(e.str());
}

void Document::rect(double x, double y, double w, double h, const std::string& fill,
                    double opacity) {
    std::ostringstream e;
    e << "<rect x=\"" << px_fmt(x) << "\" y=\"" << px_fmt(y) << "\" width=\"" << px_fmt(w)
      << "\" height=\"" << px_fmt(h) << "\" fill=\"" << fill << "\"";
    if (opacity < 1.0) e << " fill-opacity=\"" << px_fmt(opacity) << "\"";
    e << "/>";
    elements_.push_back(e.str());
}

void Document::text(double x, double y, const std::string& s, double size,
                    const std::string& anchor) {
    std::ostringstream e;
    e << "<text x=\"" << px_fmt(x) << "\" y=\"" << px_fmt(y) << "\" font-family=\"sans-serif\""
      << " font-size=\"" << px_fmt(size) << "\" text-anchor=\"" << anchor << "\">" << esc(s)
      << "</text>";
    elements_.push_back(e.str());
}

std::string Document::str() const {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px_fmt(width_)
        << "\" height=\"" << px_fmt(height_) << "\" viewBox=\"0 0 " << px_fmt(width_) << ' '
        << px_fmt(height_) << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << px_fmt(width_) << "\" height=\""
        << px_fmt(height_) << "\" fill=\"white\"/>\n";
    for (const auto& e : elements_) out << e << "\n";
    out << "</svg>\n";
    return out.str();
}

void Document::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out << str();
}

double Axes::px(double x) const {
    return left + (x - x_min) / (x_max - x_min) * (width - left - right);
}

double Axes::py(double y) const {
    return height - bottom - (y - y_min) / (y_max - y_min) * (height - top - bottom);
}

void Axes::frame(Document& doc) const {
    doc.line(left, top, left, height - bottom, "black");
    doc.line(left, height - bottom, width - right, height - bottom, "black");
    const double xs = tick_step(x_max - x_min);
    for (double t = std::ceil(x_min / xs) * xs; t <= x_max + 1e-9; t += xs) {
        doc.line(px(t), height - bottom, px(t), height - bottom + 4, "black");
        doc.text(px(t), height - bottom + 16, tick_label(t), 10, "middle");
    }
    const double ys = tick_step(y_max - y_min);
    for (double t = std::ceil(y_min / ys) * ys; t <= y_max + 1e-9; t += ys) {
        doc.line(left - 4, py(t), left, py(t), "black");
        doc.text(left - 7, py(t) + 3.5, tick_label(t), 10, "end");
    }
    if (!x_label.empty())
        doc.text((left + width - right) / 2, height - 8, x_label, 11, "middle");
    if (!y_label.empty()) doc.text(12, top - 6 < 12 ? 12 : top - 6, y_label, 11, "start");
    if (!title.empty()) doc.text((left + width - right) / 2, 14, title, 12, "middle");
}

std::string heat_color(double t) {
    t = std::clamp(t, 0.0, 1.0);
    const int r = static_cast<int>(std::lround(40 + 200 * t));
    const int g = static_cast<int>(std::lround(60 + 40 * (1 - std::abs(2 * t - 1))));
    const int b = static_cast<int>(std::lround(40 + 200 * (1.0 - t)));
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

namespace {

void span_of(const std::vector<double>& v, double* lo, double* hi) {
    *lo = *std::min_element(v.begin(), v.end());
    *hi = *std::max_element(v.begin(), v.end());
    if (!(*hi > *lo)) *hi = *lo + 1.0;
}

}  // namespace

void line_chart(const std::filesystem::path& path, const std::vector<Series>& series,
                const std::string& title, const std::string& x_label,
                const std::string& y_label) {
    Axes ax;
    ax.title = title;
    ax.x_label = x_label;
    ax.y_label = y_label;
    double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            x_lo = std::min(x_lo, x);
            x_hi = std::max(x_hi, x);
            y_lo = std::min(y_lo, y);
            y_hi = std::max(y_hi, y);
        }
    }
    if (!(x_hi > x_lo)) x_hi = x_lo + 1;
    if (!(y_hi > y_lo)) y_hi = y_lo + 1;
    const double pad = 0.05 * (y_hi - y_lo);
    ax.x_min = x_lo;
    ax.x_max = x_hi;
    ax.y_min = y_lo - pad;
    ax.y_max = y_hi + pad;

    Document doc(ax.width, ax.height);
    ax.frame(doc);
    double legend_y = ax.top + 12;
    for (const auto& s : series) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& [x, y] : s.points) pts.emplace_back(ax.px(x), ax.py(y));
        doc.polyline(pts, s.color, 1.6);
        if (!s.label.empty()) {
            doc.line(ax.width - ax.right - 120, legend_y - 4, ax.width - ax.right - 100,
                     legend_y - 4, s.color, 2.0);
            doc.text(ax.width - ax.right - 95, legend_y, s.label, 10);
            legend_y += 14;
        }
    }
    doc.save(path);
}

void spectra_overlay(const std::filesystem::path& path, const std::vector<double>& axis,
                     const std::vector<std::vector<double>>& rows,
                     const std::vector<double>& targets, const std::string& title) {
    if (rows.empty()) throw DataError("spectra overlay: no rows");
    Axes ax;
    ax.title = title;
    ax.x_label = "wavelength (nm)";
    ax.y_label = "signal";
    double y_lo = 1e300, y_hi = -1e300;
    for (const auto& r : rows) {
        for (double v : r) {
            y_lo = std::min(y_lo, v);
            y_hi = std::max(y_hi, v);
        }
    }
    if (!(y_hi > y_lo)) y_hi = y_lo + 1;
    ax.x_min = axis.front();
    ax.x_max = axis.back();
    ax.y_min = y_lo;
    ax.y_max = y_hi;

    double t_lo, t_hi;
    span_of(targets, &t_lo, &t_hi);

    Document doc(ax.width, ax.height);
    ax.frame(doc);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::vector<std::pair<double, double>> pts;
        pts.reserve(axis.size());
        for (std::size_t j = 0; j < axis.size(); ++j)
            pts.emplace_back(ax.px(axis[j]), ax.py(rows[i][j]));
        doc.polyline(pts, heat_color((targets[i] - t_lo) / (t_hi - t_lo)), 0.8, 0.55);
    }
    doc.save(path);
}

void scatter_fit(const std::filesystem::path& path, const std::vector<double>& actual,
                 const std::vector<double>& predicted, const std::string& title) {
    if (actual.size() != predicted.size() || actual.empty())
        throw DataError("scatter: actual/predicted size mismatch");
    Axes ax;
    ax.title = title;
    ax.x_label = "actual";
    ax.y_label = "predicted";
    double lo = 1e300, hi = -1e300;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        lo = std::min({lo, actual[i], predicted[i]});
        hi = std::max({hi, actual[i], predicted[i]});
    }
    if (!(hi > lo)) hi = lo + 1;
    const double pad = 0.05 * (hi - lo);
    ax.x_min = ax.y_min = lo - pad;
    ax.x_max = ax.y_max = hi + pad;

    Document doc(ax.width, ax.height);
    ax.frame(doc);
    doc.line(ax.px(lo), ax.py(lo), ax.px(hi), ax.py(hi), "#888888", 1.0);
    for (std::size_t i = 0; i < actual.size(); ++i)
        doc.circle(ax.px(actual[i]), ax.py(predicted[i]), 2.4, "#1f5fbf", 0.75);
    doc.save(path);
}

void error_histogram(const std::filesystem::path& path, const std::vector<double>& actual,
                     const std::vector<double>& predicted, int bins,
                     const std::string& title) {
    if (actual.size() != predicted.size() || actual.empty())
        throw DataError("histogram: actual/predicted size mismatch");
    if (bins < 1) throw DataError("histogram: bins must be positive");
    std::vector<double> err(actual.size());
    for (std::size_t i = 0; i < actual.size(); ++i) err[i] = std::abs(actual[i] - predicted[i]);
    const double hi = std::max(1e-12, *std::max_element(err.begin(), err.end()));
    std::vector<int> counts(bins, 0);
    for (double e : err) {
        int b = static_cast<int>(e / hi * bins);
        counts[std::min(b, bins - 1)]++;
    }
    Axes ax;
    ax.title = title;
    ax.x_label = "absolute error";
    ax.y_label = "count";
    ax.x_min = 0;
    ax.x_max = hi;
    ax.y_min = 0;
    ax.y_max = *std::max_element(counts.begin(), counts.end()) * 1.08;

    Document doc(ax.width, ax.height);
    ax.frame(doc);
    for (int b = 0; b < bins; ++b) {
        const double x0 = ax.px(hi * b / bins);
        const double x1 = ax.px(hi * (b + 1) / bins);
        const double y0 = ax.py(0.0);
        const double y1 = ax.py(counts[b]);
        doc.rect(x0 + 0.5, y1, std::max(0.5, x1 - x0 - 1.0), y0 - y1, "#1f5fbf", 0.85);
    }
    doc.save(path);
}

}  // namespace svg
}  // namespace specal
