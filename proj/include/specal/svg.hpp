#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace specal {
namespace svg {

/// Minimal deterministic SVG writer: fixed float formatting, no
/// timestamps, elements emitted in call order.
class Document {
public:
    Document(double width, double height);

    void line(double x1, double y1, double x2, double y2, const std::string& stroke,
              double stroke_width = 1.0);
    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke,
                  double stroke_width = 1.0, double opacity = 1.0);
    void circle(double cx, double cy, double r, const std::string& fill,
                double opacity = 1.0);
    void rect(double x, double y, double w, double h, const std::string& fill,
              double opacity = 1.0);
    void text(double x, double y, const std::string& s, double size = 11.0,
              const std::string& anchor = "start");

    std::string str() const;
    void save(const std::filesystem::path& path) const;

private:
    double width_, height_;
    std::vector<std::string> elements_;
};

/// Maps data coordinates onto a plot rectangle and draws axes with ticks.
struct Axes {
    double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
    double left = 55, top = 20, right = 20, bottom = 42;
    double width = 640, height = 420;
    std::string x_label, y_label, title;

    double px(double x) const;
    double py(double y) const;
    void frame(Document& doc) const;
};

/// Blue-to-red gradient for a value in [0,1].
std::string heat_color(double t);

struct Series {
    std::string label;
    std::string color;
    std::vector<std::pair<double, double>> points;
};

/// Multi-series line chart (used for R^2 vs threshold curves).
void line_chart(const std::filesystem::path& path, const std::vector<Series>& series,
                const std::string& title, const std::string& x_label,
                const std::string& y_label);

/// Spectra overlay; each row is one polyline colored by its target value.
void spectra_overlay(const std::filesystem::path& path, const std::vector<double>& axis,
                     const std::vector<std::vector<double>>& rows,
                     const std::vector<double>& targets, const std::string& title);

/// Actual-vs-predicted scatter with the identity line.
void scatter_fit(const std::filesystem::path& path, const std::vector<double>& actual,
                 const std::vector<double>& predicted, const std::string& title);

/// Histogram of absolute errors.
void error_histogram(const std::filesystem::path& path, const std::vector<double>& actual,
                     const std::vector<double>& predicted, int bins,
                     const std::string& title);

}  // namespace svg
}  // namespace specal
