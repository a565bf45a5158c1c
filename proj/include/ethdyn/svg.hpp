#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ethdyn::svg {

/// printf-style "%.*f" / "%.*g" in the C locale.
std::string fixed(double v, int decimals);
std::string general(double v, int significant);

/// Escape &, <, >, and quotes for attribute and text content.
std::string escape(std::string_view text);

/// Minimal append-only SVG 1.1 writer. Output depends only on the call
/// sequence, so identical inputs give byte-identical documents.
class Writer {
public:
    Writer(int width, int height);

    void comment(std::string_view text);
    void rect(double x, double y, double w, double h, std::string_view style);
    void line(double x1, double y1, double x2, double y2, std::string_view style);
    void polyline(const std::vector<std::pair<double, double>>& points, std::string_view style);
    void circle(double cx, double cy, double r, std::string_view style);
    void text(double x, double y, std::string_view content, std::string_view style);
    void open_group(std::string_view attributes);
    void close_group();
    /// Rectangular clip path usable as clip-path="url(#id)".
    void clip_rect(std::string_view id, double x, double y, double w, double h);

    std::string finish();

private:
    std::string out_;
};

} // namespace ethdyn::svg
