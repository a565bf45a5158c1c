#include "ethdyn/svg.hpp"

#include <cmath>
#include <cstdio>

namespace ethdyn::svg {

namespace {

std::string format(const char* pattern, int precision, double v) {
    char buf[64];
    const int n = std::snprintf(buf, sizeof buf, pattern, precision, v);
    return std::string(buf, static_cast<std::size_t>(n));
}

} // namespace

std::string fixed(double v, int decimals) {
    std::string s = format("%.*f", decimals, v);
    // "-0.00" and "0.00" must not differ between runs that round to zero
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) {
        s.erase(0, 1);
    }
    return s;
}

std::string general(double v, int significant) {
    if (v == 0.0) {
        v = 0.0; // fold -0
    }
    return format("%.*g", significant, v);
}

std::string escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

Writer::Writer(int width, int height) {
    out_ += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
    out_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + std::to_string(width) +
            "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) + " " +
            std::to_string(height) + "\">\n";
}

void Writer::comment(std::string_view text) {
    std::string body(text);
    // "--" is not allowed inside XML comments
    for (std::size_t pos = body.find("--"); pos != std::string::npos; pos = body.find("--", pos)) {
        body.replace(pos, 2, "- -");
    }
    out_ += "<!-- " + body + " -->\n";
}

void Writer::rect(double x, double y, double w, double h, std::string_view style) {
    out_ += "<rect x=\"" + fixed(x, 2) + "\" y=\"" + fixed(y, 2) + "\" width=\"" + fixed(w, 2) + "\" height=\"" +
            fixed(h, 2) + "\" " + std::string(style) + "/>\n";
}

void Writer::line(double x1, double y1, double x2, double y2, std::string_view style) {
    out_ += "<line x1=\"" + fixed(x1, 2) + "\" y1=\"" + fixed(y1, 2) + "\" x2=\"" + fixed(x2, 2) + "\" y2=\"" +
            fixed(y2, 2) + "\" " + std::string(style) + "/>\n";
}

void Writer::polyline(const std::vector<std::pair<double, double>>& points, std::string_view style) {
    out_ += "<polyline points=\"";
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (i > 0) {
            out_ += ' ';
        }
        out_ += fixed(points[i].first, 2) + "," + fixed(points[i].second, 2);
    }
    out_ += "\" " + std::string(style) + "/>\n";
}

void Writer::circle(double cx, double cy, double r, std::string_view style) {
    out_ += "<circle cx=\"" + fixed(cx, 2) + "\" cy=\"" + fixed(cy, 2) + "\" r=\"" + fixed(r, 2) + "\" " +
            std::string(style) + "/>\n";
}

void Writer::text(double x, double y, std::string_view content, std::string_view style) {
    out_ += "<text x=\"" + fixed(x, 2) + "\" y=\"" + fixed(y, 2) + "\" " + std::string(style) + ">" +
            escape(content) + "</text>\n";
}

void Writer::open_group(std::string_view attributes) { out_ += "<g " + std::string(attributes) + ">\n"; }

void Writer::close_group() { out_ += "</g>\n"; }

void Writer::clip_rect(std::string_view id, double x, double y, double w, double h) {
    out_ += "<defs><clipPath id=\"" + std::string(id) + "\"><rect x=\"" + fixed(x, 2) + "\" y=\"" + fixed(y, 2) +
            "\" width=\"" + fixed(w, 2) + "\" height=\"" + fixed(h, 2) + "\"/></clipPath></defs>\n";
}

std::string Writer::finish() {
    out_ += "</svg>\n";
    return std::move(out_);
}

} // namespace ethdyn::svg
