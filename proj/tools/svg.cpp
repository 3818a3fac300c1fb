#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace qdec::svg {

namespace {

constexpr double kWidth = 480, kHeight = 320, kLeft = 56, kRight = 16, kTop = 32, kBottom = 44;

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string tick(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Frame {
    double x0, x1, y0, y1;
    double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
    double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

void open(std::ostringstream& os, const std::string& title) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
       << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << num(kWidth / 2) << "\" y=\"18\" text-anchor=\"middle\" font-size=\"13\">" << escape(title)
       << "</text>\n";
}

void axes(std::ostringstream& os, const Frame& f, const std::string& xlabel, const std::string& ylabel) {
    const double bx = f.px(f.x0), by = f.py(f.y0);
    os << "<line x1=\"" << num(bx) << "\" y1=\"" << num(by) << "\" x2=\"" << num(f.px(f.x1)) << "\" y2=\"" << num(by)
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << num(bx) << "\" y1=\"" << num(by) << "\" x2=\"" << num(bx) << "\" y2=\"" << num(f.py(f.y1))
       << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double x = f.x0 + (f.x1 - f.x0) * i / 4, y = f.y0 + (f.y1 - f.y0) * i / 4;
        os << "<text x=\"" << num(f.px(x)) << "\" y=\"" << num(by + 14) << "\" text-anchor=\"middle\">" << tick(x)
           << "</text>\n";
        os << "<text x=\"" << num(bx - 4) << "\" y=\"" << num(f.py(y) + 4) << "\" text-anchor=\"end\">" << tick(y)
           << "</text>\n";
    }
    os << "<text x=\"" << num((kLeft + kWidth - kRight) / 2) << "\" y=\"" << num(kHeight - 8)
       << "\" text-anchor=\"middle\">" << escape(xlabel) << "</text>\n";
    os << "<text x=\"14\" y=\"" << num((kTop + kHeight - kBottom) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
       << num((kTop + kHeight - kBottom) / 2) << ")\">" << escape(ylabel) << "</text>\n";
}

}  // namespace

std::string histogram(const std::vector<double>& values, const std::string& title, const std::string& xlabel,
                      std::optional<double> marker, int bins) {
    std::ostringstream os;
    open(os, title);
    double lo = values.empty() ? 0 : *std::min_element(values.begin(), values.end());
    double hi = values.empty() ? 1 : *std::max_element(values.begin(), values.end());
    if (marker) {
        lo = std::min(lo, *marker);
        hi = std::max(hi, *marker);
    }
    if (hi - lo < 1e-12) {
        lo -= 0.5;
        hi += 0.5;
    }
    std::vector<int> counts(bins, 0);
    for (double v : values) counts[std::min(bins - 1, static_cast<int>((v - lo) / (hi - lo) * bins))]++;
    const int top = std::max(1, *std::max_element(counts.begin(), counts.end()));
    const Frame f{lo, hi, 0, double(top)};
    for (int b = 0; b < bins; ++b) {
        if (counts[b] == 0) continue;
        const double x0 = f.px(lo + (hi - lo) * b / bins), x1 = f.px(lo + (hi - lo) * (b + 1) / bins);
        const double y = f.py(counts[b]);
        os << "<rect x=\"" << num(x0) << "\" y=\"" << num(y) << "\" width=\"" << num(x1 - x0) << "\" height=\""
           << num(f.py(0) - y) << "\" fill=\"#4c72b0\" stroke=\"white\" stroke-width=\"0.5\"/>\n";
    }
    if (marker)
        os << "<line x1=\"" << num(f.px(*marker)) << "\" y1=\"" << num(f.py(0)) << "\" x2=\"" << num(f.px(*marker))
           << "\" y2=\"" << num(f.py(top)) << "\" stroke=\"#c44e52\" stroke-width=\"2\" stroke-dasharray=\"5,3\"/>\n";
    axes(os, f, xlabel, "count");
    os << "</svg>\n";
    return os.str();
}

std::string region(const std::vector<std::array<double, 2>>& polygon, const std::string& title,
                   const std::string& xlabel, const std::string& ylabel) {
    std::ostringstream os;
    open(os, title);
    double xm = 0, ym = 0;
    for (const auto& p : polygon) {
        xm = std::max(xm, p[0]);
        ym = std::max(ym, p[1]);
    }
    const Frame f{0, std::max(xm * 1.1, 1e-3), 0, std::max(ym * 1.1, 1e-3)};
    if (!polygon.empty()) {
        os << "<polygon points=\"";
        for (std::size_t i = 0; i < polygon.size(); ++i)
            os << (i ? " " : "") << num(f.px(polygon[i][0])) << "," << num(f.py(polygon[i][1]));
        os << "\" fill=\"#4c72b0\" fill-opacity=\"0.35\" stroke=\"#4c72b0\" stroke-width=\"1.5\"/>\n";
    }
    axes(os, f, xlabel, ylabel);
    os << "</svg>\n";
    return os.str();
}

}  // namespace qdec::svg
