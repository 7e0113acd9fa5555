#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace cuspforge::cli {

namespace {

constexpr double kW = 720, kH = 440, kPad = 56;

struct Frame {
    double x0, x1, y0, y1;
    double px(double x) const { return kPad + (x - x0) / (x1 - x0) * (kW - 2 * kPad); }
    double py(double y) const { return kH - kPad - (y - y0) / (y1 - y0) * (kH - 2 * kPad); }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

Frame frame_of(const std::vector<const std::vector<double>*>& xs,
               const std::vector<const std::vector<double>*>& ys) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (auto* v : xs)
        for (double x : *v)
            if (std::isfinite(x)) x0 = std::min(x0, x), x1 = std::max(x1, x);
    for (auto* v : ys)
        for (double y : *v)
            if (std::isfinite(y)) y0 = std::min(y0, y), y1 = std::max(y1, y);
    if (!std::isfinite(x0)) x0 = 0, x1 = 1;
    if (!std::isfinite(y0)) y0 = 0, y1 = 1;
    if (x1 - x0 < 1e-300) x1 = x0 + 1;
    if (y1 - y0 < 1e-300) y1 = y0 + 1;
    const double my = 0.05 * (y1 - y0);
    return {x0, x1, y0 - my, y1 + my};
}

std::string open(const std::string& title) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kW) + "\" height=\"" +
           num(kH) + "\" viewBox=\"0 0 " + num(kW) + " " + num(kH) + "\">\n" +
           "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" +
           "<text x=\"" + num(kW / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
           escape(title) + "</text>\n";
}

std::string axes(const Frame& f, const std::string& xl, const std::string& yl) {
    std::string s;
    s += "<rect x=\"" + num(kPad) + "\" y=\"" + num(kPad) + "\" width=\"" + num(kW - 2 * kPad) +
         "\" height=\"" + num(kH - 2 * kPad) + "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double x = f.x0 + (f.x1 - f.x0) * k / 4, y = f.y0 + (f.y1 - f.y0) * k / 4;
        s += "<text x=\"" + num(f.px(x)) + "\" y=\"" + num(kH - kPad + 16) +
             "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + tick(x) + "</text>\n";
        s += "<text x=\"" + num(kPad - 6) + "\" y=\"" + num(f.py(y) + 4) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + tick(y) + "</text>\n";
    }
    s += "<text x=\"" + num(kW / 2) + "\" y=\"" + num(kH - 14) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + escape(xl) + "</text>\n";
    s += "<text x=\"14\" y=\"" + num(kH / 2) + "\" transform=\"rotate(-90 14 " + num(kH / 2) +
         ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + escape(yl) + "</text>\n";
    return s;
}

std::string polyline(const Frame& f, const std::vector<double>& xs, const std::vector<double>& ys,
                     const std::string& colour) {
    std::string s, pts;
    auto flush = [&] {
        if (!pts.empty())
            s += "<polyline fill=\"none\" stroke=\"" + colour + "\" stroke-width=\"1.6\" points=\"" +
                 pts + "\"/>\n";
        pts.clear();
    };
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (!std::isfinite(xs[k]) || !std::isfinite(ys[k])) {
            flush();
            continue;
        }
        pts += num(f.px(xs[k])) + "," + num(f.py(ys[k])) + " ";
    }
    flush();
    return s;
}

// Blue to white to red.
std::string colour(double t) {
    t = std::clamp(t, 0.0, 1.0);
    int r, g, b;
    if (t < 0.5) {
        const double s = t / 0.5;
        r = static_cast<int>(40 + 215 * s), g = static_cast<int>(70 + 185 * s), b = 255;
    } else {
        const double s = (t - 0.5) / 0.5;
        r = 255, g = static_cast<int>(255 - 195 * s), b = static_cast<int>(255 - 215 * s);
    }
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

}  // namespace

std::string svg_polylines(const std::vector<Series2D>& series, const std::string& title) {
    std::vector<const std::vector<double>*> xs, ys;
    for (const auto& s : series) xs.push_back(&s.xs), ys.push_back(&s.ys);
    const Frame f = frame_of(xs, ys);
    std::string out = open(title) + axes(f, "x", "f");
    if (f.y0 < 0 && f.y1 > 0)
        out += "<line x1=\"" + num(kPad) + "\" y1=\"" + num(f.py(0)) + "\" x2=\"" + num(kW - kPad) +
               "\" y2=\"" + num(f.py(0)) + "\" stroke=\"#bbb\" stroke-dasharray=\"4 3\"/>\n";
    int row = 0;
    for (const auto& s : series) {
        out += polyline(f, s.xs, s.ys, s.colour);
        out += "<text x=\"" + num(kW - kPad - 8) + "\" y=\"" + num(kPad + 16 + 16 * row++) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" + s.colour +
               "\">" + escape(s.label) + "</text>\n";
    }
    return out + "</svg>\n";
}

std::string svg_heatmap(const ScalarField& field, const std::string& title) {
    const Grid& g = field.grid;
    const int sx = std::max(1, (g.nx() + 159) / 160), sy = std::max(1, (g.ny() + 79) / 80);
    const int cx = (g.nx() + sx - 1) / sx, cy = (g.ny() + sy - 1) / sy;
    std::vector<double> cells(static_cast<std::size_t>(cx) * cy,
                              std::numeric_limits<double>::quiet_NaN());
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int J = 0; J < cy; ++J)
        for (int I = 0; I < cx; ++I) {
            double s = 0;
            int n = 0;
            for (int j = J * sy; j < std::min(g.ny(), (J + 1) * sy); ++j)
                for (int i = I * sx; i < std::min(g.nx(), (I + 1) * sx); ++i)
                    if (std::isfinite(field.at(i, j))) s += field.at(i, j), ++n;
            if (!n) continue;
            const double v = s / n;
            cells[static_cast<std::size_t>(J) * cx + I] = v;
            lo = std::min(lo, v), hi = std::max(hi, v);
        }
    if (!std::isfinite(lo)) lo = 0, hi = 1;
    if (hi - lo < 1e-300) hi = lo + 1;
    const Frame f{g.x_min(), g.x_max(), g.y_min(), g.y_max()};
    std::string out = open(title + "  [" + tick(lo) + ", " + tick(hi) + "]") + axes(f, "x", "y");
    const double w = (kW - 2 * kPad) / cx, h = (kH - 2 * kPad) / cy;
    for (int J = 0; J < cy; ++J)
        for (int I = 0; I < cx; ++I) {
            const double v = cells[static_cast<std::size_t>(J) * cx + I];
            if (!std::isfinite(v)) continue;
            out += "<rect x=\"" + num(kPad + I * w) + "\" y=\"" + num(kH - kPad - (J + 1) * h) +
                   "\" width=\"" + num(w + 0.3) + "\" height=\"" + num(h + 0.3) + "\" fill=\"" +
                   colour((v - lo) / (hi - lo)) + "\"/>\n";
        }
    return out + "</svg>\n";
}

std::string svg_loglog_fit(const std::vector<double>& xs, const std::vector<double>& fs,
                           const PowerFit& fit, double lo, double hi,
                           const std::string& slope_text) {
    std::vector<double> lx, lf;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double a = std::abs(xs[k]);
        if (a >= lo / 3 && a <= hi * 3 && fs[k] > 0) {
            lx.push_back(std::log10(a));
            lf.push_back(std::log10(fs[k]));
        }
    }
    const std::vector<double> fx{std::log10(lo), std::log10(hi)};
    const std::vector<double> ff{std::log10(fit.coefficient) + fit.exponent * fx[0],
                                 std::log10(fit.coefficient) + fit.exponent * fx[1]};
    const Frame f = frame_of({&lx, &fx}, {&lf, &ff});
    std::string out = open("cusp exponent fit") + axes(f, "log10 |x|", "log10 f");
    for (std::size_t k = 0; k < lx.size(); ++k)
        out += "<circle cx=\"" + num(f.px(lx[k])) + "\" cy=\"" + num(f.py(lf[k])) +
               "\" r=\"2.2\" fill=\"#1f5fbf\"/>\n";
    out += polyline(f, fx, ff, "#c0392b");
    out += "<text x=\"" + num(kPad + 10) + "\" y=\"" + num(kPad + 18) +
           "\" font-family=\"sans-serif\" font-size=\"13\" fill=\"#c0392b\">slope = " +
           escape(slope_text) + "</text>\n";
    return out + "</svg>\n";
}

}  // namespace cuspforge::cli
