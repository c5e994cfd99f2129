#include "liouspec/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "liouspec/errors.hpp"

namespace liouspec::io {

std::string fmt(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path), columns_(header.size()) {
    if (!out_) throw Error("cannot open " + path.string() + " for writing");
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw Error("CSV row has the wrong number of columns");
    for (std::size_t k = 0; k < cells.size(); ++k) out_ << (k ? "," : "") << cells[k];
    out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& cells) {
    std::vector<std::string> s;
    s.reserve(cells.size());
    for (double x : cells) s.push_back(fmt(x));
    row(s);
}

namespace {

constexpr double kWidth = 640, kHeight = 520, kLeft = 80, kRight = 110, kTop = 40, kBottom = 60;

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

std::string rgb(double r, double g, double b) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(255 * std::clamp(r, 0.0, 1.0))),
                  static_cast<int>(std::lround(255 * std::clamp(g, 0.0, 1.0))),
                  static_cast<int>(std::lround(255 * std::clamp(b, 0.0, 1.0))));
    return buf;
}

// Piecewise-linear viridis approximation on [0, 1].
std::string sequential(double t) {
    static const std::array<std::array<double, 3>, 5> stops{{{0.267, 0.005, 0.329},
                                                             {0.229, 0.322, 0.546},
                                                             {0.128, 0.567, 0.551},
                                                             {0.369, 0.789, 0.383},
                                                             {0.993, 0.906, 0.144}}};
    t = std::clamp(t, 0.0, 1.0) * (stops.size() - 1);
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(t), stops.size() - 2);
    const double f = t - k;
    return rgb(stops[k][0] + f * (stops[k + 1][0] - stops[k][0]), stops[k][1] + f * (stops[k + 1][1] - stops[k][1]),
               stops[k][2] + f * (stops[k + 1][2] - stops[k][2]));
}

// Blue - white - red on [-1, 1].
std::string diverging(double t) {
    t = std::clamp(t, -1.0, 1.0);
    if (t < 0) return rgb(1 + t * 0.8, 1 + t * 0.6, 1.0);
    return rgb(1.0, 1 - t * 0.7, 1 - t * 0.8);
}

struct Axis {
    double lo, hi, px_lo, px_hi;
    bool log = false;
    double map(double v) const {
        const double a = log ? std::log10(lo) : lo, b = log ? std::log10(hi) : hi;
        const double x = log ? std::log10(v) : v;
        return px_lo + (x - a) / (b - a) * (px_hi - px_lo);
    }
};

std::vector<double> ticks(double lo, double hi, bool log) {
    std::vector<double> out;
    if (log) {
        for (int e = static_cast<int>(std::floor(std::log10(lo))); e <= static_cast<int>(std::ceil(std::log10(hi))); ++e) {
            const double v = std::pow(10.0, e);
            if (v >= lo * (1 - 1e-9) && v <= hi * (1 + 1e-9)) out.push_back(v);
        }
        return out;
    }
    const double span = hi - lo;
    const double raw = span / 5;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (raw <= m * mag) {
            step = m * mag;
            break;
        }
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) out.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
    return out;
}

std::string short_num(double v) {
    std::ostringstream s;
    s.precision(3);
    s << v;
    return s.str();
}

void frame(std::ostream& o, const std::string& title, const std::string& xl, const std::string& yl, const Axis& ax,
           const Axis& ay) {
    o << "<rect x='" << kLeft << "' y='" << kTop << "' width='" << kWidth - kLeft - kRight << "' height='"
      << kHeight - kTop - kBottom << "' fill='none' stroke='black'/>\n";
    for (double v : ticks(ax.lo, ax.hi, ax.log)) {
        const double x = ax.map(v);
        o << "<line x1='" << x << "' y1='" << kHeight - kBottom << "' x2='" << x << "' y2='" << kHeight - kBottom + 5
          << "' stroke='black'/><text x='" << x << "' y='" << kHeight - kBottom + 18
          << "' font-size='11' text-anchor='middle'>" << short_num(v) << "</text>\n";
    }
    for (double v : ticks(ay.lo, ay.hi, ay.log)) {
        const double y = ay.map(v);
        o << "<line x1='" << kLeft - 5 << "' y1='" << y << "' x2='" << kLeft << "' y2='" << y
          << "' stroke='black'/><text x='" << kLeft - 8 << "' y='" << y + 4
          << "' font-size='11' text-anchor='end'>" << short_num(v) << "</text>\n";
    }
    o << "<text x='" << (kLeft + kWidth - kRight) / 2 << "' y='" << kTop - 14
      << "' font-size='14' text-anchor='middle'>" << escape(title) << "</text>\n";
    o << "<text x='" << (kLeft + kWidth - kRight) / 2 << "' y='" << kHeight - 18
      << "' font-size='12' text-anchor='middle'>" << escape(xl) << "</text>\n";
    o << "<text transform='translate(22," << (kTop + kHeight - kBottom) / 2
      << ") rotate(-90)' font-size='12' text-anchor='middle'>" << escape(yl) << "</text>\n";
}

std::ofstream open_svg(const std::filesystem::path& path) {
    std::ofstream o(path);
    if (!o) throw Error("cannot open " + path.string() + " for writing");
    o << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='" << kHeight
      << "' font-family='sans-serif'>\n<rect width='100%' height='100%' fill='white'/>\n";
    return o;
}

// Cell edges for a rectilinear axis: midpoints between samples.
std::vector<double> edges(const std::vector<double>& v) {
    std::vector<double> e(v.size() + 1);
    if (v.size() == 1) return {v[0] - 0.5, v[0] + 0.5};
    for (std::size_t k = 1; k < v.size(); ++k) e[k] = 0.5 * (v[k - 1] + v[k]);
    e.front() = v.front() - 0.5 * (v[1] - v[0]);
    e.back() = v.back() + 0.5 * (v.back() - v[v.size() - 2]);
    return e;
}

} // namespace

void write_heatmap_svg(const std::filesystem::path& path, const HeatMap& map) {
    if (map.values.size() != map.xs.size() * map.ys.size() || map.xs.empty() || map.ys.empty())
        throw DimensionError("heat map values do not match the axes");
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : map.values)
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (!std::isfinite(lo)) lo = hi = 0.0;
    if (map.diverging) {
        hi = std::max(std::abs(lo), std::abs(hi));
        lo = -hi;
    }
    if (hi <= lo) hi = lo + 1.0;

    const auto ex = edges(map.xs), ey = edges(map.ys);
    const Axis ax{ex.front(), ex.back(), kLeft, kWidth - kRight};
    const Axis ay{ey.front(), ey.back(), kHeight - kBottom, kTop};
    auto o = open_svg(path);
    for (std::size_t i = 0; i < map.xs.size(); ++i)
        for (std::size_t j = 0; j < map.ys.size(); ++j) {
            const double v = map.values[i * map.ys.size() + j];
            const std::string color = !std::isfinite(v) ? "#f3eec0"
                                      : map.diverging   ? diverging(v / hi)
                                                        : sequential((v - lo) / (hi - lo));
            const double x0 = ax.map(ex[i]), x1 = ax.map(ex[i + 1]);
            const double y0 = ay.map(ey[j + 1]), y1 = ay.map(ey[j]);
            o << "<rect x='" << x0 << "' y='" << y0 << "' width='" << x1 - x0 + 0.3 << "' height='" << y1 - y0 + 0.3
              << "' fill='" << color << "'/>\n";
        }
    for (const auto& [pts, color] : map.polylines) {
        if (pts.size() < 2) continue;
        o << "<polyline fill='none' stroke='" << color << "' stroke-width='2' stroke-dasharray='5,3' points='";
        for (const auto& [x, y] : pts) o << ax.map(x) << ',' << ay.map(y) << ' ';
        o << "'/>\n";
    }
    for (const auto& m : map.markers) {
        o << "<circle cx='" << ax.map(m.x) << "' cy='" << ay.map(m.y) << "' r='4' fill='none' stroke='red' stroke-width='2'/>";
        if (!m.label.empty())
            o << "<text x='" << ax.map(m.x) + 6 << "' y='" << ay.map(m.y) - 6 << "' font-size='11' fill='red'>"
              << escape(m.label) << "</text>";
        o << '\n';
    }
    frame(o, map.title, map.x_label, map.y_label, ax, ay);
    // Color bar.
    const double bx = kWidth - kRight + 25, bw = 18, by0 = kTop, by1 = kHeight - kBottom;
    const int steps = 64;
    for (int k = 0; k < steps; ++k) {
        const double t = (k + 0.5) / steps;
        const double v = lo + t * (hi - lo);
        const std::string color = map.diverging ? diverging(v / hi) : sequential(t);
        const double y = by1 - (k + 1) * (by1 - by0) / steps;
        o << "<rect x='" << bx << "' y='" << y << "' width='" << bw << "' height='" << (by1 - by0) / steps + 0.5
          << "' fill='" << color << "'/>\n";
    }
    o << "<text x='" << bx + bw + 4 << "' y='" << by0 + 10 << "' font-size='11'>" << short_num(hi) << "</text>\n";
    o << "<text x='" << bx + bw + 4 << "' y='" << by1 << "' font-size='11'>" << short_num(lo) << "</text>\n";
    o << "</svg>\n";
}

void write_lineplot_svg(const std::filesystem::path& path, const LinePlot& plot) {
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
    for (const auto& s : plot.series) {
        if (s.xs.size() != s.ys.size()) throw DimensionError("series " + s.name + " has mismatched lengths");
        for (std::size_t k = 0; k < s.xs.size(); ++k) {
            if (!std::isfinite(s.xs[k]) || !std::isfinite(s.ys[k]) || (plot.log_x && s.xs[k] <= 0)) continue;
            xlo = std::min(xlo, s.xs[k]);
            xhi = std::max(xhi, s.xs[k]);
            ylo = std::min(ylo, s.ys[k]);
            yhi = std::max(yhi, s.ys[k]);
        }
    }
    if (!std::isfinite(xlo)) xlo = plot.log_x ? 1 : 0, xhi = xlo + 1, ylo = 0, yhi = 1;
    if (xhi <= xlo) xhi = plot.log_x ? xlo * 10 : xlo + 1;
    if (yhi <= ylo) yhi = ylo + 1;
    const double pad = 0.05 * (yhi - ylo);
    const Axis ax{xlo, xhi, kLeft, kWidth - kRight, plot.log_x};
    const Axis ay{ylo - pad, yhi + pad, kHeight - kBottom, kTop};
    auto o = open_svg(path);
    frame(o, plot.title, plot.x_label, plot.y_label, ax, ay);
    for (const auto& s : plot.series) {
        o << "<polyline fill='none' stroke='" << s.color << "' stroke-width='1.6'"
          << (s.dashed ? " stroke-dasharray='6,4'" : "") << " points='";
        for (std::size_t k = 0; k < s.xs.size(); ++k) {
            if (!std::isfinite(s.xs[k]) || !std::isfinite(s.ys[k]) || (plot.log_x && s.xs[k] <= 0)) continue;
            o << ax.map(s.xs[k]) << ',' << ay.map(s.ys[k]) << ' ';
        }
        o << "'/>\n";
    }
    for (const auto& [x, label] : plot.x_markers) {
        if (x < xlo || x > xhi) continue;
        const double px = ax.map(x);
        o << "<path d='M" << px - 5 << ',' << kHeight - kBottom + 10 << " L" << px + 5 << ',' << kHeight - kBottom + 10
          << " L" << px << ',' << kHeight - kBottom << " Z' fill='black'/><text x='" << px << "' y='"
          << kHeight - kBottom + 32 << "' font-size='11' text-anchor='middle'>" << escape(label) << "</text>\n";
    }
    double ly = kTop + 12;
    for (const auto& s : plot.series) {
        o << "<line x1='" << kWidth - kRight + 8 << "' y1='" << ly << "' x2='" << kWidth - kRight + 26 << "' y2='" << ly
          << "' stroke='" << s.color << "' stroke-width='2'" << (s.dashed ? " stroke-dasharray='4,3'" : "")
          << "/><text x='" << kWidth - kRight + 30 << "' y='" << ly + 4 << "' font-size='10'>" << escape(s.name)
          << "</text>\n";
        ly += 16;
    }
    o << "</svg>\n";
}

} // namespace liouspec::io
