#include "afflab/portrait.hpp"

#include "afflab/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace afflab {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Clipper {
    double lo, hi;

    // Liang-Barsky segment clip against the square [lo,hi]^2.
    bool clip(double& x0, double& y0, double& x1, double& y1) const {
        double t0 = 0, t1 = 1;
        double dx = x1 - x0, dy = y1 - y0;
        auto update = [&](double p, double q) {
            if (p == 0) return q >= 0;
            double r = q / p;
            if (p < 0) {
                if (r > t1) return false;
                if (r > t0) t0 = r;
            } else {
                if (r < t0) return false;
                if (r < t1) t1 = r;
            }
            return true;
        };
        if (!update(-dx, x0 - lo)) return false;
        if (!update(dx, hi - x0)) return false;
        if (!update(-dy, y0 - lo)) return false;
        if (!update(dy, hi - y0)) return false;
        double nx0 = x0 + t0 * dx, ny0 = y0 + t0 * dy;
        double nx1 = x0 + t1 * dx, ny1 = y0 + t1 * dy;
        x0 = nx0;
        y0 = ny0;
        x1 = nx1;
        y1 = ny1;
        return true;
    }
};

}  // namespace

std::string render_portrait_svg(const PortraitSpec& spec) {
    if (spec.rays < 4) throw ParamDomainError("portrait needs at least 4 rays");
    if (!(spec.view_hi > spec.view_lo))
        throw ParamDomainError("portrait viewport is empty");

    const double span = spec.view_hi - spec.view_lo;
    const double px_per_unit = spec.size_px / span;
    auto to_px = [&](double x, double y) {
        double px = (x - spec.view_lo) * px_per_unit;
        double py = (spec.view_hi - y) * px_per_unit;  // SVG y grows downward
        return std::pair<double, double>(px, py);
    };
    Clipper clip{spec.view_lo, spec.view_hi};

    std::ostringstream svg;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" "
                  "height=\"%d\" viewBox=\"0 0 %d %d\">\n",
                  spec.size_px, spec.size_px, spec.size_px, spec.size_px);
    svg << buf;
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // light axes through the origin when visible
    if (spec.view_lo < 0 && spec.view_hi > 0) {
        auto [ox, oy] = to_px(0, 0);
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"0\" y1=\"%.2f\" x2=\"%d\" y2=\"%.2f\" "
                      "stroke=\"#cccccc\" stroke-width=\"1\"/>\n",
                      oy, spec.size_px, oy);
        svg << buf;
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.2f\" y1=\"0\" x2=\"%.2f\" y2=\"%d\" "
                      "stroke=\"#cccccc\" stroke-width=\"1\"/>\n",
                      ox, ox, spec.size_px);
        svg << buf;
    }

    for (int k = 0; k < spec.rays; ++k) {
        double th = 2 * kPi * k / spec.rays;
        std::array<double, 2> u0{std::cos(th), std::sin(th)};
        for (double direction : {1.0, -1.0}) {
            GeodesicTrace tr = integrate(spec.conn, {0, 0}, u0,
                                         direction * spec.t_max, spec.integrate);
            const char* color =
                tr.termination() == Termination::ReachedTmax ? "#1f4e9c" : "#b03030";
            // resample densely and emit clipped polyline pieces
            double t0 = tr.t_begin(), t1 = tr.t_end();
            if (t0 == t1) continue;
            std::vector<std::pair<double, double>> current;
            auto flush = [&]() {
                if (current.size() < 2) {
                    current.clear();
                    return;
                }
                svg << "<polyline fill=\"none\" stroke=\"" << color
                    << "\" stroke-width=\"1.1\" points=\"";
                for (const auto& [px, py] : current) {
                    std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px, py);
                    svg << buf;
                }
                svg << "\"/>\n";
                current.clear();
            };
            auto prev = tr.eval(t0);
            for (int s = 1; s < spec.samples_per_ray; ++s) {
                double t = t0 + (t1 - t0) * s / (spec.samples_per_ray - 1);
                auto cur = tr.eval(t);
                double x0 = prev.x[0], y0 = prev.x[1];
                double x1 = cur.x[0], y1 = cur.x[1];
                prev = cur;
                if (!std::isfinite(x0) || !std::isfinite(y0) ||
                    !std::isfinite(x1) || !std::isfinite(y1)) {
                    flush();
                    continue;
                }
                double cx0 = x0, cy0 = y0, cx1 = x1, cy1 = y1;
                if (!clip.clip(cx0, cy0, cx1, cy1)) {
                    flush();
                    continue;
                }
                bool starts_inside = cx0 == x0 && cy0 == y0;
                if (!starts_inside || current.empty()) {
                    flush();
                    current.push_back(to_px(cx0, cy0));
                }
                current.push_back(to_px(cx1, cy1));
                bool ends_inside = cx1 == x1 && cy1 == y1;
                if (!ends_inside) flush();
            }
            flush();
        }
    }
    if (!spec.title.empty()) {
        std::snprintf(buf, sizeof buf,
                      "<text x=\"8\" y=\"18\" font-family=\"sans-serif\" "
                      "font-size=\"14\" fill=\"#333333\">%s</text>\n",
                      spec.title.c_str());
        svg << buf;
    }
    svg << "</svg>\n";
    return svg.str();
}

void write_portrait_svg(const PortraitSpec& spec, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << render_portrait_svg(spec);
}

}  // namespace afflab
