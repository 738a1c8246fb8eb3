#pragma once

#include "afflab/connection.hpp"
#include "afflab/geodesics.hpp"

#include <string>

namespace afflab {

// Deterministic geodesic portrait: a fan of unit-speed rays from the origin,
// both time directions, clipped to a square viewport.
struct PortraitSpec {
    Connection conn;
    std::string title;
    int rays = 24;
    double t_max = 32.0;
    double view_lo = -3.0, view_hi = 3.0;
    int size_px = 480;
    int samples_per_ray = 400;
    IntegrateOptions integrate;
};

std::string render_portrait_svg(const PortraitSpec& spec);
void write_portrait_svg(const PortraitSpec& spec, const std::string& path);

}  // namespace afflab
