// SPDX-License-Identifier: Apache-2.0
//
// cfsound - drone virtual-array channel sounding and cell-free massive MIMO analysis
// Copyright (C) 2026 cfsound contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace cfsound {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend Vec3 operator+(const Vec3& a, const Vec3& b) {
        return {a.x + b.x, a.y + b.y, a.z + b.z};
    }
    friend Vec3 operator-(const Vec3& a, const Vec3& b) {
        return {a.x - b.x, a.y - b.y, a.z - b.z};
    }
    friend Vec3 operator*(double s, const Vec3& v) {
        return {s * v.x, s * v.y, s * v.z};
    }
    friend bool operator==(const Vec3& a, const Vec3& b) = default;

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

// Axis-aligned building volume: rectangular footprint extruded from the
// ground (z = 0) up to `height_m`.
struct BuildingBox {
    double x_min = 0.0;
    double x_max = 0.0;
    double y_min = 0.0;
    double y_max = 0.0;
    double height_m = 0.0;

    bool contains(const Vec3& p) const {
        return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max &&
               p.z >= 0.0 && p.z <= height_m;
    }
};

// One AP-UE link: endpoints, 3-D distance and line-of-sight state.
struct LinkGeometry {
    Vec3 ap_position;
    Vec3 ue_position;
    double distance_m = 0.0;
    bool is_los = true;
};

// Slab test for the segment a->b against one box (closed boundary).
inline bool segment_intersects_box(const Vec3& a, const Vec3& b, const BuildingBox& box) {
    const double lo[3] = {box.x_min, box.y_min, 0.0};
    const double hi[3] = {box.x_max, box.y_max, box.height_m};
    const double origin[3] = {a.x, a.y, a.z};
    const double dir[3] = {b.x - a.x, b.y - a.y, b.z - a.z};

    double t_enter = 0.0;
    double t_exit = 1.0;
    for (int axis = 0; axis < 3; ++axis) {
        if (dir[axis] == 0.0) {
            if (origin[axis] < lo[axis] || origin[axis] > hi[axis])
                return false;
            continue;
        }
        double t0 = (lo[axis] - origin[axis]) / dir[axis];
        double t1 = (hi[axis] - origin[axis]) / dir[axis];
        if (t0 > t1)
            std::swap(t0, t1);
        t_enter = std::max(t_enter, t0);
        t_exit = std::min(t_exit, t1);
        if (t_enter > t_exit)
            return false;
    }
    return true;
}

// True iff the straight path between AP and UE is cut by any building.
inline bool los_blocked(const Vec3& ap, const Vec3& ue, std::span<const BuildingBox> buildings) {
    if (ap == ue)
        throw std::invalid_argument("los_blocked: degenerate zero-length AP-UE segment.");
    for (const auto& box : buildings)
        if (segment_intersects_box(ap, ue, box))
            return true;
    return false;
}

inline LinkGeometry make_link_geometry(const Vec3& ap, const Vec3& ue,
                                       std::span<const BuildingBox> buildings) {
    LinkGeometry g;
    g.ap_position = ap;
    g.ue_position = ue;
    g.distance_m = distance(ap, ue);
    if (g.distance_m <= 0.0)
        throw std::invalid_argument("make_link_geometry: AP and UE positions coincide.");
    g.is_los = !los_blocked(ap, ue, buildings);
    return g;
}

} // namespace cfsound
