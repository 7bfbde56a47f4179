// Copyright 2026 The beamlab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "beamlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace beamlab {

double wrap_angle(double radians) {
  double w = std::remainder(radians, 2.0 * kPi);  // [-pi, pi]
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

void Cuboid::validate() const {
  if (!(length > 0.0 && width > 0.0 && height > 0.0)) {
    throw std::invalid_argument("cuboid dimensions must be positive");
  }
}

double CameraMount::focal_px() const {
  return 0.5 * image_width / std::tan(0.5 * hfov);
}

void CameraMount::validate() const {
  if (!(hfov > 0.0 && hfov < kPi)) {
    throw std::invalid_argument("camera hfov must lie in (0, pi)");
  }
  if (image_width <= 0 || image_height <= 0) {
    throw std::invalid_argument("camera image size must be positive");
  }
}

void validate_camera_ring(std::span<const CameraMount> mounts) {
  if (mounts.empty()) throw std::invalid_argument("no camera mounts");
  double total = 0.0;
  for (const auto& m : mounts) {
    m.validate();
    total += m.hfov;
  }
  if (std::abs(total - 2.0 * kPi) > 1e-9) {
    throw std::invalid_argument("camera sectors must cover exactly 360 degrees");
  }
  // Sorted by azimuth, each sector must start where the previous one ends.
  std::vector<std::pair<double, double>> sectors;
  for (const auto& m : mounts) {
    sectors.emplace_back(wrap_angle(m.azimuth_in_mcs - 0.5 * m.hfov), m.hfov);
  }
  std::sort(sectors.begin(), sectors.end());
  for (std::size_t i = 0; i < sectors.size(); ++i) {
    const auto& cur = sectors[i];
    const auto& nxt = sectors[(i + 1) % sectors.size()];
    double gap = wrap_angle(nxt.first - (cur.first + cur.second));
    if (std::abs(gap) > 1e-9) {
      throw std::invalid_argument("camera sectors overlap or leave a gap near mount " +
                                  std::to_string(i));
    }
  }
}

Eigen::Matrix3d frame_rotation(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::Matrix3d r;
  r << c, s, 0.0,
      -s, c, 0.0,
      0.0, 0.0, 1.0;
  return r;
}

PlacedPoint ccs_to_mcs(const Vec3& p_ccs, double azimuth_ccs,
                       const CameraMount& mount) {
  return {frame_rotation(mount.azimuth_in_mcs) * p_ccs + mount.offset_in_mcs,
          wrap_angle(mount.azimuth_in_mcs + azimuth_ccs)};
}

PlacedPoint mcs_to_ccs(const Vec3& p_mcs, double azimuth_mcs,
                       const CameraMount& mount) {
  return {frame_rotation(mount.azimuth_in_mcs).transpose() *
              (p_mcs - mount.offset_in_mcs),
          wrap_angle(azimuth_mcs - mount.azimuth_in_mcs)};
}

Vec3 mcs_to_rcs(const Vec3& p_mcs, const Vec3& ms_in_rcs) {
  return p_mcs + ms_in_rcs;
}

Vec3 rcs_to_mcs(const Vec3& p_rcs, const Vec3& ms_in_rcs) {
  return p_rcs - ms_in_rcs;
}

std::array<Vec3, 8> cuboid_corners(const Cuboid& c) {
  const double hw = 0.5 * c.width;
  const double hl = 0.5 * c.length;
  const double hh = 0.5 * c.height;
  const Eigen::Matrix3d r = frame_rotation(c.azimuth);
  const std::array<Vec2, 4> base{Vec2(-hw, -hl), Vec2(hw, -hl), Vec2(hw, hl),
                                 Vec2(-hw, hl)};
  std::array<Vec3, 8> out;
  for (int i = 0; i < 4; ++i) {
    out[i] = r * Vec3(base[i].x(), base[i].y(), -hh) + c.center;
    out[i + 4] = r * Vec3(base[i].x(), base[i].y(), hh) + c.center;
  }
  return out;
}

bool segment_hits_cuboid(const Vec3& a, const Vec3& b, const Cuboid& c) {
  const Eigen::Matrix3d rt = frame_rotation(c.azimuth).transpose();
  const Vec3 la = rt * (a - c.center);
  const Vec3 d = rt * (b - a);
  const Vec3 half(0.5 * c.width, 0.5 * c.length, 0.5 * c.height);
  double t_lo = 0.0;
  double t_hi = 1.0;
  for (int i = 0; i < 3; ++i) {
    if (d[i] == 0.0) {
      if (!(std::abs(la[i]) < half[i])) return false;
      continue;
    }
    double t1 = (-half[i] - la[i]) / d[i];
    double t2 = (half[i] - la[i]) / d[i];
    if (t1 > t2) std::swap(t1, t2);
    t_lo = std::max(t_lo, t1);
    t_hi = std::min(t_hi, t2);
    if (!(t_lo < t_hi)) return false;
  }
  return t_lo < t_hi;
}

bool segment_blocked(const Vec3& a, const Vec3& b,
                     std::span<const Cuboid> obstacles) {
  return std::any_of(obstacles.begin(), obstacles.end(), [&](const Cuboid& c) {
    return segment_hits_cuboid(a, b, c);
  });
}

bool point_inside_cuboid(const Vec3& p, const Cuboid& c) {
  const Vec3 l = frame_rotation(c.azimuth).transpose() * (p - c.center);
  return std::abs(l.x()) < 0.5 * c.width && std::abs(l.y()) < 0.5 * c.length &&
         std::abs(l.z()) < 0.5 * c.height;
}

namespace {

std::array<Vec2, 4> footprint(const Cuboid& c) {
  const auto corners = cuboid_corners(c);
  return {corners[0].head<2>(), corners[1].head<2>(), corners[2].head<2>(),
          corners[3].head<2>()};
}

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

}  // namespace

bool footprints_overlap(const Cuboid& a, const Cuboid& b) {
  const auto pa = footprint(a);
  const auto pb = footprint(b);
  // Separating axis test over the two edge normals of each rectangle.
  for (const auto* poly : {&pa, &pb}) {
    for (int e = 0; e < 2; ++e) {
      const Vec2 edge = (*poly)[e + 1] - (*poly)[e];
      const Vec2 axis(-edge.y(), edge.x());
      double amin = 1e300, amax = -1e300, bmin = 1e300, bmax = -1e300;
      for (const auto& p : pa) {
        amin = std::min(amin, axis.dot(p));
        amax = std::max(amax, axis.dot(p));
      }
      for (const auto& p : pb) {
        bmin = std::min(bmin, axis.dot(p));
        bmax = std::max(bmax, axis.dot(p));
      }
      if (amax <= bmin || bmax <= amin) return false;
    }
  }
  return true;
}

Polygon2 convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  Polygon2 hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

namespace {

// One Sutherland-Hodgman pass against the half-plane coord(axis) {>=,<=} bound.
Polygon2 clip_edge(const Polygon2& in, int axis, double bound, bool keep_above) {
  Polygon2 out;
  if (in.empty()) return out;
  auto inside = [&](const Vec2& p) {
    return keep_above ? p[axis] >= bound : p[axis] <= bound;
  };
  for (std::size_t i = 0; i < in.size(); ++i) {
    const Vec2& cur = in[i];
    const Vec2& prev = in[(i + in.size() - 1) % in.size()];
    const bool cin = inside(cur);
    const bool pin = inside(prev);
    if (cin != pin) {
      const double t = (bound - prev[axis]) / (cur[axis] - prev[axis]);
      Vec2 x = prev + t * (cur - prev);
      x[axis] = bound;
      out.push_back(x);
    }
    if (cin) out.push_back(cur);
  }
  return out;
}

}  // namespace

Polygon2 clip_to_rect(const Polygon2& poly, double w, double h) {
  Polygon2 p = clip_edge(poly, 0, 0.0, true);
  p = clip_edge(p, 0, w, false);
  p = clip_edge(p, 1, 0.0, true);
  p = clip_edge(p, 1, h, false);
  Polygon2 dedup;
  for (const auto& v : p) {
    if (dedup.empty() || (v - dedup.back()).norm() > 1e-12) dedup.push_back(v);
  }
  while (dedup.size() > 1 && (dedup.front() - dedup.back()).norm() <= 1e-12) {
    dedup.pop_back();
  }
  return dedup;
}

double polygon_area(const Polygon2& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % poly.size()];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

Vec3 rcs_to_camera(const CameraMount& cam, const Pose2D& ms_pose_rcs,
                   const Vec3& p_rcs) {
  const Vec3 ms(ms_pose_rcs.x, ms_pose_rcs.y, 0.0);
  const Vec3 p_mcs = frame_rotation(ms_pose_rcs.azimuth).transpose() * (p_rcs - ms);
  return frame_rotation(cam.azimuth_in_mcs).transpose() * (p_mcs - cam.offset_in_mcs);
}

Vec2 project_point(const CameraMount& cam, const Vec3& p_cam) {
  const double f = cam.focal_px();
  return {0.5 * cam.image_width + f * p_cam.x() / p_cam.y(),
          0.5 * cam.image_height - f * p_cam.z() / p_cam.y()};
}

Polygon2 project_cuboid(const CameraMount& cam, const Pose2D& ms_pose_rcs,
                        const Cuboid& c) {
  constexpr double kNearDepth = 1e-6;
  std::vector<Vec2> pts;
  for (const auto& corner : cuboid_corners(c)) {
    const Vec3 pc = rcs_to_camera(cam, ms_pose_rcs, corner);
    if (pc.y() > kNearDepth) pts.push_back(project_point(cam, pc));
  }
  if (pts.empty()) return {};
  Polygon2 hull = convex_hull(std::move(pts));
  if (hull.size() < 3) return {};
  Polygon2 clipped = clip_to_rect(hull, cam.image_width, cam.image_height);
  if (clipped.size() < 3 || std::abs(polygon_area(clipped)) < 1e-12) return {};
  return clipped;
}

}  // namespace beamlab
