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

#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace beamlab {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = 3.14159265358979323846;

/// Wraps an angle in radians to (-pi, pi].
double wrap_angle(double radians);

/// Planar pose. The azimuth is measured from the frame's +Y axis and is
/// positive for clockwise rotation seen from above, so a heading of
/// azimuth a points along (sin a, cos a).
struct Pose2D {
  double x = 0.0;
  double y = 0.0;
  double azimuth = 0.0;
};

/// Oriented box. `center` is the geometric center (not the ground contact
/// point); `length` runs along the heading, `width` across it.
struct Cuboid {
  Vec3 center = Vec3::Zero();
  double length = 1.0;
  double width = 1.0;
  double height = 1.0;
  double azimuth = 0.0;

  void validate() const;
};

/// A camera rigidly attached to the mobile station.
struct CameraMount {
  Vec3 offset_in_mcs = Vec3::Zero();
  double azimuth_in_mcs = 0.0;
  double hfov = kPi / 2.0;
  int image_width = 320;
  int image_height = 120;

  /// Focal length in pixels for square pixels: (W/2) / tan(hfov/2).
  double focal_px() const;
  void validate() const;
};

/// Checks that the mounts' horizontal sectors tile 360 degrees without
/// overlap. Throws std::invalid_argument otherwise.
void validate_camera_ring(std::span<const CameraMount> mounts);

struct PlacedPoint {
  Vec3 position = Vec3::Zero();
  double azimuth = 0.0;
};

/// Frame rotation used to map camera coordinates into the MS frame:
/// rows [cos t, sin t, 0], [-sin t, cos t, 0], [0, 0, 1].
Eigen::Matrix3d frame_rotation(double theta);

PlacedPoint ccs_to_mcs(const Vec3& p_ccs, double azimuth_ccs,
                       const CameraMount& mount);
PlacedPoint mcs_to_ccs(const Vec3& p_mcs, double azimuth_mcs,
                       const CameraMount& mount);

/// MS and RSU frames have parallel axes; the MS frame origin sits at the
/// ground point below the MS center.
Vec3 mcs_to_rcs(const Vec3& p_mcs, const Vec3& ms_in_rcs);
Vec3 rcs_to_mcs(const Vec3& p_rcs, const Vec3& ms_in_rcs);

/// Corners of the box, bottom face first (counter-clockwise seen from
/// above when azimuth is 0), then the top face in the same order.
std::array<Vec3, 8> cuboid_corners(const Cuboid& c);

/// True iff the open segment (a, b) passes through the open interior of c.
/// Grazing a face, edge or corner does not count.
bool segment_hits_cuboid(const Vec3& a, const Vec3& b, const Cuboid& c);

/// True iff the open segment (a, b) passes through any obstacle interior.
bool segment_blocked(const Vec3& a, const Vec3& b,
                     std::span<const Cuboid> obstacles);

/// Strict interior test, used by sampling oracles and overlap checks.
bool point_inside_cuboid(const Vec3& p, const Cuboid& c);

/// True iff the footprints (XY rectangles) of two boxes overlap with
/// positive area.
bool footprints_overlap(const Cuboid& a, const Cuboid& b);

using Polygon2 = std::vector<Vec2>;

/// Convex hull (counter-clockwise in pixel coordinates, no collinear
/// points). Fewer than three distinct points yields the distinct points.
Polygon2 convex_hull(std::vector<Vec2> points);

/// Sutherland-Hodgman clip of a convex polygon to [0,w] x [0,h].
Polygon2 clip_to_rect(const Polygon2& poly, double w, double h);

double polygon_area(const Polygon2& poly);

/// Camera-frame coordinates of an RSU-frame point: x right, y forward
/// (depth), z up, origin at the camera.
Vec3 rcs_to_camera(const CameraMount& cam, const Pose2D& ms_pose_rcs,
                   const Vec3& p_rcs);

/// Pinhole projection of a camera-frame point with positive depth; the
/// principal point is the image center and v grows downward.
Vec2 project_point(const CameraMount& cam, const Vec3& p_cam);

/// Projects a box given in the RSU frame into camera pixels. Returns the
/// convex hull of the corners in front of the camera clipped to the image,
/// or an empty polygon if nothing is visible.
Polygon2 project_cuboid(const CameraMount& cam, const Pose2D& ms_pose_rcs,
                        const Cuboid& c);

}  // namespace beamlab
