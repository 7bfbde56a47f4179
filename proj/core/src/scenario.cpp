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

#include "beamlab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace beamlab {

namespace {

constexpr VehicleDims kCarDims{"car", 3.71, 1.79, 1.55};
constexpr VehicleDims kVanDims{"van", 5.20, 2.61, 2.47};
constexpr VehicleDims kBusDims{"bus", 11.08, 3.25, 3.33};

}  // namespace

const VehicleDims& vehicle_dims(VehicleKind kind) {
  switch (kind) {
    case VehicleKind::kCar:
      return kCarDims;
    case VehicleKind::kVan:
      return kVanDims;
    case VehicleKind::kBus:
      return kBusDims;
  }
  throw std::invalid_argument("unknown vehicle kind");
}

VehicleKind vehicle_kind_from_name(std::string_view name) {
  if (name == "car") return VehicleKind::kCar;
  if (name == "van") return VehicleKind::kVan;
  if (name == "bus") return VehicleKind::kBus;
  throw std::invalid_argument("unknown vehicle kind '" + std::string(name) + "'");
}

Vec3 max_vehicle_dims() {
  Vec3 m = Vec3::Zero();
  for (auto k : {VehicleKind::kCar, VehicleKind::kVan, VehicleKind::kBus}) {
    const auto& d = vehicle_dims(k);
    m = m.cwiseMax(Vec3(d.length, d.width, d.height));
  }
  return m;
}

Vec2 LaneSpec::direction() const { return (end - start).normalized(); }

double LaneSpec::length() const { return (end - start).norm(); }

double LaneSpec::azimuth() const {
  const Vec2 d = direction();
  return wrap_angle(std::atan2(d.x(), d.y()));
}

bool LaneSpec::contains(const Vec2& p) const {
  const Vec2 d = direction();
  const Vec2 rel = p - start;
  const double along = rel.dot(d);
  const double across = rel.x() * d.y() - rel.y() * d.x();
  return along >= 0.0 && along <= length() && std::abs(across) <= 0.5 * width;
}

ScenarioConfig ScenarioConfig::defaults() {
  ScenarioConfig c;
  constexpr double kLaneWidth = 3.5;
  constexpr double kCurb = 1.0;
  constexpr double kHalfLength = 60.0;
  for (int i = 0; i < 6; ++i) {
    const double y = kCurb + kLaneWidth * (i + 0.5);
    LaneSpec lane;
    lane.id = i;
    lane.width = kLaneWidth;
    // Odd lanes run toward +X, even lanes toward -X.
    if (i % 2 == 1) {
      lane.start = Vec2(-kHalfLength, y);
      lane.end = Vec2(kHalfLength, y);
    } else {
      lane.start = Vec2(kHalfLength, y);
      lane.end = Vec2(-kHalfLength, y);
    }
    c.lanes.push_back(lane);
  }
  c.ms_lane = 1;
  c.vehicles_per_lane = {5, 5, 5, 5, 5, 5};
  c.coverage = {-15.0, 15.0, 0.0, 15.0};
  c.ms_start_s = kHalfLength - 15.0 - 2.5;

  const double heights[] = {9.0, 14.0, 11.0, 7.0, 16.0, 10.0, 12.0};
  int h = 0;
  for (double x = -52.0; x <= 56.0; x += 18.0) {
    for (double y : {-9.0, 32.0}) {
      Cuboid b;
      b.length = 15.0;
      b.width = 10.0;
      b.height = heights[h % 7];
      b.azimuth = kPi / 2.0;
      b.center = Vec3(x, y, 0.5 * b.height);
      c.buildings.push_back(b);
      ++h;
    }
  }
  return c;
}

void ScenarioConfig::validate() const {
  if (lanes.empty()) throw std::invalid_argument("scenario.lanes: empty");
  if (ms_lane < 0 || ms_lane >= static_cast<int>(lanes.size())) {
    throw std::invalid_argument("scenario.ms_lane: out of range");
  }
  if (vehicles_per_lane.size() != lanes.size()) {
    throw std::invalid_argument(
        "scenario.vehicles_per_lane: must have one entry per lane");
  }
  for (int n : vehicles_per_lane) {
    if (n < 0) throw std::invalid_argument("scenario.vehicles_per_lane: negative");
  }
  for (const auto& l : lanes) {
    if (!(l.width > 0.0) || !(l.length() > 0.0)) {
      throw std::invalid_argument("scenario.lanes: degenerate lane " +
                                  std::to_string(l.id));
    }
  }
  if (!(speed_min > 0.0 && speed_max >= speed_min)) {
    throw std::invalid_argument("scenario.speed_range: need 0 < min <= max");
  }
  if (!(gap_min >= 0.0)) throw std::invalid_argument("scenario.gap_min: negative");
  if (!(coverage.x_max > coverage.x_min && coverage.y_max > coverage.y_min)) {
    throw std::invalid_argument("scenario.coverage: empty rectangle");
  }
  if (!(snapshot_interval > 0.0)) {
    throw std::invalid_argument("scenario.snapshot_interval: must be positive");
  }
  if (num_cameras < 1) throw std::invalid_argument("scenario.num_cameras: < 1");
  for (const auto& b : buildings) b.validate();
}

Cuboid Scenario::vehicle_box(int index) const {
  const Vehicle& v = vehicles.at(index);
  const auto& d = vehicle_dims(v.kind);
  const Pose2D p = vehicle_pose(index);
  Cuboid c;
  c.center = Vec3(p.x, p.y, 0.5 * d.height);
  c.length = d.length;
  c.width = d.width;
  c.height = d.height;
  c.azimuth = p.azimuth;
  return c;
}

Pose2D Scenario::vehicle_pose(int index) const {
  const Vehicle& v = vehicles.at(index);
  const LaneSpec& lane = config.lanes.at(v.lane);
  const Vec2 xy = lane.start + v.s * lane.direction();
  return {xy.x(), xy.y(), lane.azimuth()};
}

Vec3 Scenario::ms_antenna() const {
  const Pose2D p = ms_pose();
  const double roof = vehicle_dims(vehicles.at(ms_index).kind).height;
  return {p.x, p.y, roof + config.antenna_above_roof};
}

bool same_scenario(const Scenario& a, const Scenario& b) {
  return a.seed == b.seed && a.vehicles == b.vehicles && a.ms_index == b.ms_index &&
         a.time == b.time && a.camera_mounts.size() == b.camera_mounts.size();
}

std::vector<CameraMount> make_camera_ring(int count, double height,
                                          int image_width, int image_height) {
  std::vector<CameraMount> mounts;
  const double sector = 2.0 * kPi / count;
  for (int i = 0; i < count; ++i) {
    CameraMount m;
    m.offset_in_mcs = Vec3(0.0, 0.0, height);
    m.azimuth_in_mcs = wrap_angle(i * sector);
    m.hfov = sector;
    m.image_width = image_width;
    m.image_height = image_height;
    mounts.push_back(m);
  }
  return mounts;
}

namespace {

struct Interval {
  double lo;
  double hi;
};

// Places vehicles (in the given order) inside [lo, hi] along a lane with
// random slack distribution and at least `gap` between neighbours.
bool place_in_interval(std::vector<Vehicle*>& vs, Interval iv, double gap,
                       std::mt19937_64& rng) {
  if (vs.empty()) return true;
  double need = gap * static_cast<double>(vs.size() - 1);
  for (auto* v : vs) need += vehicle_dims(v->kind).length;
  const double slack = (iv.hi - iv.lo) - need;
  if (slack < 0.0) return false;
  std::uniform_real_distribution<double> u(0.0, slack);
  std::vector<double> offsets(vs.size());
  for (auto& o : offsets) o = u(rng);
  std::sort(offsets.begin(), offsets.end());
  double cursor = iv.lo;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const double len = vehicle_dims(vs[i]->kind).length;
    const double back = cursor + offsets[i];
    vs[i]->s = back + 0.5 * len;
    cursor += len + gap;
  }
  return true;
}

double required_length(const std::vector<Vehicle*>& vs, double gap) {
  if (vs.empty()) return 0.0;
  double need = gap * static_cast<double>(vs.size() - 1);
  for (auto* v : vs) need += vehicle_dims(v->kind).length;
  return need;
}

}  // namespace

std::vector<CameraMount> camera_ring_for(const ScenarioConfig& config) {
  return make_camera_ring(config.num_cameras,
                          vehicle_dims(VehicleKind::kCar).height + config.camera_above_roof,
                          config.image_width, config.image_height);
}

Scenario spawn_scenario(std::uint64_t seed, const ScenarioConfig& config) {
  config.validate();
  Scenario sc;
  sc.seed = seed;
  sc.config = config;
  sc.camera_mounts = camera_ring_for(config);

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> kind_dist(0, 2);
  std::uniform_real_distribution<double> speed_dist(config.speed_min, config.speed_max);

  // The MS is always a car and is placed first so the others avoid it.
  Vehicle ms;
  ms.kind = VehicleKind::kCar;
  ms.lane = config.ms_lane;
  ms.s = config.ms_start_s;
  ms.desired_speed = speed_dist(rng);
  ms.speed = ms.desired_speed;
  const double ms_len = vehicle_dims(ms.kind).length;
  const double lane_len = config.lanes[config.ms_lane].length();
  if (ms.s - 0.5 * ms_len < 0.0 || ms.s + 0.5 * ms_len > lane_len) {
    throw std::invalid_argument("scenario.ms_start_s: MS does not fit in its lane");
  }
  sc.vehicles.push_back(ms);
  sc.ms_index = 0;

  for (std::size_t li = 0; li < config.lanes.size(); ++li) {
    const int n = config.vehicles_per_lane[li];
    std::vector<Vehicle> lane_vehicles(n);
    for (auto& v : lane_vehicles) {
      v.kind = static_cast<VehicleKind>(kind_dist(rng));
      v.lane = static_cast<int>(li);
      v.desired_speed = speed_dist(rng);
      v.speed = v.desired_speed;
    }
    std::vector<Vehicle*> ptrs;
    for (auto& v : lane_vehicles) ptrs.push_back(&v);
    const double len = config.lanes[li].length();
    const std::string where = "scenario: lane " + std::to_string(li);

    if (static_cast<int>(li) != config.ms_lane) {
      if (!place_in_interval(ptrs, {0.0, len}, config.gap_min, rng)) {
        throw std::invalid_argument(where + " cannot fit " + std::to_string(n) +
                                    " vehicles");
      }
    } else {
      const Interval behind{0.0, ms.s - 0.5 * ms_len - config.gap_min};
      const Interval ahead{ms.s + 0.5 * ms_len + config.gap_min, len};
      const double wb = std::max(0.0, behind.hi - behind.lo);
      const double wa = std::max(0.0, ahead.hi - ahead.lo);
      int k = 0;
      if (n > 0 && wb + wa > 0.0) {
        std::binomial_distribution<int> split(n, wb / (wb + wa));
        k = split(rng);
      }
      // Move the split toward feasibility if the random draw overflows a side.
      auto fits = [&](int kb) {
        std::vector<Vehicle*> b(ptrs.begin(), ptrs.begin() + kb);
        std::vector<Vehicle*> a(ptrs.begin() + kb, ptrs.end());
        return required_length(b, config.gap_min) <= wb &&
               required_length(a, config.gap_min) <= wa;
      };
      int chosen = -1;
      for (int delta = 0; delta <= n && chosen < 0; ++delta) {
        for (int cand : {k - delta, k + delta}) {
          if (cand >= 0 && cand <= n && fits(cand)) {
            chosen = cand;
            break;
          }
        }
      }
      if (chosen < 0) {
        throw std::invalid_argument(where + " cannot fit " + std::to_string(n) +
                                    " vehicles around the MS");
      }
      std::vector<Vehicle*> b(ptrs.begin(), ptrs.begin() + chosen);
      std::vector<Vehicle*> a(ptrs.begin() + chosen, ptrs.end());
      place_in_interval(b, behind, config.gap_min, rng);
      place_in_interval(a, ahead, config.gap_min, rng);
    }
    for (const auto& v : lane_vehicles) sc.vehicles.push_back(v);
  }
  return sc;
}

Scenario step(const Scenario& scenario, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  Scenario next = scenario;
  next.time = scenario.time + dt;
  const auto& lanes = scenario.config.lanes;
  const double gap = scenario.config.gap_min;

  for (std::size_t li = 0; li < lanes.size(); ++li) {
    std::vector<int> order;
    for (std::size_t i = 0; i < scenario.vehicles.size(); ++i) {
      const auto& v = scenario.vehicles[i];
      if (v.active && v.lane == static_cast<int>(li)) order.push_back(static_cast<int>(i));
    }
    // Leader first.
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return scenario.vehicles[a].s > scenario.vehicles[b].s;
    });
    const double lane_len = lanes[li].length();
    int leader = -1;
    for (int idx : order) {
      const Vehicle& cur = scenario.vehicles[idx];
      Vehicle& out = next.vehicles[idx];
      double speed = cur.desired_speed;
      if (leader >= 0) {
        const Vehicle& lead = next.vehicles[leader];
        const double lead_back = lead.s - 0.5 * vehicle_dims(lead.kind).length;
        const double front = cur.s + 0.5 * vehicle_dims(cur.kind).length;
        const double room = lead_back - gap - front;
        speed = std::clamp(room / dt, 0.0, speed);
      }
      out.speed = speed;
      out.s = cur.s + speed * dt;
      if (out.s + 0.5 * vehicle_dims(out.kind).length > lane_len) {
        out.active = false;
      } else {
        leader = idx;
      }
    }
  }
  return next;
}

std::vector<Cuboid> Snapshot::other_vehicle_boxes() const {
  std::vector<Cuboid> out;
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    if (static_cast<int>(i) != ms_index && vehicles[i].active) out.push_back(boxes[i]);
  }
  return out;
}

Snapshot make_snapshot(const Scenario& scenario, long step_index, int index) {
  Snapshot s;
  s.index = index;
  s.step = step_index;
  s.time = static_cast<double>(step_index) * scenario.config.snapshot_interval;
  s.vehicles = scenario.vehicles;
  for (std::size_t i = 0; i < scenario.vehicles.size(); ++i) {
    s.boxes.push_back(scenario.vehicle_box(static_cast<int>(i)));
  }
  s.ms_index = scenario.ms_index;
  s.ms_pose_rcs = scenario.ms_pose();
  s.ms_location = Vec2(s.ms_pose_rcs.x, s.ms_pose_rcs.y);
  s.ms_antenna = scenario.ms_antenna();
  return s;
}

std::vector<Snapshot> sample_trajectory(const Scenario& scenario) {
  const double td = scenario.config.snapshot_interval;
  const long max_steps = static_cast<long>(std::ceil(scenario.config.horizon / td));
  std::vector<Snapshot> out;
  Scenario cur = scenario;
  bool entered = false;
  for (long k = 0; k <= max_steps; ++k) {
    if (k > 0) cur = step(cur, td);
    const Vehicle& ms = cur.vehicles[cur.ms_index];
    if (!ms.active) break;
    const Pose2D p = cur.ms_pose();
    const bool inside = cur.config.coverage.contains(Vec2(p.x, p.y));
    if (inside) {
      entered = true;
      out.push_back(make_snapshot(cur, k, static_cast<int>(out.size()) + 1));
    } else if (entered) {
      return out;
    }
  }
  if (!entered) {
    throw std::runtime_error("sample_trajectory: MS never enters the coverage area (seed " +
                             std::to_string(scenario.seed) + ")");
  }
  return out;
}

}  // namespace beamlab
