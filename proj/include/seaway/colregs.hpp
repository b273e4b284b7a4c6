#pragma once

#include "seaway/types.hpp"

#include <cmath>
#include <numbers>
#include <string_view>

namespace seaway {

constexpr double kKnot = 1852.0 / 3600.0;  // m/s

inline double deg2rad(double d) { return d * std::numbers::pi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / std::numbers::pi; }
//! Wraps an angle in degrees into [0, 360).
inline double wrap360(double d) {
  d = std::fmod(d, 360.0);
  if (d < 0.0) d += 360.0;
  return d >= 360.0 ? 0.0 : d;
}

//! Unit vector along a course measured clockwise from North.
inline LocalPoint heading_vector(double cog_deg) {
  const double a = deg2rad(cog_deg);
  return local_point(std::cos(a), std::sin(a));
}

struct VesselState {
  LocalPoint pos = LocalPoint::Zero();
  double cog = 0.0;      // degrees clockwise from North
  double sog = 0.0;      // knots
  double length = 1.0;   // meters
  double draught = 0.0;  // meters

  void validate() const;
  LocalPoint velocity() const { return heading_vector(cog) * (sog * kKnot); }
};

enum class EncounterKind { None, Overtaking, HeadOn, CrossingGiveWay, CrossingStandOn };

std::string_view to_string(EncounterKind k);

struct Encounter {
  EncounterKind kind = EncounterKind::None;
  VesselState target;
  double classified_at = 0.0;  // seconds
};

//! Sector conventions for classification and the compliance sampling step.
struct ColregsConfig {
  double theta_head = 6.0;   // bow tolerance for head-on, degrees
  double delta_head = 10.0;  // course-difference tolerance around 180, degrees
  double abaft = 112.5;      // start of the stern sector, degrees
  double step = 5.0;         // seconds between compliance samples

  void validate() const;
};

struct ComfortEllipse {
  LocalPoint center = LocalPoint::Zero();
  double heading = 0.0;  // degrees, the target's course
  double semi_major = 4.0;
  double semi_minor = 1.6;

  //! 8L by 3.2L zone centred on the vessel.
  static ComfortEllipse around(const VesselState& v) { return {v.pos, v.cog, 4.0 * v.length, 1.6 * v.length}; }
};

//! Bearing of `to` from `from.pos` measured clockwise from from's heading, in [0, 360).
double relative_bearing(const VesselState& from, const LocalPoint& to);
//! Bearing of `to` from `from` measured clockwise from North, in [0, 360).
double absolute_bearing(const LocalPoint& from, const LocalPoint& to);

Encounter classify(const VesselState& own, const VesselState& target, const ColregsConfig& cfg = {}, double t = 0.0);

bool ellipse_contains(const ComfortEllipse& e, const LocalPoint& p);

//! Constant course and speed extrapolation by `dt` seconds.
VesselState predict(const VesselState& v, double dt);

//! Own position inside the half-plane to the target's starboard while ahead of
//! its beam, i.e. a pass that would leave the target to own's starboard.
bool in_forbidden_sector(const VesselState& target, const LocalPoint& p);

//! Samples [t0, t1] every cfg.step seconds (both ends included). Fails if own
//! ship enters the comfort ellipse, or for give-way encounters, the forbidden
//! sector.
template <typename OwnAt, typename TargetAt>
bool compliant(const Encounter& enc, OwnAt&& own_pos_at, TargetAt&& target_at, double t0, double t1,
               const ColregsConfig& cfg = {}) {
  if (!(t1 > t0)) throw InvalidInput("compliance window requires t1 > t0");
  const bool give_way = enc.kind == EncounterKind::HeadOn || enc.kind == EncounterKind::CrossingGiveWay;
  const int steps = static_cast<int>(std::ceil((t1 - t0) / cfg.step - 1e-12));
  for (int k = 0; k <= steps; ++k) {
    const double t = k == steps ? t1 : t0 + k * cfg.step;
    const LocalPoint p = own_pos_at(t);
    const VesselState target = target_at(t);
    if (ellipse_contains(ComfortEllipse::around(target), p)) return false;
    if (give_way && in_forbidden_sector(target, p)) return false;
  }
  return true;
}

//! Compliance of a straight leg a -> b sailed over [t0, t1] against the
//! encounter's target moving at constant course and speed from classification time.
bool compliant_leg(const Encounter& enc, const LocalPoint& a, const LocalPoint& b, double t0, double t1,
                   const ColregsConfig& cfg = {});

}  // namespace seaway
