#include "seaway/colregs.hpp"

namespace seaway {

void VesselState::validate() const {
  if (!pos.allFinite()) throw InvalidInput("vessel position must be finite");
  if (!(cog >= 0.0 && cog < 360.0)) throw InvalidInput("vessel course must lie in [0, 360)");
  if (!(sog >= 0.0) || !std::isfinite(sog)) throw InvalidInput("vessel speed must be non-negative");
  if (!(length > 0.0) || !std::isfinite(length)) throw InvalidInput("vessel length must be positive");
  if (!(draught >= 0.0)) throw InvalidInput("vessel draught must be non-negative");
}

void ColregsConfig::validate() const {
  if (!(theta_head >= 0.0 && theta_head < 90.0)) throw InvalidInput("theta_head must lie in [0, 90)");
  if (!(delta_head >= 0.0 && delta_head < 90.0)) throw InvalidInput("delta_head must lie in [0, 90)");
  if (!(abaft > 90.0 && abaft < 180.0)) throw InvalidInput("stern sector must start between 90 and 180 degrees");
  if (!(step > 0.0)) throw InvalidInput("compliance step must be positive");
}

std::string_view to_string(EncounterKind k) {
  switch (k) {
    case EncounterKind::Overtaking: return "Overtaking";
    case EncounterKind::HeadOn: return "HeadOn";
    case EncounterKind::CrossingGiveWay: return "CrossingGiveWay";
    case EncounterKind::CrossingStandOn: return "CrossingStandOn";
    case EncounterKind::None: break;
  }
  return "None";
}

double absolute_bearing(const LocalPoint& from, const LocalPoint& to) {
  const LocalPoint d = to - from;
  if (d.x() == 0.0 && d.y() == 0.0) throw InvalidInput("bearing between coincident positions");
  return wrap360(rad2deg(std::atan2(east(d), north(d))));
}

double relative_bearing(const VesselState& from, const LocalPoint& to) {
  return wrap360(absolute_bearing(from.pos, to) - from.cog);
}

Encounter classify(const VesselState& own, const VesselState& target, const ColregsConfig& cfg, double t) {
  own.validate();
  target.validate();
  cfg.validate();
  Encounter enc{EncounterKind::None, target, t};
  const double own_from_target = relative_bearing(target, own.pos);
  const double target_from_own = relative_bearing(own, target.pos);
  const double stern_lo = cfg.abaft, stern_hi = 360.0 - cfg.abaft;

  auto near_bow = [&](double rel) { return rel < cfg.theta_head || rel > 360.0 - cfg.theta_head; };
  const double course_diff = std::abs(wrap360(own.cog - target.cog) - 180.0);

  if (own_from_target > stern_lo && own_from_target < stern_hi && own.sog > target.sog)
    enc.kind = EncounterKind::Overtaking;
  else if (near_bow(target_from_own) && near_bow(own_from_target) && course_diff <= cfg.delta_head)
    enc.kind = EncounterKind::HeadOn;
  else if (target_from_own >= cfg.theta_head && target_from_own <= stern_lo)
    enc.kind = EncounterKind::CrossingGiveWay;
  else if (target_from_own >= stern_hi && target_from_own <= 360.0 - cfg.theta_head)
    enc.kind = EncounterKind::CrossingStandOn;
  return enc;
}

bool ellipse_contains(const ComfortEllipse& e, const LocalPoint& p) {
  const LocalPoint u = heading_vector(e.heading);
  const LocalPoint starboard = heading_vector(e.heading + 90.0);
  const LocalPoint d = p - e.center;
  const double x = d.dot(u) / e.semi_major;
  const double y = d.dot(starboard) / e.semi_minor;
  return x * x + y * y <= 1.0;
}

VesselState predict(const VesselState& v, double dt) {
  VesselState out = v;
  out.pos += v.velocity() * dt;
  return out;
}

bool in_forbidden_sector(const VesselState& target, const LocalPoint& p) {
  const LocalPoint d = p - target.pos;
  return d.dot(heading_vector(target.cog)) > 0.0 && d.dot(heading_vector(target.cog + 90.0)) > 0.0;
}

bool compliant_leg(const Encounter& enc, const LocalPoint& a, const LocalPoint& b, double t0, double t1,
                   const ColregsConfig& cfg) {
  const double span = t1 - t0;
  return compliant(
      enc, [&](double t) -> LocalPoint { return a + (b - a) * ((t - t0) / span); },
      [&](double t) { return predict(enc.target, t - enc.classified_at); }, t0, t1, cfg);
}

}  // namespace seaway
