#include "cdforge/schedule.hpp"

#include <cmath>

namespace cdforge {

ScheduleSample schedule_eval(const SchedulePlan& plan, double t) {
  const double T = plan.total_time;
  if (t < 0.0 || t > T)
    throw DomainError("schedule_eval: t outside [0, T]");
  const double pi = M_PI;
  const double u = std::sin(pi * t / (2.0 * T));
  const double inner = u * u;                                // sin^2(pi t / 2T)
  const double inner_dot = (pi / (2.0 * T)) * std::sin(pi * t / T);
  if (plan.kind == ScheduleKind::Sin2) return {inner, inner_dot};
  const double s = std::pow(std::sin(0.5 * pi * inner), 2);
  const double s_dot = 0.5 * pi * std::sin(pi * inner) * inner_dot;
  return {s, s_dot};
}

std::string to_string(ScheduleKind kind) {
  return kind == ScheduleKind::Sin2 ? "sin2" : "sin2sin2";
}

ScheduleKind schedule_kind_from_string(const std::string& name) {
  if (name == "sin2") return ScheduleKind::Sin2;
  if (name == "sin2sin2") return ScheduleKind::Sin2Sin2;
  throw DomainError("unknown schedule kind: " + name);
}

}  // namespace cdforge
