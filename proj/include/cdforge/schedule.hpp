#pragma once

#include <string>

#include "cdforge/errors.hpp"

namespace cdforge {

// Ramp profiles: Sin2 is sin^2(pi t / 2T); Sin2Sin2 composes it once more,
// sin^2((pi/2) sin^2(pi t / 2T)). Both run 0 -> 1 with flat endpoints.
enum class ScheduleKind { Sin2, Sin2Sin2 };

struct SchedulePlan {
  ScheduleKind kind = ScheduleKind::Sin2Sin2;
  double total_time = 1.0;

  SchedulePlan() = default;
  SchedulePlan(ScheduleKind k, double t) : kind(k), total_time(t) {
    if (total_time <= 0.0) throw DomainError("SchedulePlan: total_time must be > 0");
  }
};

struct ScheduleSample {
  double s = 0.0;
  double s_dot = 0.0;
};

// s(t) and its exact analytic derivative; t must lie in [0, T].
ScheduleSample schedule_eval(const SchedulePlan& plan, double t);

std::string to_string(ScheduleKind kind);
ScheduleKind schedule_kind_from_string(const std::string& name);

}  // namespace cdforge
