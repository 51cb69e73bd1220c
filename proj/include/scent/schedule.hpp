#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "scent/dual_updates.hpp"
#include "scent/errors.hpp"
#include "scent/step_size.hpp"

namespace scent {

enum class ScheduleKind { constant, inv_sqrt_T, cosine, erm_rate, sox_rate, infinite };

struct StepSchedule {
  ScheduleKind kind = ScheduleKind::constant;
  double base = 1.0;
  double gamma_prime = 1.0;   // sox_rate only
  std::uint64_t horizon = 0;  // inv_sqrt_T and cosine; 0 means the run length

  static StepSchedule constant(double base) { return {ScheduleKind::constant, base, 1.0, 0}; }
  static StepSchedule inv_sqrt_T(double base, std::uint64_t T) { return {ScheduleKind::inv_sqrt_T, base, 1.0, T}; }
  static StepSchedule cosine(double base, std::uint64_t T) { return {ScheduleKind::cosine, base, 1.0, T}; }
  static StepSchedule erm_rate() { return {ScheduleKind::erm_rate, 1.0, 1.0, 0}; }
  static StepSchedule sox_rate(double gamma_prime) { return {ScheduleKind::sox_rate, 1.0, gamma_prime, 0}; }
  static StepSchedule infinite() { return {ScheduleKind::infinite, 1.0, 1.0, 0}; }

  bool depends_on_nu() const { return kind == ScheduleKind::erm_rate || kind == ScheduleKind::sox_rate; }
};

inline std::string_view to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::constant: return "constant";
    case ScheduleKind::inv_sqrt_T: return "inv_sqrt_T";
    case ScheduleKind::cosine: return "cosine";
    case ScheduleKind::erm_rate: return "erm_rate";
    case ScheduleKind::sox_rate: return "sox_rate";
    case ScheduleKind::infinite: return "infinite";
  }
  return "?";
}

inline ScheduleKind parse_schedule_kind(std::string_view name) {
  for (auto k : {ScheduleKind::constant, ScheduleKind::inv_sqrt_T, ScheduleKind::cosine,
                 ScheduleKind::erm_rate, ScheduleKind::sox_rate, ScheduleKind::infinite}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown schedule kind '" + std::string(name) + "'");
}

namespace detail {

// Scale factor of the t-dependent kinds. Cosine decays from 1 at t = 1 and
// stays strictly positive through t = T.
inline double schedule_factor(const StepSchedule& s, std::uint64_t t) {
  if (s.kind != ScheduleKind::constant && s.horizon == 0) throw std::logic_error("schedule horizon not resolved");
  switch (s.kind) {
    case ScheduleKind::constant: return 1.0;
    case ScheduleKind::inv_sqrt_T: return 1.0 / std::sqrt(static_cast<double>(s.horizon));
    case ScheduleKind::cosine: {
      const double frac = static_cast<double>(t - 1) / static_cast<double>(s.horizon);
      return 0.5 * (1.0 + std::cos(std::numbers::pi * frac));
    }
    default: return 1.0;
  }
}

}  // namespace detail

// allow_zero admits a constant schedule with base 0, which freezes the
// variable it drives.
inline void validate_schedule(const StepSchedule& s, std::string_view what, bool allow_zero = false) {
  const std::string name(what);
  switch (s.kind) {
    case ScheduleKind::constant:
    case ScheduleKind::inv_sqrt_T:
    case ScheduleKind::cosine:
      if (allow_zero && s.kind == ScheduleKind::constant && s.base == 0.0) break;
      if (!(s.base > 0.0) || !std::isfinite(s.base)) throw ConfigError(name + ": base must be positive and finite");
      if (s.kind != ScheduleKind::constant && s.horizon == 0) throw ConfigError(name + ": horizon must be positive");
      break;
    case ScheduleKind::sox_rate:
      if (!(s.gamma_prime > 0.0)) throw ConfigError(name + ": gamma' must be positive");
      break;
    case ScheduleKind::erm_rate:
    case ScheduleKind::infinite: break;
  }
}

// Fills a zero horizon with the run length.
inline StepSchedule resolve_horizon(StepSchedule s, std::uint64_t run_length) {
  if (s.horizon == 0) s.horizon = run_length;
  return s;
}

// Dual step size at iteration t (1-based). nu_prev is the coordinate's value
// before the update; only erm_rate and sox_rate read it.
inline StepSize schedule_alpha(const StepSchedule& s, std::uint64_t t, double nu_prev = 0.0) {
  if (t == 0) throw std::invalid_argument("schedule_alpha: t starts at 1");
  switch (s.kind) {
    case ScheduleKind::infinite: return StepSize::infinite();
    case ScheduleKind::erm_rate: return erm_rate_state(nu_prev, t);
    case ScheduleKind::sox_rate: return StepSize::from_log(std::log(s.gamma_prime) - nu_prev);
    default: return StepSize::finite(s.base * detail::schedule_factor(s, t));
  }
}

inline std::vector<StepSize> schedule_alpha(const StepSchedule& s, std::uint64_t t, std::span<const double> nu_prev) {
  std::vector<StepSize> out;
  out.reserve(nu_prev.size());
  for (double nu : nu_prev) out.push_back(schedule_alpha(s, t, nu));
  return out;
}

// Primal learning rate; only the t-dependent real kinds make sense here.
inline double schedule_eta(const StepSchedule& s, std::uint64_t t) {
  if (t == 0) throw std::invalid_argument("schedule_eta: t starts at 1");
  switch (s.kind) {
    case ScheduleKind::constant:
    case ScheduleKind::inv_sqrt_T:
    case ScheduleKind::cosine: return s.base * detail::schedule_factor(s, t);
    default: throw ConfigError("primal schedule must be constant, inv_sqrt_T or cosine");
  }
}

}  // namespace scent
