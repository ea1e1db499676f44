#pragma once

/**
 * @file
 * Time-independent unavailability and failure-frequency models for basic
 * events. All times are in hours and all rates per hour.
 */

#include <cmath>
#include <optional>
#include <string>
#include <variant>

#include "ftkit/error.hpp"

namespace ftkit {

/// Hours in one year; used for per-year display conversions.
inline constexpr double kHoursPerYear = 8760.0;

/// Constant probability of failure, independent of any repair process.
struct FixedModel {
  double p = 0;
  friend bool operator==(const FixedModel&, const FixedModel&) = default;
};

/// Revealed failures repaired with mean time to restore `mttr`.
/// `mttr == 0` models a non-repairable item (repair rate zero).
struct RateModel {
  double lambda = 0;
  double mttr = 0;
  friend bool operator==(const RateModel&, const RateModel&) = default;
};

/// Unrevealed failures found by proof tests every `tau` hours.
struct DormantModel {
  double lambda = 0;
  double tau = 0;
  double mttr = 0;
  friend bool operator==(const DormantModel&, const DormantModel&) = default;
};

using BasicEventModel = std::variant<FixedModel, RateModel, DormantModel>;

/// Unavailability `q` paired with unconditional failure frequency `w`.
struct Measure {
  double q = 0;
  double w = 0;
  friend bool operator==(const Measure&, const Measure&) = default;
};

namespace detail {

inline void RequireFinite(double value, const char* what) {
  if (!std::isfinite(value))
    throw DomainError(std::string(what) + " must be finite");
}

inline void RequireNonNegative(double value, const char* what) {
  RequireFinite(value, what);
  if (value < 0) throw DomainError(std::string(what) + " must be >= 0");
}

inline void RequirePositive(double value, const char* what) {
  RequireFinite(value, what);
  if (!(value > 0)) throw DomainError(std::string(what) + " must be > 0");
}

/// x - (1 - e^{-x}) without cancellation for small x.
inline double DormantExcess(double x) {
  if (x < 0.05) {
    // x^2/2 - x^3/6 + x^4/24 - ...
    double term = x * x / 2;
    double sum = 0;
    for (int k = 3; term != 0 && k < 40; ++k) {
      double next = sum + term;
      if (next == sum) break;
      sum = next;
      term *= -x / k;
    }
    return sum;
  }
  return x + std::expm1(-x);
}

}  // namespace detail

/// Validates parameter ranges of a model; throws DomainError on violation.
inline void CheckModel(const BasicEventModel& model) {
  std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, FixedModel>) {
          detail::RequireFinite(m.p, "p");
          if (m.p < 0 || m.p > 1) throw DomainError("p must lie in [0, 1]");
        } else if constexpr (std::is_same_v<T, RateModel>) {
          detail::RequireNonNegative(m.lambda, "lambda");
          detail::RequireNonNegative(m.mttr, "mttr");
        } else {
          detail::RequireNonNegative(m.lambda, "lambda");
          detail::RequirePositive(m.tau, "tau");
          detail::RequireNonNegative(m.mttr, "mttr");
        }
      },
      model);
}

inline double QFixed(double p) {
  CheckModel(FixedModel{p});
  return p;
}

/// Failure-repair rate unavailability at time `t`:
/// lambda / (lambda + mu) * (1 - exp(-(lambda + mu) t)), mu = 1 / mttr.
inline double QRate(double lambda, double mttr, double t) {
  CheckModel(RateModel{lambda, mttr});
  detail::RequirePositive(t, "mission time");
  double mu = mttr > 0 ? 1.0 / mttr : 0.0;
  double rate = lambda + mu;
  if (rate == 0) return 0;
  return lambda / rate * -std::expm1(-rate * t);
}

/// Mean unavailability of a proof-tested component, including the repair
/// downtime that follows a failed test.
inline double QDormant(double lambda, double tau, double mttr) {
  CheckModel(DormantModel{lambda, tau, mttr});
  if (lambda == 0) return 0;
  double x = lambda * tau;
  double found = -std::expm1(-x);  // probability the test finds a fault
  double repair = lambda * mttr * found;
  return (detail::DormantExcess(x) + repair) / (x + repair);
}

/// Dormant unavailability with negligible repair time: 1 - (1 - e^{-x}) / x.
inline double QDormantSimplified(double lambda, double tau) {
  CheckModel(DormantModel{lambda, tau, 0});
  if (lambda == 0) return 0;
  double x = lambda * tau;
  return detail::DormantExcess(x) / x;
}

/// q and w of a basic event. Fixed-probability events carry no frequency.
/// `mission_time` is required for RateModel only.
inline Measure MeasureOf(const BasicEventModel& model,
                         std::optional<double> mission_time) {
  return std::visit(
      [&](const auto& m) -> Measure {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, FixedModel>) {
          return {QFixed(m.p), 0.0};
        } else if constexpr (std::is_same_v<T, RateModel>) {
          if (!mission_time)
            throw DomainError(
                "failure-repair rate model requires a mission time");
          double q = QRate(m.lambda, m.mttr, *mission_time);
          return {q, m.lambda * (1 - q)};
        } else {
          double q = QDormant(m.lambda, m.tau, m.mttr);
          return {q, m.lambda * (1 - q)};
        }
      },
      model);
}

}  // namespace ftkit
