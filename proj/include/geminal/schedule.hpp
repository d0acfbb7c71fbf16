#pragma once

// Time dependence of the (epsilon, lambda) parameters.

#include <functional>
#include <string>

namespace geminal {

enum class RampProfile {
  linear,     // u
  quadratic,  // u^2, zero slope at the start
  smooth      // 3u^2 - 2u^3, zero slope at both ends
};

RampProfile parse_profile(const std::string& name);
std::string profile_name(RampProfile profile);
double ramp_value(RampProfile profile, double u);

/// Parameter schedule on [0, t_final] with step dt.
///
/// type "constant": eps(t) = epsilon, lambda(t) = lambda_value.
/// type "sudden":   lambda jumps from 0 to 1 at T.
/// type "ramp":     lambda = profile(t / T) up to T, then 1. When T3 > 0 the
///                  staged form is used instead: eps rises over [0, T1],
///                  lambda rises over [T1, T2], eps falls over [T2, T3].
/// type "coupled":  constant (epsilon, 1); nuclei move under the electrons.
/// type "driven":   eps(t) = epsilon + drive_amplitude sin(drive_frequency t),
///                  lambda = lambda_value.
struct Schedule {
  std::string type = "ramp";
  double epsilon = 0.05;
  double lambda_value = 0.0;
  double T = 100.0;
  double T1 = 0.0;
  double T2 = 0.0;
  double T3 = 0.0;
  double dt = 0.01;
  double t_final = 100.0;
  RampProfile profile = RampProfile::smooth;
  double drive_amplitude = 0.0;
  double drive_frequency = 0.0;

  /// Optional overrides, used when set.
  std::function<double(double)> epsilon_fn;
  std::function<double(double)> lambda_fn;

  double eps(double t) const;
  double lambda(double t) const;
  bool staged() const { return type == "ramp" && T3 > 0.0; }
  /// True when neither parameter changes in time.
  bool time_independent() const;
  long steps() const;

  /// Throws InputError on an unknown type or a nonpositive dt / t_final.
  void validate() const;

  static Schedule constant(double epsilon, double lambda, double dt, double t_final);
  static Schedule sudden(double epsilon, double T, double dt, double t_final);
  static Schedule ramp(double epsilon, double T, RampProfile profile, double dt,
                       double t_final);
  static Schedule driven(double epsilon, double lambda, double amplitude,
                         double frequency, double dt, double t_final);
};

}  // namespace geminal
