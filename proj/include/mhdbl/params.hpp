#pragma once

#include "mhdbl/errors.hpp"

namespace mhdbl {

enum class Regime { Isentropic, NonIsentropic };

inline const char* regime_name(Regime r) {
  return r == Regime::Isentropic ? "isentropic" : "non-isentropic";
}

// a = R/(1+R), strictly increasing in R with range (0,1).
inline double derive_a(double R) {
  if (!(R > 0.0)) throw construction_error("gas constant R must be positive");
  return R / (1.0 + R);
}

// Hard runtime bounds on the admissible region.  The small-perturbation
// regime guarantees these with margin; we fail fast instead of letting a
// run drift into NaNs.
struct AdmissibilityMargins {
  double h_min = 0.5;       // tangential magnetic field
  double theta_min = 0.1;   // temperature
  double q_min = 0.05;      // magnetic energy q = h^2/2
  double p_gap_min = 0.05;  // P - q
};

struct ModelParams {
  Regime regime = Regime::Isentropic;
  double gamma = 1.4;     // adiabatic exponent (isentropic), >= 1
  double R = 1.0;         // gas constant (non-isentropic), > 0
  double M_weight = 4.0;  // energy weight M >= 1
  AdmissibilityMargins margins{};

  double a() const { return derive_a(R); }

  void validate() const {
    if (!(gamma >= 1.0)) throw construction_error("gamma must satisfy gamma >= 1");
    if (!(R > 0.0)) throw construction_error("R must be positive");
    if (!(M_weight >= 1.0)) throw construction_error("M_weight must satisfy M >= 1");
  }
};

}  // namespace mhdbl
