#pragma once

namespace mhdbl {

struct CutoffValues {
  double chi = 0.0;
  double dchi = 0.0;
  double d2chi = 0.0;
};

// Smooth monotone ramp: identically 0 on [0,1], identically 1 on [2,inf).
// The transition is the quintic smoothstep 6s^5 - 15s^4 + 10s^3 in s = y-1,
// which is C^2 across the plateaus and has closed-form derivatives.
struct CutoffSpec {
  CutoffValues eval(double y) const {
    CutoffValues v;
    if (y <= 1.0) return v;
    if (y >= 2.0) {
      v.chi = 1.0;
      return v;
    }
    const double s = y - 1.0;
    v.chi = s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
    v.dchi = 30.0 * s * s * (s - 1.0) * (s - 1.0);
    v.d2chi = 60.0 * s * (2.0 * s - 1.0) * (s - 1.0);
    return v;
  }
};

inline CutoffValues cutoff(double y, const CutoffSpec& spec = CutoffSpec{}) {
  return spec.eval(y);
}

}  // namespace mhdbl
