#pragma once

#include <deque>
#include <vector>

#include "mhdbl/grid.hpp"
#include "mhdbl/params.hpp"

namespace mhdbl {

inline int n_components(Regime r) { return r == Regime::Isentropic ? 2 : 3; }

struct TimeLevel {
  double t = 0.0;
  std::vector<Field> fields;
};

// Grid unknowns in transformed coordinates plus a ring buffer of recent
// accepted time levels (newest at the back) for the energy module's
// time-derivative differences.
struct State {
  Regime regime = Regime::Isentropic;
  GridSpec grid{};
  double time = 0.0;
  std::vector<Field> fields;  // isentropic: {u, h_tilde}; else {u, theta_tilde, q_tilde}
  std::deque<TimeLevel> history;

  static constexpr size_t kHistoryDepth = 4;

  static State zeros(Regime r, const GridSpec& g) {
    State s;
    s.regime = r;
    s.grid = g;
    s.fields.assign(static_cast<size_t>(n_components(r)), Field(g));
    return s;
  }

  void push_history() {
    history.push_back({time, fields});
    while (history.size() > kHistoryDepth) history.pop_front();
  }

  int components() const { return n_components(regime); }
};

}  // namespace mhdbl
