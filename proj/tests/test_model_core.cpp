#include <doctest.h>

#include <cmath>

#include "mhdbl/coefficients.hpp"
#include "mhdbl/cutoff.hpp"
#include "mhdbl/experiments.hpp"
#include "mhdbl/matrices.hpp"
#include "mhdbl/outflow.hpp"
#include "mhdbl/residuals.hpp"

using namespace mhdbl;

TEST_CASE("derive_a") {
  CHECK(derive_a(1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(derive_a(3.0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(derive_a(10.0) == doctest::Approx(10.0 / 11.0).epsilon(1e-15));
  // strictly increasing, approaching 1 from below
  double prev = 0.0;
  for (double R : {0.1, 0.5, 1.0, 5.0, 50.0, 5000.0}) {
    const double a = derive_a(R);
    CHECK(a > prev);
    CHECK(a < 1.0);
    prev = a;
  }
  CHECK_THROWS_AS(derive_a(0.0), construction_error);
  CHECK_THROWS_AS(derive_a(-2.0), construction_error);
}

TEST_CASE("pressure_from_h") {
  CHECK(pressure_from_h(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(pressure_from_h(0.0) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK_THROWS_AS(pressure_from_h(std::sqrt(3.0)), admissibility_error);
  CHECK_THROWS_AS(pressure_from_h(2.0), admissibility_error);
}

TEST_CASE("isentropic coefficients at reference points") {
  {
    const CoefficientSet c = isentropic_coeffs(1.0, 1.0);
    CHECK(c.A == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(c.B == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(c.C == doctest::Approx(0.5).epsilon(1e-15));
  }
  {
    const CoefficientSet c = isentropic_coeffs(1.0, 2.0);
    CHECK(c.A == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(c.C == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(c.B == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  }
  {
    // independent high-precision substitution oracle at h = 1.2, gamma = 5/3:
    // p = 3/2 - 0.72 = 0.78; values below computed in extended precision.
    const long double h = 1.2L, gamma = 5.0L / 3.0L;
    const long double p = 1.5L - 0.5L * h * h;
    const long double A_ref = powl(p, -1.0L / gamma);
    const long double C_ref = 1.0L / (gamma * p + h * h);
    const long double B_ref = 1.0L - h * h * C_ref;
    const CoefficientSet c = isentropic_coeffs(1.2, 5.0 / 3.0);
    CHECK(c.A == doctest::Approx(static_cast<double>(A_ref)).epsilon(1e-14));
    CHECK(c.B == doctest::Approx(static_cast<double>(B_ref)).epsilon(1e-14));
    CHECK(c.C == doctest::Approx(static_cast<double>(C_ref)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(isentropic_coeffs(0.4, 1.4), admissibility_error);
  CHECK_THROWS_AS(isentropic_coeffs(1.8, 1.4), admissibility_error);
  CHECK_THROWS_WITH_AS(isentropic_coeffs(0.2, 1.4),
                       doctest::Contains("h >= 1/2"), admissibility_error);
}

TEST_CASE("coefficient positivity and B + h^2 C = 1 over the admissible band") {
  UniformRng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double h = rng.in(0.5, kSqrt3 - 1e-3);
    const double gammas[4] = {1.0, 1.4, 5.0 / 3.0, 2.0};
    const CoefficientSet c = isentropic_coeffs(h, gammas[i % 4]);
    REQUIRE(c.A > 0.0);
    REQUIRE(c.B > 0.0);
    REQUIRE(c.C > 0.0);
    REQUIRE(std::abs(c.B + h * h * c.C - 1.0) <= 1e-12);
  }
}

TEST_CASE("cutoff plateaus and transition") {
  CHECK(cutoff(0.5).chi == 0.0);
  CHECK(cutoff(0.5).dchi == 0.0);
  CHECK(cutoff(0.5).d2chi == 0.0);
  CHECK(cutoff(3.0).chi == 1.0);
  CHECK(cutoff(3.0).dchi == 0.0);
  CHECK(cutoff(3.0).d2chi == 0.0);
  const CutoffValues mid = cutoff(1.5);
  CHECK(mid.chi == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mid.dchi == doctest::Approx(30.0 * 0.0625).epsilon(1e-14));  // 30 s^2 (s-1)^2, s=1/2
  CHECK(mid.d2chi == doctest::Approx(0.0).epsilon(1e-14));
  // derivative matches a central difference of chi through the transition
  for (double y : {1.1, 1.3, 1.62, 1.9}) {
    const double eps = 1e-6;
    const double fd = (cutoff(y + eps).chi - cutoff(y - eps).chi) / (2.0 * eps);
    CHECK(cutoff(y).dchi == doctest::Approx(fd).epsilon(1e-7));
    const double fd2 = (cutoff(y + eps).dchi - cutoff(y - eps).dchi) / (2.0 * eps);
    CHECK(cutoff(y).d2chi == doctest::Approx(fd2).epsilon(1e-6));
  }
  // monotone and bounded
  double prev = -1.0;
  for (int i = 0; i <= 300; ++i) {
    const double y = 3.0 * i / 300.0;
    const CutoffValues v = cutoff(y);
    CHECK(v.chi >= prev - 1e-15);
    CHECK(v.chi >= 0.0);
    CHECK(v.chi <= 1.0);
    prev = v.chi;
  }
}

TEST_CASE("build_matrices at the reference point") {
  ModelParams p;
  p.regime = Regime::NonIsentropic;
  p.R = 1.0;  // a = 1/2
  NonIsentropicPoint pt{0.0, 1.0, 0.5};
  const MatrixSet ms = build_matrices(pt, 1.5, p);
  // S = [[1,0,0],[0,2,1],[0,1,2]]
  CHECK(ms.S(0, 0) == doctest::Approx(1.0));
  CHECK(ms.S(1, 1) == doctest::Approx(2.0));
  CHECK(ms.S(2, 2) == doctest::Approx(2.0));
  CHECK(ms.S(1, 2) == doctest::Approx(1.0));
  CHECK(ms.S(0, 1) == 0.0);
  CHECK(ms.S(0, 2) == 0.0);
  // B_diag = I
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(ms.B_diag(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-14));
  // u = 0 kills the diagonal of S*A0; corners are -theta^2 = -1
  for (int i = 0; i < 3; ++i) CHECK(ms.A_sym(i, i) == doctest::Approx(0.0));
  CHECK(ms.A_sym(0, 2) == doctest::Approx(-1.0));
  CHECK(ms.A_sym(2, 0) == doctest::Approx(-1.0));
  // positive definiteness from the leading minors
  CHECK(ms.S(0, 0) > 0.0);
  CHECK(ms.S(0, 0) * ms.S(1, 1) == doctest::Approx(2.0));
  CHECK(ms.S.det() == doctest::Approx(3.0));
  // G weights match the structural diagonal
  CHECK(ms.G1 == ms.S(0, 0));
  CHECK(ms.G2 == ms.S(1, 1));
  CHECK(ms.G3 == ms.S(2, 2));
}

TEST_CASE("build_matrices admissibility errors name the failing bound") {
  ModelParams p;
  p.regime = Regime::NonIsentropic;
  CHECK_THROWS_WITH_AS(build_matrices({0.0, -0.1, 0.5}, 1.5, p), doctest::Contains("theta"),
                       admissibility_error);
  CHECK_THROWS_WITH_AS(build_matrices({0.0, 1.0, 1e-4}, 1.5, p), doctest::Contains("q"),
                       admissibility_error);
  CHECK_THROWS_WITH_AS(build_matrices({0.0, 1.0, 1.5}, 1.5, p), doctest::Contains("P - q"),
                       admissibility_error);
}

TEST_CASE("symmetrizer properties over randomized admissible states") {
  UniformRng rng(123);
  for (int i = 0; i < 2000; ++i) {
    ModelParams p;
    p.regime = Regime::NonIsentropic;
    p.R = rng.in(0.2, 5.0);
    NonIsentropicPoint pt;
    pt.theta = rng.in(0.2, 3.0);
    pt.q = rng.in(0.1, 2.0);
    pt.u = rng.in(-1.0, 1.0);
    const double P = pt.q + rng.in(0.1, 2.0);
    const MatrixSet ms = build_matrices(pt, P, p);
    REQUIRE(ms.S.asymmetry() == 0.0);
    REQUIRE(ms.A_sym.asymmetry() <= 1e-12 * ms.A_sym.max_abs());
    REQUIRE(ms.B_diag.max_offdiag_abs() <= 1e-12 * ms.B_diag.max_abs());
    REQUIRE(ms.B_diag(0, 0) ==
            doctest::Approx(2.0 * pt.theta * pt.theta * pt.q).epsilon(1e-12));
    REQUIRE(ms.B_diag(1, 1) == doctest::Approx(2.0 * pt.theta * pt.q).epsilon(1e-12));
    REQUIRE(ms.B_diag(2, 2) == doctest::Approx(pt.theta * pt.theta).epsilon(1e-12));
    // S^{-1} (S A0) recovers A0 and S^{-1} (S B0) recovers B0
    const Mat3 a0 = ms.S_inv * ms.A_sym;
    const Mat3 b0 = ms.S_inv * ms.B_diag;
    REQUIRE((a0 - ms.A0).max_abs() <= 1e-10 * std::max(1.0, ms.A0.max_abs()));
    REQUIRE((b0 - ms.B0).max_abs() <= 1e-10 * std::max(1.0, ms.B0.max_abs()));
  }
}

TEST_CASE("outflow families satisfy the Bernoulli constraints") {
  SUBCASE("uniform steady: all envelope components vanish") {
    const OutflowSpec s = OutflowSpec::uniform_steady(1.0, 1.0, 1.0, 1.5);
    const auto val = validate_outflow(s, {0.0, 1.0, 10.0});
    CHECK(val.max_bernoulli_residual == 0.0);
    for (const auto& row : val.rows) {
      CHECK(row.h3_norm == 0.0);
      CHECK(row.pass);
    }
  }
  SUBCASE("spatially varying steady: P_x = H H_x by construction") {
    const OutflowSpec s =
        OutflowSpec::spatially_varying_steady(1.0, 1.0, 0.1, 1.0, 0.05, 1.0, 0.05);
    for (double x : {0.0, 0.7, 2.1, 4.4}) {
      const OutflowTraces tr = s.eval(0.0, x);
      CHECK(tr.P_x == doctest::Approx(tr.H * tr.H_x).epsilon(1e-15));
      // P(x) = p_bar + H^2/2
      CHECK(tr.P == doctest::Approx(1.0 + 0.5 * tr.H * tr.H).epsilon(1e-15));
    }
    const auto val = validate_outflow(s, {0.0, 5.0});
    CHECK(val.max_bernoulli_residual <= 1e-14);
  }
  SUBCASE("time varying: integrated traces satisfy the evolution equations") {
    const OutflowSpec s =
        OutflowSpec::time_varying_uniform_in_x(1.5, 0.1, 1.0, 1.0, 0.0, 1.0, 30.0);
    double worst = 0.0;
    for (double t = 0.0; t <= 30.0; t += 0.37) {
      const OutflowTraces tr = s.eval(t, 0.0);
      const auto res = bernoulli_residual(tr, s.R);
      for (double r : res) worst = std::max(worst, std::abs(r));
    }
    CHECK(worst <= 1e-8);
    // the fine-step oracle: independent RK4 at dt = 1e-5 over [0, 2]
    double Theta = 1.0, H = 1.0;
    const double R = 1.0, a = derive_a(R);
    auto Pf = [](double t) { return 1.5 + 0.1 * (1.0 - 1.0 / (1.0 + t)); };
    auto Pt = [](double t) { return 0.1 / ((1.0 + t) * (1.0 + t)); };
    auto rhs = [&](double t, double Th, double Hh, double& dT, double& dH) {
      const double Qi = Pf(t) + 0.5 * (1.0 - 2.0 * a) * Hh * Hh;
      dT = a * Pt(t) * Th / Qi;
      dH = Pt(t) * Hh / (Qi * (R + 1.0));
    };
    const double hstep = 1e-5;
    for (double t = 0.0; t < 2.0 - hstep / 2; t += hstep) {
      double k1t, k1h, k2t, k2h, k3t, k3h, k4t, k4h;
      rhs(t, Theta, H, k1t, k1h);
      rhs(t + hstep / 2, Theta + hstep / 2 * k1t, H + hstep / 2 * k1h, k2t, k2h);
      rhs(t + hstep / 2, Theta + hstep / 2 * k2t, H + hstep / 2 * k2h, k3t, k3h);
      rhs(t + hstep, Theta + hstep * k3t, H + hstep * k3h, k4t, k4h);
      Theta += hstep / 6 * (k1t + 2 * k2t + 2 * k3t + k4t);
      H += hstep / 6 * (k1h + 2 * k2h + 2 * k3h + k4h);
    }
    const OutflowTraces tr = s.eval(2.0, 0.0);
    CHECK(tr.Theta == doctest::Approx(Theta).epsilon(1e-10));
    CHECK(tr.H == doctest::Approx(H).epsilon(1e-10));
  }
  SUBCASE("inadmissible construction is rejected") {
    CHECK_THROWS_AS(OutflowSpec::uniform_steady(-1.0, 1.0, 1.0, 1.5), construction_error);
    CHECK_THROWS_AS(OutflowSpec::uniform_steady(1.0, 2.0, 1.0, 1.5), construction_error);
    CHECK_THROWS_AS(OutflowSpec::spatially_varying_steady(1.0, 1.0, 1.5, 1.0, 0.0, 1.0, 0.0),
                    construction_error);
  }
}

TEST_CASE("envelope validation passes and fails at the right amplitudes") {
  const double eps = 0.05, sigma = 0.5;
  EnvelopeSpec env;
  env.epsilon = eps;
  env.sigma = sigma;
  env.g0 = 1.0;
  SUBCASE("delta = eps^2 passes") {
    const double delta = eps * eps;
    const OutflowSpec s =
        OutflowSpec::spatially_varying_steady(1.0, 1.0, 0.0, 1.0, delta, 1.0, 0.0, 1.0, env);
    const auto val = validate_outflow(s, {0.0});
    // quadrature oracle: Theta_x = delta cos x and Theta - theta* = delta sin x
    // each have squared H^3(T) norm 4 pi delta^2
    const double expected = std::sqrt(8.0 * std::numbers::pi) * delta;
    CHECK(val.rows[0].h3_norm == doctest::Approx(expected).epsilon(1e-3));
    CHECK(val.rows[0].pass);
    CHECK(val.all_pass);
  }
  SUBCASE("delta = sqrt(eps) fails and names the violator") {
    const double delta = std::sqrt(eps);
    const OutflowSpec s =
        OutflowSpec::spatially_varying_steady(1.0, 1.0, 0.0, 1.0, delta, 1.0, 0.0, 1.0, env);
    const auto val = validate_outflow(s, {0.0});
    CHECK_FALSE(val.rows[0].pass);
    const bool named = val.rows[0].worst_component == "Theta_x" ||
                       val.rows[0].worst_component == "Theta-theta_star";
    CHECK(named);
  }
}

TEST_CASE("residual terms") {
  SUBCASE("uniform steady outflow, zero perturbation: all residuals vanish") {
    ResidualInputs in;
    in.tr = OutflowSpec::uniform_steady(1.0, 1.0, 1.0, 1.5).eval(0.0, 0.0);
    in.theta = 1.0;
    in.q = 0.5;
    in.chi = cutoff(1.5);
    const Residuals r = residuals_bernoulli_form(in);
    CHECK(r.r1 == 0.0);
    CHECK(r.r2 == 0.0);
    CHECK(r.r3 == 0.0);
    const Residuals rf = residuals_trace_form(in);
    CHECK(rf.r1 == 0.0);
    CHECK(rf.r2 == 0.0);
    CHECK(rf.r3 == 0.0);
  }
  SUBCASE("steady outflow with Theta != theta*: only the chi'' term survives") {
    ResidualInputs in;
    in.R = 1.0;
    OutflowTraces tr;
    tr.P = 1.6;
    tr.Theta = 1.1;
    tr.theta_star = 0.9;
    tr.H = 1.0;
    in.tr = tr;
    in.theta = 1.0;
    in.q = 0.5;
    in.u_tilde = 0.0;
    in.dy_q_tilde = 0.0;
    in.chi = cutoff(1.25);
    const double a = 0.5;
    const double Q = tr.P + (1.0 - 2.0 * a) * in.q;
    const double expect_r2 = (2.0 * a * in.theta * in.q / Q) * ((tr.P + in.q) / (tr.P - in.q)) *
                             in.chi.d2chi * (tr.Theta - tr.theta_star);
    const double expect_r3 = -(4.0 * a * in.q * in.q / Q) * in.chi.d2chi *
                             (tr.Theta - tr.theta_star);
    const Residuals r = residuals_bernoulli_form(in);
    CHECK(r.r2 == doctest::Approx(expect_r2).epsilon(1e-14));
    CHECK(r.r3 == doctest::Approx(expect_r3).epsilon(1e-14));
  }
  SUBCASE("dual-formula consistency on randomized Bernoulli-consistent inputs") {
    const OutflowSpec spec =
        OutflowSpec::time_varying_uniform_in_x(1.5, 0.08, 1.05, 0.95, 0.02, 1.7, 12.0);
    UniformRng rng(99);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
      ResidualInputs in;
      in.R = spec.R;
      in.tr = spec.eval(rng.in(0.0, 10.0), rng.in(0.0, kTwoPi));
      in.u_tilde = rng.in(-0.1, 0.1);
      in.q_tilde = rng.in(-0.05, 0.05);
      in.dy_q_tilde = rng.in(-0.2, 0.2);
      in.q = 0.5 * in.tr.H * in.tr.H + in.q_tilde;
      const double chi_y = rng.in(0.0, 3.0);
      in.chi = cutoff(chi_y);
      in.theta = in.chi.chi * in.tr.Theta + (1.0 - in.chi.chi) * in.tr.theta_star +
                 rng.in(-0.05, 0.05);
      const Residuals rb = residuals_bernoulli_form(in);
      const Residuals rt = residuals_trace_form(in);
      const double scale =
          std::max({std::abs(rt.r1), std::abs(rt.r2), std::abs(rt.r3), 1e-6});
      worst = std::max(worst, std::abs(rb.r2 - rt.r2) / scale);
      worst = std::max(worst, std::abs(rb.r3 - rt.r3) / scale);
      worst = std::max(worst, std::abs(rb.r1 - rt.r1) / scale);
    }
    CHECK(worst <= 1e-10);
  }
}
