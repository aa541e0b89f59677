#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "brayiso/deficit.hpp"

using namespace brayiso;
using doctest::Approx;

namespace {
const MassParam kM(1.0);
const SurfaceQuadrature kQ = make_surface_quadrature(48);

PerturbationSpec small_bump() {
  PerturbationSpec p;
  p.amplitude = 0.5;
  p.modes = {{2, 0, 0.6}, {1, 1, 0.4}};
  p.outer_cutoff = 1e4;
  return p;
}
}  // namespace

TEST_CASE("deficit bound holds with positive margin on two-ball regions") {
  for (double d : {15.0, 30.0, 60.0}) {
    const DeficitReport r = schwarzschild_deficit_check(kM, two_ball_region(d, 5.0), 2.0, kQ);
    CHECK(r.holds);
    CHECK(r.margin > 0.0);
    CHECK(r.eta_used <= 1.0);
  }
}

TEST_CASE("deficit bound is an equality on centered balls") {
  for (double r : {5.0, 50.0}) {
    const DeficitReport d = schwarzschild_deficit_check(kM, CenteredBall{r}, 2.0, kQ);
    CHECK(d.eta == 0.0);
    CHECK(std::abs(d.margin) <= 10.0 * d.error);
  }
}

TEST_CASE("deficit check rejects tau <= 1") {
  CHECK_THROWS_AS(schwarzschild_deficit_check(kM, CenteredBall{5.0}, 1.0, kQ), std::domain_error);
}

TEST_CASE("Bray chain holds term by term") {
  const std::vector<Region> regions{CenteredBall{10.0}, OffsetBall{{3.0, 0.0, 0.0}, 10.0},
                                    OffsetBall{{0.0, 5.0, 2.0}, 30.0}, two_ball_region(40.0, 10.0),
                                    two_ball_region(12.0, 3.0)};
  for (const Region& region : regions) {
    const ChainReport c = bray_chain(kM, region, kQ);
    CHECK(c.steps.size() == 6);
    for (const ChainStep& s : c.steps) {
      INFO(s.name << ": " << s.lhs << " vs " << s.rhs);
      CHECK(s.holds);
    }
    CHECK(c.term("A_gm") >= c.term("A_gm_Sr") * (1.0 - 1e-12));
  }
}

TEST_CASE("Bray chain is tight on the chart sphere") {
  const ChainReport c = bray_chain(kM, CenteredBall{10.0}, kQ);
  CHECK(c.chart_r == Approx(10.0));
  CHECK(c.term("A_gm") == Approx(c.term("A_gm_Sr")).epsilon(1e-12));
  CHECK(c.term("gap_term") == Approx(0.0).scale(1e-6));
  CHECK_THROWS_AS(c.term("missing"), std::out_of_range);
}

TEST_CASE("Bray chain with a horizon component uses the interior chart") {
  const ChainReport c = bray_chain(kM, two_ball_region(40.0, 10.0), kQ);
  CHECK(c.horizon_component);
  CHECK(c.s_horizon > 0.0);
  CHECK(c.s_horizon < c.c);
  CHECK_THROWS_AS(bray_chain(kM, two_ball_region(40.0, 10.0), kQ, 35.0), std::domain_error);
}

TEST_CASE("perturbed deficit check") {
  const PerturbationSpec p = small_bump();
  const PerturbedDeficitReport r = perturbed_deficit_check(p, two_ball_region(120.0, 30.0), 2.0, std::nullopt, 100.0, kQ);
  CHECK(r.preconditions_ok);
  CHECK(r.holds);
  CHECK(r.margin > 0.0);
  const PerturbedDeficitReport c = perturbed_deficit_check(p, CenteredBall{40.0}, 2.0, std::nullopt, 100.0, kQ);
  CHECK(c.off_center.eta == 0.0);
  CHECK(c.holds);
}

TEST_CASE("perturbed deficit check reports violated hypotheses") {
  const PerturbationSpec p = small_bump();
  // Many far-away small balls: the area grows faster than Theta sigma^2 allows.
  BallUnion u;
  for (int k = 0; k < 6; ++k) u.balls.push_back(OffsetBall{{20.0 + 5.0 * k, 0.0, 0.0}, 2.0});
  const PerturbedDeficitReport r = perturbed_deficit_check(p, u, 2.0, std::nullopt, 1.0, kQ);
  CHECK_FALSE(r.preconditions_ok);
  CHECK_FALSE(r.precondition.empty());
  const PerturbedDeficitReport e = perturbed_deficit_check(p, CenteredBall{40.0}, 2.0, 0.5, 100.0, kQ);
  CHECK_FALSE(e.preconditions_ok);
  CHECK(e.precondition == "region is not eta-off-center");
  CHECK_THROWS_AS(perturbed_deficit_check(p, CenteredBall{40.0}, 2.0, 1.5, 100.0, kQ), std::domain_error);
}

TEST_CASE("empirical threshold") {
  const std::vector<ThresholdPoint> pts{{10, false}, {20, true}, {40, false}, {80, true}, {160, true}};
  CHECK(*empirical_threshold(pts) == 80.0);
  const std::vector<ThresholdPoint> none{{10, true}, {20, false}};
  CHECK_FALSE(empirical_threshold(none).has_value());
}

TEST_CASE("audit residuals vanish without a perturbation") {
  PerturbationSpec p = audit_perturbation(kM);
  p.amplitude = 0.0;
  const TheoremStepReport a = theorem_step_audit(p, audit_region(25.0), 2.0, kQ);
  CHECK(a.residual_c == 0.0);
  CHECK(a.residual_d == 0.0);
  CHECK(a.residual_e == 0.0);
  CHECK(a.residual_f == 0.0);
  CHECK(std::abs(a.i_difference) <= 1e-12 * a.A_g_Sr);
  CHECK(a.g_holds);
  CHECK(a.b_volume_change == Approx(volume_to(kM, 1.0)).epsilon(1e-10));
}

TEST_CASE("audit residuals stay bounded under doubling") {
  const PerturbationSpec p = audit_perturbation(kM);
  std::vector<double> rc, rd, re, rf;
  for (double r : {25.0, 50.0, 100.0}) {
    const TheoremStepReport a = theorem_step_audit(p, audit_region(r), 2.0, kQ);
    CHECK(a.g_holds);
    CHECK(a.g_off_center_ok);
    CHECK(a.j_slack > 0.0);
    rc.push_back(a.residual_c);
    rd.push_back(a.residual_d);
    re.push_back(a.residual_e);
    rf.push_back(a.residual_f);
  }
  CHECK(no_growth_trend(rc));
  CHECK(no_growth_trend(rd));
  CHECK(no_growth_trend(re));
  CHECK(no_growth_trend(rf));
}

TEST_CASE("growth trend detector") {
  const std::vector<double> flat{1.0, 1.1, 1.0, 0.9}, growing{1.0, 1.5, 2.2};
  CHECK(no_growth_trend(flat));
  CHECK_FALSE(no_growth_trend(growing));
}
