#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cxorder/oracle.hpp"
#include "cxorder/ordering.hpp"
#include "cxorder/quadrature.hpp"
#include "random_instances.hpp"

using namespace cxorder;

namespace {

const double kR2 = std::sqrt(2.0), kR5 = std::sqrt(5.0);
const double kFlagshipCheckpoint = 1.0 / 72 + kR5 / 360 - kR2 / 72;
const double kFlagshipCrossing = 1.0 + kR5 - 2.0 * kR2;

SignedMeasure cheb() { return builtin("chebyshev3").measure; }
SignedMeasure lob() { return builtin("lobatto4").measure; }

// F_2 - F_1 has signs +, -, +, 0 and the means agree: two crossings.
SignedMeasure even_left() { return SignedMeasure(-1.0, 1.0, {{-0.5, 0.5}, {0.5, 0.5}}); }
SignedMeasure even_right() { return SignedMeasure(-1.0, 1.0, {{-1.0, 0.2}, {0.0, 0.4}, {0.5, 0.4}}); }

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(HFunction, EqualMeasuresGiveZero) {
  const auto h = h_function(cheb(), cheb(), 3);
  EXPECT_EQ(sup_norm(h), 0.0);
}

TEST(HFunction, FlagshipValues) {
  const auto h = h_function(cheb(), lob(), 3);
  EXPECT_NEAR(evaluate(h, 0.0), kFlagshipCheckpoint, 1e-15);
  EXPECT_NEAR(evaluate(h, -1.0), 0.0, 1e-15);
  EXPECT_NEAR(evaluate(h, 1.0), 0.0, 1e-15);
}

TEST(HFunction, AtomicClosedForm) {
  const SignedMeasure a(0.0, 2.0, {{0.5, 1.0}, {1.5, -0.25}});
  const SignedMeasure b(0.0, 2.0, {{1.0, 0.5}, {2.0, 0.25}});
  for (int n = 1; n <= 4; ++n) {
    const auto h = h_function(a, b, n);
    const double fact = std::tgamma(n + 1.0), sgn = n % 2 == 1 ? 1.0 : -1.0;
    for (double x : {0.0, 0.3, 0.5, 0.99, 1.2, 1.5, 1.8, 2.0}) {
      double s = 0.0;
      for (const auto& at : b.atoms()) s += at.weight * std::pow(std::max(0.0, at.location - x), n);
      for (const auto& at : a.atoms()) s -= at.weight * std::pow(std::max(0.0, at.location - x), n);
      EXPECT_NEAR(evaluate(h, x), sgn * s / fact, 1e-14) << "n=" << n << " x=" << x;
    }
  }
}

TEST(HFunction, Errors) {
  EXPECT_EQ(code_of([] { h_function(cheb(), SignedMeasure(0.0, 1.0), 1); }), ErrorCode::SupportMismatch);
  EXPECT_EQ(code_of([] { h_function(cheb(), lob(), 0); }), ErrorCode::OrderOverflow);
  EXPECT_EQ(code_of([] { h_function(cheb(), lob(), 9); }), ErrorCode::OrderOverflow);
  EXPECT_NO_THROW(h_function(cheb(), lob(), 8));
}

TEST(HSequence, MidpointVersusUniform) {
  const auto prof = h_sequence(builtin("midpoint").measure, builtin("uniform").measure, 1);
  ASSERT_EQ(prof.h.size(), 2u);
  // Only H_0's catalogue matters here; for n = 1 that is the catalogue.
  ASSERT_EQ(prof.catalogue.count(), 1);
  EXPECT_NEAR(prof.catalogue.points[0], 0.0, 1e-15);
  EXPECT_NEAR(prof.endpoint_values[1], 0.0, 1e-15);
}

TEST(HSequence, EqualMeasures) {
  const auto prof = h_sequence(lob(), lob(), 4);
  for (double r : prof.endpoint_residuals) EXPECT_EQ(r, 0.0);
  EXPECT_EQ(prof.catalogue.count(), 0);
}

TEST(HSequence, FlagshipCatalogue) {
  const auto prof = h_sequence(cheb(), lob(), 3);
  ASSERT_EQ(prof.catalogue.count(), 3);
  EXPECT_NEAR(prof.catalogue.points[0], -kFlagshipCrossing, 1e-12);
  EXPECT_NEAR(prof.catalogue.points[1], 0.0, 1e-12);
  EXPECT_NEAR(prof.catalogue.points[2], kFlagshipCrossing, 1e-12);
  ASSERT_EQ(prof.checkpoints.size(), 1u);
  EXPECT_NEAR(prof.checkpoints[0].value, kFlagshipCheckpoint, 1e-15);
  EXPECT_LT(prof.route_discrepancy, 1e-10);
}

TEST(HSequence, CascadeIsConsistent) {
  const auto prof = h_sequence(cheb(), lob(), 3);
  for (int k = 1; k <= 3; ++k) {
    const auto d = differentiate(prof.h[static_cast<std::size_t>(k)]);
    for (double x : {-0.9, -0.5, -0.1, 0.2, 0.6, 0.95})
      EXPECT_NEAR(evaluate(d, x), evaluate(prof.h[static_cast<std::size_t>(k - 1)], x), 1e-14);
  }
}

TEST(EndpointConditions, Examples) {
  auto rep = check_endpoint_conditions(h_sequence(cheb(), lob(), 3));
  EXPECT_TRUE(rep.holds);
  EXPECT_EQ(rep.satisfied.size(), 4u);

  const SignedMeasure d0(-1.0, 1.0, {{0.0, 1.0}}), d1(-1.0, 1.0, {{1.0, 1.0}});
  rep = check_endpoint_conditions(h_sequence(d0, d1, 1));
  EXPECT_FALSE(rep.holds);
  ASSERT_TRUE(rep.first_violated.has_value());
  EXPECT_EQ(*rep.first_violated, 1);
  EXPECT_DOUBLE_EQ(rep.moment_gap, 1.0);

  EXPECT_TRUE(check_endpoint_conditions(h_sequence(d0, d0, 2)).holds);
}

TEST(GlobalCheck, PaperExamples) {
  EXPECT_EQ(global_check(cheb(), lob(), 3).verdict, Verdict::Holds);
  EXPECT_EQ(global_check(lob(), cheb(), 3).verdict, Verdict::HoldsReversed);
  const auto m = rescale(builtin("midpoint"), 2.0, 5.0), u = rescale(builtin("uniform"), 2.0, 5.0),
             t = rescale(builtin("trapezoid"), 2.0, 5.0);
  EXPECT_EQ(global_check(m, u, 1).verdict, Verdict::Holds);
  EXPECT_EQ(global_check(u, t, 1).verdict, Verdict::Holds);
  EXPECT_EQ(global_check(m, t, 1).verdict, Verdict::Holds);
}

TEST(GlobalCheck, MonomialWitnessOnMomentGap) {
  const auto v = global_check(builtin("midpoint").measure, builtin("trapezoid").measure, 2);
  EXPECT_EQ(v.verdict, Verdict::NotOrdered);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_EQ(v.witness->kind, Witness::Kind::Monomial);
  EXPECT_EQ(v.witness->param, 2.0);
  EXPECT_TRUE(confirm_witness(builtin("midpoint").measure, builtin("trapezoid").measure, *v.witness, 2).confirmed);
}

TEST(GlobalCheck, SplineWitness) {
  const auto v = global_check(even_left(), even_right(), 1);
  EXPECT_EQ(v.verdict, Verdict::NotOrdered);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_EQ(v.witness->kind, Witness::Kind::Spline);
  EXPECT_NEAR(v.witness->param, 0.0, 1e-12);
  EXPECT_TRUE(confirm_witness(even_left(), even_right(), *v.witness, 1).confirmed);
}

TEST(CrossingDecision, Flagship) {
  const auto v = crossing_decision(cheb(), lob(), 3);
  EXPECT_EQ(v.verdict, Verdict::Holds);
  EXPECT_EQ(v.m, 3);
  ASSERT_EQ(v.checkpoints.size(), 1u);
  EXPECT_NEAR(v.checkpoints[0].x, 0.0, 1e-12);
  EXPECT_NEAR(v.checkpoints[0].value, 4.5836e-4, 1e-7);
  EXPECT_EQ(crossing_decision(lob(), cheb(), 3).verdict, Verdict::HoldsReversed);
}

TEST(CrossingDecision, EvenCrossingCount) {
  const auto v = crossing_decision(even_left(), even_right(), 1);
  EXPECT_EQ(v.m, 2);
  EXPECT_EQ(v.verdict, Verdict::NotOrdered);
  EXPECT_EQ(global_check(even_left(), even_right(), 1).verdict, Verdict::NotOrdered);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_TRUE(confirm_witness(even_left(), even_right(), *v.witness, 1).confirmed);
}

TEST(CrossingDecision, EqualMeasures) {
  const auto v = crossing_decision(lob(), lob(), 2);
  EXPECT_EQ(v.verdict, Verdict::Holds);
  EXPECT_EQ(v.m, 0);
}

TEST(CrossingDecision, MomentMismatch) {
  const auto mid = builtin("midpoint").measure, trap = builtin("trapezoid").measure;
  const auto v = crossing_decision(mid, trap, 2);
  EXPECT_EQ(v.verdict, Verdict::NotOrdered);
  ASSERT_TRUE(v.witness);
  EXPECT_EQ(v.witness->kind, Witness::Kind::Monomial);
  EXPECT_TRUE(confirm_witness(mid, trap, *v.witness, 2).confirmed);
  EXPECT_EQ(v.verdict, global_check(mid, trap, 2).verdict);
}

TEST(Ohlin, Examples) {
  EXPECT_EQ(ohlin_check(builtin("midpoint").measure, builtin("uniform").measure).verdict, Verdict::Holds);
  EXPECT_EQ(ohlin_check(builtin("uniform").measure, builtin("trapezoid").measure).verdict, Verdict::Holds);
  const SignedMeasure three(-1.0, 1.0, {{-1.0, 1.0 / 3}, {0.0, 1.0 / 3}, {1.0, 1.0 / 3}});
  const auto v = ohlin_check(three, builtin("gauss2").measure);
  EXPECT_EQ(v.verdict, Verdict::Inconclusive);
  EXPECT_EQ(v.reason, InconclusiveReason::MultipleCrossings);
  EXPECT_GE(v.m, 2);
}

TEST(LevinSteckin, Examples) {
  EXPECT_EQ(levin_steckin_check(builtin("midpoint").measure, builtin("uniform").measure).verdict, Verdict::Holds);
  const SignedMeasure d0(-1.0, 1.0, {{0.0, 1.0}}), d5(-1.0, 1.0, {{0.5, 1.0}});
  const auto v = levin_steckin_check(d0, d5);
  EXPECT_EQ(v.verdict, Verdict::NotOrdered);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_EQ(v.witness->kind, Witness::Kind::Monomial);
  EXPECT_TRUE(confirm_witness(d0, d5, *v.witness, 1).confirmed);
}

TEST(Szostok, SingleCrossing) {
  const auto rep = szostok_check(builtin("midpoint").measure, builtin("uniform").measure);
  EXPECT_EQ(rep.verdict.verdict, Verdict::Holds);
  EXPECT_EQ(rep.verdict.m, 1);
  EXPECT_EQ(rep.areas.size(), 2u);
}

TEST(Szostok, SymmetricStepBoundary) {
  // F = +1 on (0, 1), -1 on (1, 2).
  const SignedMeasure mu1(0.0, 2.0, {{1.0, 2.0}}), mu2(0.0, 2.0, {{0.0, 1.0}, {2.0, 1.0}});
  const auto rep = szostok_check(mu1, mu2);
  ASSERT_EQ(rep.areas.size(), 2u);
  EXPECT_DOUBLE_EQ(rep.areas[0], 1.0);
  EXPECT_DOUBLE_EQ(rep.areas[1], 1.0);
  EXPECT_EQ(rep.verdict.verdict, Verdict::Holds);
}

TEST(Szostok, ThreeCrossings) {
  const SignedMeasure three(-1.0, 1.0, {{-1.0, 1.0 / 3}, {0.0, 1.0 / 3}, {1.0, 1.0 / 3}});
  const auto g2 = builtin("gauss2").measure;
  const auto rep = szostok_check(g2, three);
  EXPECT_EQ(rep.verdict.m, 3);
  EXPECT_EQ(rep.areas.size(), 4u);
  EXPECT_EQ(rep.verdict.verdict, levin_steckin_check(g2, three).verdict);
  EXPECT_EQ(rep.verdict.verdict, Verdict::Holds);
}

// Both construction routes agree at 200 points once the endpoint conditions
// hold (the direct formula is anchored at b, the cascade at a).
TEST(OrderingProperties, RoutesAgree) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 40; ++t) {
    const int n = 1 + t % 4;
    const auto p = t % 2 == 0 ? samples::matched_pair(rng, n) : samples::density_pair(rng, n);
    const auto prof = h_sequence(p.mu1, p.mu2, n);
    ASSERT_TRUE(check_endpoint_conditions(prof).holds) << "trial " << t;
    const auto direct = h_function(p.mu1, p.mu2, n);
    const double scale = prof.scales.back();
    for (int i = 0; i < 200; ++i) {
      const double x = -1.0 + 2.0 * i / 199.0;
      EXPECT_NEAR(evaluate(prof.h.back(), x), evaluate(direct, x), 1e-10 * scale) << "trial " << t << " x " << x;
    }
    EXPECT_LT(prof.route_discrepancy, 1e-10);
  }
}

TEST(OrderingProperties, EnginesAgreeWithDensities) {
  std::mt19937_64 rng(36);
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + t % 4;
    const auto p = samples::density_pair(rng, n);
    const auto g = global_check(p.mu1, p.mu2, n);
    EXPECT_EQ(crossing_decision(p.mu1, p.mu2, n).verdict, g.verdict) << "trial " << t;
    if (g.witness) {
      EXPECT_TRUE(confirm_witness(p.mu1, p.mu2, *g.witness, n).confirmed) << "trial " << t;
    }
    EXPECT_EQ(grid_condition_check(p.mu1, p.mu2, n), g.verdict == Verdict::Holds) << "trial " << t;
  }
}

TEST(OrderingProperties, IntegrationByParts) {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 50; ++t) {
    const int n = 1 + t % 4;
    const auto p = samples::matched_pair(rng, n);
    const auto prof = h_sequence(p.mu1, p.mu2, n);
    const double lhs = moment(p.mu2, n + 1) - moment(p.mu1, n + 1);
    const double sgn = n % 2 == 1 ? 1.0 : -1.0;
    const double rhs = sgn * std::tgamma(n + 2.0) * integrate(prof.h.back(), -1.0, 1.0);
    EXPECT_NEAR(lhs, rhs, 1e-9 * std::max(1.0, std::abs(lhs)));
  }
}

TEST(OrderingProperties, ScalingKeepsVerdicts) {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + t % 4;
    const auto p = samples::matched_pair(rng, n);
    const auto v = global_check(p.mu1, p.mu2, n).verdict;
    for (double c : {1e-3, 7.0, 1e4}) {
      EXPECT_EQ(global_check(scaled(p.mu1, c), scaled(p.mu2, c), n).verdict, v);
      EXPECT_EQ(crossing_decision(scaled(p.mu1, c), scaled(p.mu2, c), n).verdict,
                crossing_decision(p.mu1, p.mu2, n).verdict);
    }
  }
}

TEST(OrderingProperties, OhlinNeverContradicted) {
  std::mt19937_64 rng(34);
  int decided = 0;
  for (int t = 0; t < 300; ++t) {
    const auto p = samples::matched_pair(rng, 1);
    const auto o = ohlin_check(p.mu1, p.mu2);
    const auto g = global_check(p.mu1, p.mu2, 1);
    EXPECT_EQ(levin_steckin_check(p.mu1, p.mu2).verdict, g.verdict);
    if (o.verdict == Verdict::Inconclusive) continue;
    ++decided;
    EXPECT_EQ(o.verdict, g.verdict);
  }
  EXPECT_GT(decided, 0);
}

TEST(OrderingProperties, SwappingReverses) {
  std::mt19937_64 rng(35);
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + t % 4;
    const auto p = samples::matched_pair(rng, n);
    const auto v = global_check(p.mu1, p.mu2, n).verdict;
    const auto w = global_check(p.mu2, p.mu1, n).verdict;
    if (v == Verdict::Holds) {
      EXPECT_EQ(w, Verdict::HoldsReversed);
    }
    if (v == Verdict::NotOrdered) {
      EXPECT_EQ(w, Verdict::NotOrdered);
    }
  }
}
