#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gnlbandit/environment.hpp"
#include "gnlbandit/verification.hpp"
#include "test_support.hpp"

using namespace gnl;
namespace ts = testsupport;

namespace {

GnlModel env1_nl() {
  return make_nested_logit(4, {NestSpec{{0, 2}, 0.05}, NestSpec{{1, 3}, 0.1}});
}

}  // namespace

TEST_CASE("smoothness constant closed forms") {
  REQUIRE(smoothness_constant(make_mnl(4, 0.25), 1.0) ==
          Catch::Approx(4.0).margin(1e-10));
  REQUIRE(smoothness_constant(env1_nl(), 1.0) ==
          Catch::Approx(39.0).margin(1e-10));
  REQUIRE(smoothness_constant(env1_nl(), 2.0) ==
          Catch::Approx(19.5).margin(1e-10));
  REQUIRE_THROWS_AS(smoothness_constant(env1_nl(), 0.0),
                    InvalidParameterError);
}

TEST_CASE("differential-consistency constant closed forms") {
  REQUIRE(diff_consistency_constant(make_mnl(4, 0.25)) ==
          Catch::Approx(4.0).margin(1e-10));
  REQUIRE(diff_consistency_constant(env1_nl()) ==
          Catch::Approx(20.0).margin(1e-10));
  REQUIRE(diff_consistency_constant(make_nested_logit(13, env2_nesting())) ==
          Catch::Approx(1.0 / 0.09).margin(1e-10));
}

TEST_CASE("constant is monotone in the smallest nest scale") {
  double previous = HUGE_VAL;
  for (double scale : {0.05, 0.1, 0.25, 0.5, 1.0}) {
    GnlModel model = make_nested_logit(
        4, {NestSpec{{0, 2}, scale}, NestSpec{{1, 3}, 1.0}});
    double constant = diff_consistency_constant(model);
    REQUIRE(constant < previous);
    previous = constant;
  }
}

TEST_CASE("constants are pure functions of the model") {
  GnlModel model = env1_nl();
  double first = smoothness_constant(model, 1.0);
  double second = smoothness_constant(model, 1.0);
  REQUIRE(first == second);
  REQUIRE(diff_consistency_constant(model) ==
          diff_consistency_constant(model));
}

TEST_CASE("alpha bounds: mnl exact, nl bracketed") {
  CheckResult mnl = check_alpha_bounds(make_mnl(4, 0.25));
  REQUIRE(mnl.applicable);
  REQUIRE(mnl.passed);

  CheckResult nl = check_alpha_bounds(
      make_nested_logit(3, {NestSpec{{0, 1}, 0.5}, NestSpec{{2}, 1.0}}));
  REQUIRE(nl.applicable);
  REQUIRE(nl.passed);

  CheckResult single = check_alpha_bounds(make_mnl(1, 1.0));
  REQUIRE(single.applicable);
  REQUIRE(single.passed);

  // fractional-share model: neither family, so not applicable
  GnlModel generic(1.0, 2,
                   {Nest{0.5, {{0, 0.5}, {1, 1.0}}}, Nest{0.4, {{0, 0.5}}}});
  CheckResult na = check_alpha_bounds(generic);
  REQUIRE(na.applicable == false);
}

TEST_CASE("strong smoothness holds with the published constant") {
  RngStream rng(21, 0, 0);
  CheckResult result = check_strong_smoothness(make_mnl(4, 1.0), 1.0, 10000, rng);
  REQUIRE(result.passed);
}

TEST_CASE("strong smoothness fails with half the constant") {
  RngStream rng(22, 0, 0);
  CheckResult result =
      check_strong_smoothness(make_mnl(4, 1.0), 1.0, 10000, rng, 0.5);
  REQUIRE(result.passed == false);
}

TEST_CASE("bregman divergence vanishes at identical points") {
  GnlModel model = make_mnl(3, 0.5);
  std::vector<double> u = {1.0, -0.5, 0.25};
  REQUIRE(bregman_perspective(model, 1.0, u, u) ==
          Catch::Approx(0.0).margin(1e-14));
}

TEST_CASE("differential consistency holds on the negative orthant") {
  RngStream rng(23, 0, 0);
  REQUIRE(check_diff_consistency(make_mnl(2, 1.0), 100, rng).passed);
  REQUIRE(check_diff_consistency(env1_nl(), 100, rng).passed);
  for (int trial = 0; trial < 20; ++trial) {
    GnlModel model = ts::random_model(rng);
    REQUIRE(check_diff_consistency(model, 20, rng).passed);
  }
}

TEST_CASE("mnl second derivative identity at a hand point") {
  // for the softmax surplus, d2E/du_i^2 = p_i (1 - p_i) <= p_i
  GnlModel model = make_mnl(2, 1.0);
  std::vector<double> u = {-1.0, -2.0};
  SimplexPoint probs = choice_probabilities(model, u);
  const double h = 1e-4;
  for (int i = 0; i < 2; ++i) {
    std::vector<double> up = u, down = u;
    up[i] += h;
    down[i] -= h;
    double second = (choice_probabilities(model, up)[i] -
                     choice_probabilities(model, down)[i]) /
                    (2.0 * h);
    REQUIRE(second ==
            Catch::Approx(probs[i] * (1.0 - probs[i])).margin(1e-6));
    REQUIRE(second <= probs[i] + 1e-8);
  }
}

TEST_CASE("differential consistency fails with half the constant") {
  RngStream rng(24, 0, 0);
  CheckResult result = check_diff_consistency(env1_nl(), 200, rng, 0.5);
  REQUIRE(result.passed == false);
}

TEST_CASE("curvature condition holds for gnl generating functions") {
  RngStream rng(25, 0, 0);
  REQUIRE(check_proposition1(make_mnl(4, 1.0), 100, rng).passed);
  REQUIRE(check_proposition1(
              make_nested_logit(3, {NestSpec{{0, 1}, 0.5}, NestSpec{{2}, 1.0}}),
              100, rng)
              .passed);
  for (int trial = 0; trial < 20; ++trial) {
    GnlModel model = ts::random_model(rng);
    REQUIRE(check_proposition1(model, 20, rng).passed);
  }
}

TEST_CASE("curvature condition at the all-ones point of the small nl") {
  // sum_i d2G/dx_i^2 * x_i^2 <= (1/min mu_l - 1) / mu * G  with M = 1 here
  GnlModel model =
      make_nested_logit(3, {NestSpec{{0, 1}, 0.5}, NestSpec{{2}, 1.0}});
  std::vector<double> x(3, 1.0);
  const double h = 1e-4;
  double lhs = 0.0;
  double g0 = generating_value(model, x);
  for (int i = 0; i < 3; ++i) {
    std::vector<double> up = x, down = x;
    up[i] += h;
    down[i] -= h;
    lhs += (generating_value(model, up) - 2.0 * g0 +
            generating_value(model, down)) /
           (h * h);
  }
  REQUIRE(lhs <= 1.0 * g0 + 1e-6);
}

TEST_CASE("curvature condition fails with half the constant") {
  // for a single-nest model with mu < 1 the condition holds with equality,
  // so any undersized constant is violated at every sample point
  RngStream rng(26, 0, 0);
  CheckResult result = check_proposition1(make_mnl(4, 0.1), 50, rng, 0.5);
  REQUIRE(result.passed == false);
}

TEST_CASE("bundled verification passes for the benchmark models") {
  for (const GnlModel& model :
       {make_mnl(4, 0.25), env1_nl(), make_nested_logit(13, env2_nesting())}) {
    VerificationReport report = run_model_verification(model, 1.0, 99);
    REQUIRE(report.all_passed());
    REQUIRE(report.entries.size() == 4);
  }
}
