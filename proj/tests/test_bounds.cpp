#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "rdblow/bounds.hpp"
#include "rdblow/errors.hpp"
#include "rdblow/initial_data.hpp"
#include "rdblow/oracle.hpp"

using namespace rdblow;

namespace {

DomainSpec box(std::vector<double> h) { return DomainSpec::box(h); }

double lower_integrand(double w, double K1, double K2) {
  const double w3 = w * w * w;
  return 2 * w3 / (K1 * w3 + K2);
}

}  // namespace

TEST(UpperBound, HomogeneousCubeFromMesh) {
  const Mesh m = build_mesh(box({1, 1, 1}), 8);
  const FieldPair g = sample_initial(InitialDataSpec{}, m);
  const auto r = upper_bound_blowup(make_power_product(1, 2, 2), MeshData{&m, &g}, 0, 0, 1.0);
  EXPECT_NEAR(r.E0, 16.0, 1e-12);
  EXPECT_NEAR(r.J0, 64.0, 1e-12);
  EXPECT_NEAR(r.M, 0.25, 1e-14);
  EXPECT_NEAR(r.t_upper, 0.25, 1e-12);
  EXPECT_NEAR(r.t_upper_alt, 0.25, 1e-12);
  EXPECT_EQ(r.hypothesis_reports.size(), 3u);
}

TEST(UpperBound, U2V3Square) {
  const auto r = upper_bound_blowup(make_power_product(1, 2, 3),
                                    ConstantData{box({1, 1}), 1, 1}, 0, 0, 1.5);
  EXPECT_NEAR(r.E0, 8.0, 1e-14);
  EXPECT_NEAR(r.J0, 40.0, 1e-13);
  EXPECT_NEAR(r.t_upper, 2.0 / 15.0, 1e-12);
  EXPECT_NEAR(r.t_upper_alt, 2.0 / 15.0, 1e-12);
}

TEST(UpperBound, RobinConstantDataRefused) {
  const Mesh m = build_mesh(box({1, 1}), 8);
  const FieldPair g = sample_initial(InitialDataSpec{}, m);
  try {
    upper_bound_blowup(make_power_product(1, 2, 3), MeshData{&m, &g}, 1, 1, 1.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonpositiveJ0);
  }
}

TEST(UpperBound, HypothesisFailureCarriesReport) {
  try {
    upper_bound_blowup(make_power_product(1, 2, 3), ConstantData{box({1, 1}), 1, 1}, 0, 0, 1.6);
    FAIL();
  } catch (const HypothesisError& e) {
    EXPECT_EQ(e.code(), ErrorCode::HypothesisFailed);
    EXPECT_EQ(e.report().hypothesis, Hypothesis::H1);
    EXPECT_FALSE(e.report().holds);
  }
}

TEST(UpperBound, TwoFormsAgree) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(0.3, 3.0);
  for (int i = 0; i < 20; ++i) {
    const double alpha = U(rng);
    const auto nl = make_gradient_homogeneous(U(rng), alpha, ShapeFunction::power(U(rng)));
    const auto r =
        upper_bound_blowup(nl, ConstantData{box({U(rng), U(rng), U(rng)}), U(rng), U(rng)}, 0, 0,
                           alpha);
    EXPECT_LE(std::abs(r.t_upper - r.t_upper_alt), 1e-12 * r.t_upper);
  }
}

TEST(UpperBound, IndependentOfVolumeForConstantNeumannData) {
  const auto nl = make_gradient_homogeneous(1.0, 1.0, ShapeFunction::power(2));
  const auto a = upper_bound_blowup(nl, ConstantData{box({1, 1, 1}), 1.5, 0.5}, 0, 0, 1.0);
  const auto b = upper_bound_blowup(nl, ConstantData{box({3, 0.2, 2}), 1.5, 0.5}, 0, 0, 1.0);
  EXPECT_NEAR(a.t_upper, b.t_upper, 1e-12 * a.t_upper);
}

TEST(Betas, SymmetricQuarticOnUnitGeometry) {
  const auto [b1, b2] = select_betas(2, 2, 2, {1, 1});
  const double expected = 3.0 / (8.0 * std::pow(3.0, 0.25));
  EXPECT_NEAR(b1, expected, 1e-15);
  EXPECT_NEAR(b2, expected, 1e-15);
  EXPECT_NEAR(beta_admissibility(2, 2, {1, 1}, b1), 0.0, 1e-12);
}

TEST(Betas, LinearCase) {
  const auto [b1, b2] = select_betas(1, 1, 1, {1, 1});
  EXPECT_NEAR(b1, std::pow(3.0, -0.25), 1e-15);
  EXPECT_NEAR(b2, std::pow(3.0, -0.25), 1e-15);
}

TEST(Betas, DoublingKHalvesBeta) {
  const GeometryConstants geo{0.7, 1.9};
  const auto [b1, b2] = select_betas(1.5, 1.0, 3.0, geo);
  const auto [c1, c2] = select_betas(1.5, 2.0, 3.0, geo);
  EXPECT_NEAR(c1, b1 / 2, 1e-15);
  EXPECT_DOUBLE_EQ(c2, b2);
}

TEST(Betas, AdmissibleAtEquality) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> P(1.0, 4.0), K(0.1, 10.0), R(0.2, 2.0);
  for (int i = 0; i < 100; ++i) {
    const double rho = R(rng);
    const GeometryConstants geo{rho, rho * (1 + R(rng))};
    const double p = P(rng);
    const double k1 = K(rng), k2 = K(rng);
    const auto [b1, b2] = select_betas(p, k1, k2, geo);
    EXPECT_NEAR(beta_admissibility(p, k1, geo, b1), 0.0, 1e-12);
    EXPECT_NEAR(beta_admissibility(p, k2, geo, b2), 0.0, 1e-12);
    EXPECT_LT(beta_admissibility(p, k1, geo, 0.5 * b1), 0.0);
  }
}

TEST(Constants, K1Values) {
  const double beta = 3.0 / (8.0 * std::pow(3.0, 0.25));
  const auto [K1, K2] = compute_K(2, 2, {1, 1}, beta);
  EXPECT_NEAR(K1, 4 * std::pow(3.0, 0.75), 1e-13);
  EXPECT_NEAR(K2, 4096.0 / 27.0, 1e-10);
  const auto [L1, L2] = compute_K(1, 1, {4, 4}, 1.0);
  (void)L2;
  EXPECT_NEAR(L1, std::pow(3.0, 0.75) / 8, 1e-15);
}

TEST(Constants, K2ScalesWithInverseBetaCubed) {
  const GeometryConstants geo{0.8, 1.7};
  const auto [a1, a2] = compute_K(2.5, 1.5, geo, 0.3);
  const auto [b1, b2] = compute_K(2.5, 1.5, geo, 0.15);
  EXPECT_DOUBLE_EQ(a1, b1);
  EXPECT_NEAR(b2, 8 * a2, 1e-12 * b2);
}

TEST(LowerIntegral, PureK1) {
  const auto r = lower_bound_blowup(4.0, 1.0, 0.0);
  EXPECT_NEAR(r.t_lower, 1.0, 1e-12);
}

TEST(LowerIntegral, VanishingK1Limit) {
  const auto r = lower_bound_blowup(1.0, 1e-300, 1.0);
  EXPECT_NEAR(r.t_lower, 0.5, 1e-6);
}

TEST(LowerIntegral, RejectsBadArguments) {
  EXPECT_THROW(lower_bound_blowup(1.0, 0.0, 1.0), Error);
  try {
    lower_bound_blowup(0.0, 1.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonpositiveE0);
  }
}

TEST(LowerIntegral, MatchesTrapezoidOracleOnUnitConstants) {
  const double K1 = 4 * std::pow(3.0, 0.75);
  const double K2 = 4096.0 / 27.0;
  const auto r = lower_bound_blowup(16.0, K1, K2);
  const double ref = oracle::brute_force_integral(
      [&](double w) { return lower_integrand(w, K1, K2); }, 0.0, 0.25, 10'000'000);
  EXPECT_NEAR(r.t_lower, ref, 1e-8);
  EXPECT_LE(r.abs_error, 1e-10);
}

TEST(LowerIntegral, MatchesTrapezoidOracleOnRandomTriples) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> K1(0.1, 10.0), K2(0.01, 200.0), E(0.5, 100.0);
  for (int i = 0; i < 20; ++i) {
    const double k1 = K1(rng), k2 = K2(rng), e0 = E(rng);
    const auto r = lower_bound_blowup(e0, k1, k2);
    const double ref = oracle::brute_force_integral(
        [&](double w) { return lower_integrand(w, k1, k2); }, 0.0, 1 / std::sqrt(e0), 1'000'000);
    EXPECT_NEAR(r.t_lower, ref, 1e-8);
  }
}

TEST(LowerIntegral, StrictlyDecreasingInEachArgument) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> K1(0.1, 10.0), K2(0.01, 200.0), E(0.5, 100.0);
  for (int i = 0; i < 20; ++i) {
    const double k1 = K1(rng), k2 = K2(rng), e0 = E(rng);
    const double base = lower_bound_blowup(e0, k1, k2).t_lower;
    EXPECT_LT(lower_bound_blowup(1.5 * e0, k1, k2).t_lower, base);
    EXPECT_LT(lower_bound_blowup(e0, 1.5 * k1, k2).t_lower, base);
    EXPECT_LT(lower_bound_blowup(e0, k1, 1.5 * k2).t_lower, base);
  }
}

TEST(LowerPipeline, UnitBall) {
  const auto r = lower_bound_pipeline(make_power_product(1, 2, 2),
                                      ConstantData{DomainSpec::ball(3, 1.0), 1, 1}, 2, 2, 2,
                                      LowerMode::A2prime);
  EXPECT_NEAR(r.scriptE0, 8 * std::acos(-1.0) / 3, 1e-13);
  EXPECT_NEAR(r.beta, 3.0 / (8.0 * std::pow(3.0, 0.25)), 1e-15);
  EXPECT_NEAR(r.K1, 9.118028227819110568, 1e-12);
  EXPECT_NEAR(r.K2, 4096.0 / 27.0, 1e-10);
  EXPECT_NEAR(r.t_lower, 4.68945208288504100e-5, 1e-15);
  EXPECT_GT(r.t_lower, 0.0);
  EXPECT_LE(r.t_lower, 0.25);
  EXPECT_FALSE(r.smooth_boundary_caveat);
}

TEST(LowerPipeline, AbsorptionCube) {
  const Mesh m = build_mesh(box({1, 1, 1}), 6);
  InitialDataSpec spec;
  spec.c1 = spec.c2 = 2.0;
  const FieldPair g = sample_initial(spec, m);
  const auto r = lower_bound_pipeline(make_absorption(3, 3, 3, 3, 0.01, 0.01), MeshData{&m, &g},
                                      2, 1, 1, LowerMode::A2prime);
  EXPECT_NEAR(r.scriptE0, 256.0, 1e-10);
  EXPECT_NEAR(r.beta, 0.35693799995006846, 1e-14);
  EXPECT_NEAR(r.K1, 4.559014113909555, 1e-12);
  EXPECT_NEAR(r.K2, 61.60682917159486, 1e-10);
  EXPECT_NEAR(r.t_lower, 1.2383879952393709e-7, 1e-17);
  EXPECT_TRUE(r.smooth_boundary_caveat);
}

TEST(LowerPipeline, AbsorptionFailsInA2A3Mode) {
  EXPECT_THROW(lower_bound_pipeline(make_absorption(3, 3, 3, 3, 0.01, 0.01),
                                    ConstantData{box({1, 1, 1}), 2, 2}, 2, 1, 1, LowerMode::A2A3),
               HypothesisError);
}

TEST(LowerPipeline, TwoDimensionsRefused) {
  try {
    lower_bound_pipeline(make_power_product(1, 2, 2), ConstantData{box({1, 1}), 1, 1}, 2, 2, 2,
                         LowerMode::A2prime);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionNot3);
  }
}
