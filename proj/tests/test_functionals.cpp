#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "rdblow/errors.hpp"
#include "rdblow/functionals.hpp"
#include "rdblow/initial_data.hpp"
#include "rdblow/solver.hpp"

using namespace rdblow;

namespace {

Mesh box_mesh(int dim, int n) {
  const std::vector<double> h(dim, 1.0);
  return build_mesh(DomainSpec::box(h), n);
}

FieldPair fill(const Mesh& m, double a, double b) {
  FieldPair f;
  f.u.assign(m.cell_count(), a);
  f.v.assign(m.cell_count(), b);
  f.nonnegative = true;
  return f;
}

Nonlinearity zero_reaction() {
  return Nonlinearity::custom(
      "zero", [](double, double) { return 0.0; }, [](double, double) { return 0.0; },
      Evaluator([](double, double) { return 0.0; }));
}

}  // namespace

TEST(EnergyE, Constants) {
  EXPECT_NEAR(energy_E(fill(box_mesh(2, 6), 1, 1), box_mesh(2, 6)), 8.0, 1e-13);
  EXPECT_NEAR(energy_E(fill(box_mesh(3, 6), 1, 0), box_mesh(3, 6)), 8.0, 1e-13);
}

TEST(EnergyE, LinearProfileSecondOrder) {
  std::vector<double> err;
  for (int n : {8, 16, 32}) {
    const Mesh m = box_mesh(2, n);
    FieldPair f = fill(m, 0, 0);
    for (std::size_t i = 0; i < m.cell_count(); ++i) f.u[i] = m.cell_centers()[i][0];
    err.push_back(std::abs(energy_E(f, m) - 4.0 / 3.0));
  }
  EXPECT_GE(std::log2(err[0] / err[1]), 1.9);
  EXPECT_GE(std::log2(err[1] / err[2]), 1.9);
}

TEST(FunctionalJ, ConstantNeumann) {
  const Mesh m = box_mesh(3, 6);
  const auto j = functional_J(fill(m, 1, 1), m, make_power_product(1, 2, 2), 1.0, 0, 0);
  EXPECT_NEAR(j.J, 64.0, 1e-12);
}

TEST(FunctionalJ, ConstantRobinWithTraces) {
  const Mesh m = box_mesh(2, 8);
  const FieldPair g = sample_initial(InitialDataSpec{}, m);
  const auto j = functional_J(g, m, make_power_product(1, 2, 3), 1.5, 1, 1);
  EXPECT_NEAR(j.bdry_u, 8.0, 1e-12);
  EXPECT_NEAR(j.J, -40.0, 1e-12);
}

TEST(FunctionalJ, ZeroFields) {
  const Mesh m = box_mesh(2, 5);
  const auto j = functional_J(fill(m, 0, 0), m, make_power_product(1, 2, 2), 1.0, 0.5, 2.0);
  EXPECT_EQ(j.J, 0.0);
}

TEST(FunctionalJ, DecompositionIdentity) {
  const Mesh m = box_mesh(3, 7);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(0.1, 2.0);
  FieldPair f = fill(m, 0, 0);
  for (std::size_t i = 0; i < m.cell_count(); ++i) {
    f.u[i] = U(rng);
    f.v[i] = U(rng);
  }
  const auto j = functional_J(f, m, make_power_product(1.3, 2, 3), 1.2, 0.7, 1.9);
  EXPECT_NEAR(j.recombine(), j.J, 1e-12 * std::abs(j.J));
}

TEST(FunctionalJ, ConstantNeumannClosedForm) {
  const std::vector<double> h{2.0, 0.5, 1.0};
  const Mesh m = build_mesh(DomainSpec::box(h), 5);
  const auto nl = make_gradient_homogeneous(0.8, 0.5, ShapeFunction::power(1.5));
  const double alpha = 0.5;
  const auto j = functional_J(fill(m, 1.3, 0.7), m, nl, alpha, 0, 0);
  EXPECT_NEAR(j.J, 4 * (1 + alpha) * nl.F(1.3, 0.7) * 8.0, 1e-12 * j.J);
}

TEST(ScriptE, Constants) {
  EXPECT_NEAR(energy_scriptE(fill(box_mesh(3, 4), 1, 1), box_mesh(3, 4), 2), 16.0, 1e-13);
  EXPECT_NEAR(energy_scriptE(fill(box_mesh(2, 4), 2, 0), box_mesh(2, 4), 1), 16.0, 1e-13);
}

TEST(ScriptE, QuarticProfileConverges) {
  const double exact = 5312.0 / 315.0;
  std::vector<double> err;
  for (int n : {8, 16, 32}) {
    const Mesh m = box_mesh(2, n);
    FieldPair f = fill(m, 0, 0);
    for (std::size_t i = 0; i < m.cell_count(); ++i) {
      const double x = m.cell_centers()[i][0];
      f.u[i] = 1 + x * x;
    }
    err.push_back(std::abs(energy_scriptE(f, m, 2) - exact));
  }
  EXPECT_LT(err[2] / exact, 5e-3);
  EXPECT_GE(std::log2(err[1] / err[2]), 1.9);
}

TEST(ScriptE, RequiresNonnegativeFlag) {
  const Mesh m = box_mesh(2, 4);
  FieldPair f = fill(m, 1, 1);
  f.nonnegative = false;
  EXPECT_THROW(energy_scriptE(f, m, 2), Error);
  f.nonnegative = true;
  f.u[0] = -1e-13;
  EXPECT_NO_THROW(energy_scriptE(f, m, 2));
  f.u[0] = -1e-3;
  try {
    energy_scriptE(f, m, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NegativeField);
  }
}

TEST(Energies, MonotoneUnderDomination) {
  const Mesh m = box_mesh(2, 6);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    FieldPair small = fill(m, 0, 0), big = fill(m, 0, 0);
    for (std::size_t i = 0; i < m.cell_count(); ++i) {
      small.u[i] = U(rng);
      small.v[i] = U(rng);
      big.u[i] = small.u[i] + U(rng);
      big.v[i] = small.v[i] + U(rng);
    }
    EXPECT_LE(energy_E(small, m), energy_E(big, m));
    EXPECT_LE(energy_scriptE(small, m, 1.5), energy_scriptE(big, m, 1.5));
    EXPECT_GE(energy_E(small, m), 0.0);
  }
}

TEST(GradientEnergy, ConstantIsZero) {
  const Mesh m = box_mesh(3, 5);
  const std::vector<double> c(m.cell_count(), 3.0);
  EXPECT_NEAR(discrete_gradient_energy(c, m, 0.0), 0.0, 1e-14);
}

TEST(GradientEnergy, LinearProfileWithTraceIsExact) {
  for (int n : {8, 16}) {
    const Mesh m = box_mesh(2, n);
    std::vector<double> u, tr;
    for (const auto& x : m.cell_centers()) u.push_back(x[0]);
    for (const auto& f : m.boundary_faces()) tr.push_back(f.center[0]);
    EXPECT_NEAR(discrete_gradient_energy(u, m, 0.0, std::span<const double>(tr)), 4.0, 1e-12);
  }
}

// Without a trace the face value comes from the Neumann closure, which
// x_1 violates; the boundary half-cells then contribute nothing.
TEST(GradientEnergy, LinearProfileWithNeumannClosure) {
  for (int n : {8, 16, 32}) {
    const Mesh m = box_mesh(2, n);
    std::vector<double> u;
    for (const auto& x : m.cell_centers()) u.push_back(x[0]);
    EXPECT_NEAR(discrete_gradient_energy(u, m, 0.0), 4.0 - 2.0 * m.spacing()[0], 1e-12);
  }
}

TEST(GradientEnergy, HomogeneousOfDegreeTwo) {
  const Mesh m = box_mesh(3, 6);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd;
  std::vector<double> u(m.cell_count()), u2(m.cell_count());
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] = nd(rng);
    u2[i] = 2 * u[i];
  }
  for (double gamma : {0.0, 1.5}) {
    const double e = discrete_gradient_energy(u, m, gamma);
    EXPECT_NEAR(discrete_gradient_energy(u2, m, gamma), 4 * e, 1e-12 * e);
  }
}

TEST(GradientEnergy, PerCellSplitSumsToTotal) {
  const Mesh m = box_mesh(2, 7);
  std::vector<double> u;
  for (const auto& x : m.cell_centers()) u.push_back(std::sin(x[0]) + x[1] * x[1]);
  double sum = 0;
  for (double c : gradient_energy_by_cell(u, m, 0.8)) sum += c;
  EXPECT_NEAR(sum, discrete_gradient_energy(u, m, 0.8), 1e-12);
}

// gamma B + D is the quadratic form of the solver's Laplacian, so the
// energy identity d/dt E = -2 (gamma B + D) holds exactly in semi-discrete
// form.
TEST(GradientEnergy, ConsistentWithSolverLaplacian) {
  for (int dim : {2, 3}) {
    const Mesh m = box_mesh(dim, 6);
    std::mt19937_64 rng(dim);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    FieldPair f = fill(m, 0, 0);
    for (std::size_t i = 0; i < m.cell_count(); ++i) {
      f.u[i] = U(rng);
      f.v[i] = U(rng);
    }
    const double gamma = 1.3;
    const auto [du, dv] = rhs(f, m, zero_reaction(), gamma, 0.0);
    double form = 0;
    for (std::size_t i = 0; i < m.cell_count(); ++i) form -= f.u[i] * du[i] * m.cell_volume();
    const double expected =
        discrete_gradient_energy(f.u, m, gamma) + gamma * boundary_square_integral(f.u, m, gamma);
    EXPECT_NEAR(form, expected, 1e-12 * expected);
  }
}

TEST(Monitors, FlagsDecreasingJ) {
  std::vector<EnergySample> s(6);
  for (int i = 0; i < 6; ++i) {
    s[i].t = 0.1 * i;
    s[i].E = 1.0 + i;
    s[i].J = 10.0 - i;
    s[i].sup_u = s[i].sup_v = 1.0;
  }
  const auto r = run_monitors(s, {});
  EXPECT_GT(r.j_violations, 0);
  EXPECT_FALSE(r.ok());
}

TEST(Monitors, AcceptsExactHomogeneousSolution) {
  // u = v = (1 - 4t)^(-1/2) on [-1,1]^3 with F = u^2 v^2, alpha = 1.
  std::vector<EnergySample> s;
  for (int i = 0; i <= 40; ++i) {
    const double t = 0.005 * i;
    const double u = 1.0 / std::sqrt(1 - 4 * t);
    EnergySample e;
    e.t = t;
    e.E = 16 * u * u;
    e.J = 64 * std::pow(u, 4);
    e.sup_u = e.sup_v = u;
    s.push_back(e);
  }
  MonitorSettings ms;
  ms.alpha = 1.0;
  const auto r = run_monitors(s, ms);
  EXPECT_TRUE(r.ok());
  EXPECT_GT(r.inequality_checked, 30);
}
