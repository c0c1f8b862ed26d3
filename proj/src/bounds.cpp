#include "rdblow/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <string>

#include "rdblow/quadrature.hpp"

namespace rdblow {
namespace {

std::string describe_failure(const HypothesisReport& r) {
  std::string msg = std::string(to_string(r.hypothesis)) + " violated, margin " +
                    std::to_string(r.margin);
  if (r.witness && !r.witness->spatial) {
    msg += " at (u, v) = (" + std::to_string(r.witness->u) + ", " +
           std::to_string(r.witness->v) + ")";
  }
  return msg;
}

void require(const HypothesisReport& r) {
  if (!r.holds) throw HypothesisError(r);
}

}  // namespace

HypothesisError::HypothesisError(HypothesisReport report)
    : Error(ErrorCode::HypothesisFailed, describe_failure(report)), report_(std::move(report)) {}

std::string_view to_string(LowerMode mode) {
  return mode == LowerMode::A2A3 ? "A2A3" : "A2prime";
}

UpperBoundResult upper_bound_blowup(const Nonlinearity& nl, const InitialState& data,
                                    double gamma1, double gamma2, double alpha,
                                    const SampleBox& box) {
  if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be positive");
  nl.require_potential("upper_bound_blowup");

  UpperBoundResult result;
  result.alpha = alpha;

  const auto h1 = check_H1(nl, alpha, box);
  result.hypothesis_reports.push_back(h1);
  require(h1);

  if (const auto* md = std::get_if<MeshData>(&data)) {
    const auto [h2, h3] = check_H2_H3(nl, *md->fields, *md->mesh, gamma1, gamma2);
    result.hypothesis_reports.push_back(h2);
    result.hypothesis_reports.push_back(h3);
    require(h2);
    require(h3);
    result.E0 = energy_E(*md->fields, *md->mesh);
    result.J0 = functional_J(*md->fields, *md->mesh, nl, alpha, gamma1, gamma2).J;
  } else {
    const auto& cd = std::get<ConstantData>(data);
    const auto [h2, h3] = check_H2_H3_constant(nl, cd.c1, cd.c2, cd.domain, gamma1, gamma2);
    result.hypothesis_reports.push_back(h2);
    result.hypothesis_reports.push_back(h3);
    require(h2);
    require(h3);
    const double vol = cd.domain.volume();
    const double area = cd.domain.boundary_measure();
    result.E0 = (cd.c1 * cd.c1 + cd.c2 * cd.c2) * vol;
    result.J0 = -2.0 * (1.0 + alpha) * (gamma1 * cd.c1 * cd.c1 + gamma2 * cd.c2 * cd.c2) * area +
                4.0 * (1.0 + alpha) * nl.F(cd.c1, cd.c2) * vol;
  }

  if (!(result.J0 > 0.0)) {
    throw Error(ErrorCode::NonpositiveJ0, "J(0) = " + std::to_string(result.J0) +
                                              "; the bound needs J(0) > 0");
  }
  result.M = result.J0 / std::pow(result.E0, 1.0 + alpha);
  result.t_upper = 1.0 / (alpha * result.M * std::pow(result.E0, alpha));
  result.t_upper_alt = result.E0 / (alpha * result.J0);
  return result;
}

std::pair<double, double> select_betas(double p, double k1, double k2,
                                       const GeometryConstants& geo) {
  if (!(p >= 1.0) || !(k1 > 0.0) || !(k2 > 0.0) || !(geo.rho > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "select_betas needs p >= 1, k > 0, rho > 0");
  }
  const double shape = std::pow(geo.d / geo.rho + 1.0, 1.5);
  const double numerator = std::pow(2.0, 1.5) * (2.0 * p - 1.0);
  const double base = std::pow(3.0, 0.25) * p * p * shape;
  return {numerator / (base * k1), numerator / (base * k2)};
}

double beta_admissibility(double p, double k, const GeometryConstants& geo, double beta) {
  return -2.0 * (2.0 * p - 1.0) / p +
         std::pow(3.0, 0.25) * p * k / std::sqrt(2.0) * std::pow(geo.d / geo.rho + 1.0, 1.5) *
             beta;
}

std::pair<double, double> compute_K(double p, double k, const GeometryConstants& geo,
                                    double beta) {
  if (!(p > 0.0) || !(k > 0.0) || !(geo.rho > 0.0) || !(beta > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "compute_K needs positive inputs");
  }
  const double K1 = std::pow(3.0, 0.75) * p * k * std::pow(geo.rho, -1.5);
  const double K2 = p * k / (std::sqrt(2.0) * std::pow(3.0, 0.75)) *
                    std::pow(geo.d / geo.rho + 1.0, 1.5) / (beta * beta * beta);
  return {K1, K2};
}

LowerBoundIntegral lower_bound_blowup(double scriptE0, double K1, double K2) {
  if (!(scriptE0 > 0.0)) {
    throw Error(ErrorCode::NonpositiveE0, "scriptE(0) must be positive");
  }
  if (!(K1 > 0.0) || !(K2 >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "need K1 > 0 and K2 >= 0");
  }
  const double w_max = 1.0 / std::sqrt(scriptE0);
  const auto r = integrate_adaptive(
      [K1, K2](double w) {
        const double w3 = w * w * w;
        return 2.0 * w3 / (K1 * w3 + K2);
      },
      0.0, w_max, 1e-10);
  return {r.value, r.abs_error};
}

LowerBoundResult lower_bound_pipeline(const Nonlinearity& nl, const InitialState& data, double p,
                                      double k1, double k2, LowerMode mode,
                                      const SampleBox& box) {
  const DomainSpec& domain = std::holds_alternative<MeshData>(data)
                                 ? std::get<MeshData>(data).mesh->spec()
                                 : std::get<ConstantData>(data).domain;
  if (domain.dimension() != 3) {
    throw Error(ErrorCode::DimensionNot3,
                "the lower bound is stated for three-dimensional convex domains");
  }
  if (!(p >= 1.0)) throw Error(ErrorCode::InvalidArgument, "p must be >= 1");

  LowerBoundResult result;
  result.p = p;
  result.k1 = k1;
  result.k2 = k2;
  result.k = std::max(k1, k2);
  result.mode = mode;
  result.smooth_boundary_caveat = domain.kind() == DomainKind::box;

  if (mode == LowerMode::A2A3) {
    const auto [a2, a3] = check_A2_A3(nl, k1, k2, p, box);
    result.hypothesis_reports = {a2, a3};
    require(a2);
    require(a3);
  } else {
    const auto a2p = check_A2prime(nl, k1, k2, p, box);
    result.hypothesis_reports = {a2p};
    require(a2p);
  }

  if (const auto* md = std::get_if<MeshData>(&data)) {
    for (double x : md->fields->u) {
      if (x < 0.0) throw Error(ErrorCode::NegativeInitialData, "g1 has negative values");
    }
    for (double x : md->fields->v) {
      if (x < 0.0) throw Error(ErrorCode::NegativeInitialData, "g2 has negative values");
    }
    FieldPair flagged = *md->fields;
    flagged.nonnegative = true;
    result.scriptE0 = energy_scriptE(flagged, *md->mesh, p);
  } else {
    const auto& cd = std::get<ConstantData>(data);
    if (cd.c1 < 0.0 || cd.c2 < 0.0) {
      throw Error(ErrorCode::NegativeInitialData, "negative constant data");
    }
    result.scriptE0 = (std::pow(cd.c1, 2.0 * p) + std::pow(cd.c2, 2.0 * p)) * domain.volume();
  }

  const auto geo = geometry_constants(domain);
  result.rho = geo.rho;
  result.d = geo.d;
  std::tie(result.beta1, result.beta2) = select_betas(p, k1, k2, geo);
  result.beta = std::min(result.beta1, result.beta2);
  std::tie(result.K1, result.K2) = compute_K(p, result.k, geo, result.beta);
  const auto integral = lower_bound_blowup(result.scriptE0, result.K1, result.K2);
  result.t_lower = integral.t_lower;
  result.integral_abs_error = integral.abs_error;
  return result;
}

}  // namespace rdblow
