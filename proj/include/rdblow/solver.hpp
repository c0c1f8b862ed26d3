#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rdblow/functionals.hpp"
#include "rdblow/geometry.hpp"
#include "rdblow/nonlinearity.hpp"

namespace rdblow {

/// Optional forcing (s_u, s_v) at a point and time, used for manufactured
/// solutions.
using SourceTerm = std::function<std::pair<double, double>(const Point& x, double t)>;

/// Semi-discrete system: cell-centred 5/7-point Laplacian with Robin ghost
/// values ghost = cell (2 - gamma h) / (2 + gamma h), plus reaction and
/// optional source. State layout is [u..., v...].
class ReactionDiffusionSystem {
 public:
  ReactionDiffusionSystem(const Mesh& mesh, Nonlinearity nl, double gamma1, double gamma2,
                          SourceTerm source = {});

  [[nodiscard]] std::size_t size() const noexcept { return 2 * mesh_->cell_count(); }
  [[nodiscard]] const Mesh& mesh() const noexcept { return *mesh_; }
  [[nodiscard]] const Nonlinearity& nonlinearity() const noexcept { return nl_; }

  /// Throws NonFiniteField if any derivative is not finite.
  void evaluate(double t, std::span<const double> y, std::span<double> dydt) const;

 private:
  void laplacian(std::span<const double> field, double gamma, std::span<double> out) const;

  const Mesh* mesh_;
  Nonlinearity nl_;
  double gamma1_;
  double gamma2_;
  SourceTerm source_;
};

/// (u_t, v_t) for the given fields.
std::pair<std::vector<double>, std::vector<double>> rhs(const FieldPair& fields, const Mesh& mesh,
                                                        const Nonlinearity& nl, double gamma1,
                                                        double gamma2);

struct StepAttempt {
  std::vector<double> y;
  std::vector<double> k_last;  // derivative at the new state (FSAL)
  double error_norm = 0.0;     // <= 1 means acceptable
  bool overflow = false;       // non-finite stage; caller should cut dt
};

inline constexpr const char* kIntegratorName = "Bogacki-Shampine 3(2), FSAL, PI step control";

/// One Bogacki-Shampine 3(2) step from (t, y) with k1 = f(t, y). The error
/// norm is the max over components of |err| / (abs_tol + rel_tol |y|).
StepAttempt step(const ReactionDiffusionSystem& system, double t, std::span<const double> y,
                 std::span<const double> k1, double dt, double rel_tol, double abs_tol);

enum class Outcome { reached_t_end, blowup_detected, step_underflow };

std::string_view to_string(Outcome outcome);

struct TailSample {
  double t;
  double sup;
};

struct BlowupEstimate {
  double time = 0.0;
  double uncertainty = 0.0;
  double theta = 0.0;  // sup ~ (t* - t)^{-theta}
  std::string method;
};

/// Least-squares fit of sup^{-1/theta} against t for each candidate theta
/// on the most recent samples above 10x initial_sup; the best linear fit
/// gives the root. Needs at least 8 such samples (InsufficientSamples).
BlowupEstimate estimate_blowup_time(std::span<const TailSample> tail, double initial_sup);

struct SolverConfig {
  SolverConfig(Mesh mesh_, Nonlinearity nl_) : mesh(std::move(mesh_)), nl(std::move(nl_)) {}

  Mesh mesh;
  Nonlinearity nl;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  std::vector<double> g1;
  std::vector<double> g2;
  double t_end = 1.0;
  double dt_init = 1e-4;
  double dt_min = 1e-15;
  double dt_max = 1e-2;
  double rel_tol = 1e-6;
  double abs_tol = 1e-9;
  double sup_threshold = 1e8;
  int sample_stride = 1;
  long max_steps = 20'000'000;
  // Monitor parameters carried into the samples.
  double alpha = 1.0;
  double p = 1.0;
  bool nonnegative = true;
  SourceTerm source;
};

struct SolveTrace {
  std::vector<EnergySample> samples;
  Outcome outcome = Outcome::reached_t_end;
  std::optional<BlowupEstimate> blowup_estimate;
  std::string trigger;  // sup_threshold | resolution_limit | t_end | dt_min | max_steps
  bool u_blew_up = false;
  bool v_blew_up = false;
  long accepted_steps = 0;
  long rejected_steps = 0;
  long clamp_events = 0;
  FieldPair final_state;
  std::string integrator = kIntegratorName;
};

/// Advances until t_end, the sup-norm threshold, or until steps can no
/// longer advance time. In the last case the run counts as blow-up when
/// the sup-norm has grown by 1e3 over its initial value, otherwise as step
/// underflow. The blow-up estimate's uncertainty adds rel_tol * t to the
/// fit's own spread.
SolveTrace simulate(const SolverConfig& config);

}  // namespace rdblow
