#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "twistkit/twistcheck.hpp"

namespace twistkit {

/// Phase-space point of the periodic loop lattice. Rows are coordinate
/// indices i, columns are sites a.
struct LatticeState {
  Eigen::MatrixXd x;
  Eigen::MatrixXd p;
};

/// Lagrange multipliers lambda_{i,a} sampled on the lattice.
struct TestFunction {
  Eigen::MatrixXd values;
};

/// Pi, Omega and their first partial derivatives at one target point.
struct SiteGeometry {
  Eigen::MatrixXd pi;
  Eigen::MatrixXd omega;
  std::vector<Eigen::MatrixXd> dpi;     // dpi[k](i, j) = d_k Pi^{ij}
  std::vector<Eigen::MatrixXd> domega;  // domega[k](i, j) = d_k Omega_{ij}
};

inline constexpr std::size_t kMinSites = 4;
inline constexpr double kOnShellTolerance = 1e-9;
inline constexpr double kSingularPiThreshold = 1e-10;

/// Lattice version of the Hamiltonian sigma-model system with h = 0:
/// N sites on the loop, spacing 2 pi / N, central differences
/// (Df)_a = (f_{a+1} - f_{a-1}) / (2 spacing), and canonical bracket
/// {X^i_a, p_{j,b}} = delta^i_j delta_ab / spacing.
class LatticeSystem {
 public:
  std::size_t dim() const { return dim_; }
  std::size_t sites() const { return sites_; }
  double spacing() const { return spacing_; }

  /// Evaluates the compiled components. Throws Error(PoleError).
  SiteGeometry geometry(std::span<const double> point) const;
  Eigen::MatrixXd pi_at(std::span<const double> point) const;
  Eigen::MatrixXd omega_at(std::span<const double> point) const;

  /// Central difference along the loop, applied row-wise.
  Eigen::MatrixXd difference(const Eigen::MatrixXd& f) const;

  friend LatticeSystem discretize(const ManifoldSpec& spec, std::size_t sites);

 private:
  LatticeSystem() = default;

  std::size_t dim_ = 0;
  std::size_t sites_ = 0;
  double spacing_ = 0.0;
  // dense n x n tables, row-major, antisymmetric entries filled
  std::vector<CompiledExpr> pi_;
  std::vector<CompiledExpr> omega_;
  std::vector<CompiledExpr> dpi_;     // [k][i][j]
  std::vector<CompiledExpr> domega_;  // [k][i][j]
};

/// Throws Error(BadSiteCount) for N < 4 and Error(NoPotential) for specs
/// carrying only a 3-form.
LatticeSystem discretize(const ManifoldSpec& spec, std::size_t sites);

/// phi^i_a = (DX^i)_a + Pi^{ij}(X_a) (p_{j,a} + Omega_{jk}(X_a) (DX^k)_a).
Eigen::MatrixXd constraints(const LatticeSystem& sys, const LatticeState& s);
double max_constraint(const LatticeSystem& sys, const LatticeState& s);

/// Per-site solve of Pi(X_a) p_a = -(1 + Pi Omega)(X_a) (DX)_a.
/// Throws Error(SingularPi) when |det Pi(X_a)| < kSingularPiThreshold.
Eigen::MatrixXd solve_momenta(const LatticeSystem& sys, const Eigen::MatrixXd& x);

/// Moves a state onto the constraint surface by Gauss-Newton steps of least
/// norm in a smoothing metric ((1 + L)^2 on loop displacements, L the
/// lattice Laplacian). Throws Error(OffShell) if the iteration stalls.
LatticeState project_on_shell(const LatticeSystem& sys, LatticeState s);

/// On-shell state over (or near) the given loop: solve_momenta on even
/// charts, rank check plus project_on_shell on odd ones (where Pi is at
/// best of rank n - 1). Throws Error(SingularPi) on rank deficit.
LatticeState on_shell_state(const LatticeSystem& sys, const Eigen::MatrixXd& x);

/// phi[lambda] = sum_a lambda_{i,a} phi^i_a spacing.
double smeared_constraint(const LatticeSystem& sys, const LatticeState& s, const TestFunction& lambda);

struct PhaseGradient {
  Eigen::MatrixXd dx;
  Eigen::MatrixXd dp;
};

/// Analytic partial derivatives of phi[lambda] in every X^i_a and p_{i,a}.
PhaseGradient smeared_gradient(const LatticeSystem& sys, const LatticeState& s, const TestFunction& lambda);

/// Signed lattice bracket {phi[lambda], phi[mu]}. No on-shell requirement.
double constraint_bracket(const LatticeSystem& sys, const LatticeState& s, const TestFunction& lambda,
                          const TestFunction& mu);

/// |{phi[lambda], phi[mu]}| on the constraint surface. Throws Error(OffShell)
/// when max |phi| exceeds kOnShellTolerance.
double closure_residual(const LatticeSystem& sys, const LatticeState& s, const TestFunction& lambda,
                        const TestFunction& mu);

/// RK4 trajectory (steps + 1 states) of the Hamiltonian flow generated by
/// phi[lambda]. Throws Error(PoleError) with step diagnostics.
std::vector<LatticeState> gauge_trajectory(const LatticeSystem& sys, const LatticeState& s,
                                           const TestFunction& lambda, double dt, std::size_t steps);
LatticeState gauge_flow(const LatticeSystem& sys, const LatticeState& s, const TestFunction& lambda, double dt,
                        std::size_t steps);

/// Max over states and sites of |phi^i_a|.
double drift(const LatticeSystem& sys, std::span<const LatticeState> trajectory);

// ---------------------------------------------------------------------------
// Seeded smooth loops and experiment drivers.

/// Real trig polynomial per coordinate: c_i0 + sum_m a_im cos(m s) + b_im sin(m s).
class TrigLoop {
 public:
  TrigLoop() = default;
  /// Harmonics 1..3 with coefficients uniform in [-amplitude, amplitude];
  /// with pin_origin the loop passes through the chart origin at s = 0.
  static TrigLoop random(std::size_t dim, std::mt19937_64& rng, double amplitude, bool pin_origin,
                         bool with_constant);

  Eigen::MatrixXd sample(std::size_t sites) const;
  TrigLoop scaled(double factor) const;

 private:
  struct Row {
    double constant = 0.0;
    std::vector<double> cos;
    std::vector<double> sin;
  };
  std::vector<Row> rows_;
};

inline constexpr int kTrigHarmonics = 3;
inline constexpr double kLoopAmplitude = 0.05;
inline constexpr double kClosureRatio = 2.0;
/// Residuals at or below this floor are round-off of an exactly closing bracket.
inline constexpr double kExactClosureFloor = 1e-11;
/// Envelope coefficient C in drift <= max|phi_0| + C T spacing^2 + tolerance.
/// Twice the largest C fitted on twisted-r4, N = 32, seeds 1..20, T = 0.1 and 0.2.
inline constexpr double kFlowDriftCoefficient = 8.0;

struct ClosureRow {
  std::size_t sites = 0;
  double max_constraint = 0.0;
  double residual = 0.0;
  std::optional<double> ratio;  // residual(previous) / residual(this)
  bool exact = false;           // residual <= kExactClosureFloor
  bool converging = true;       // exact, or ratio >= kClosureRatio
};

struct ClosureStudy {
  std::vector<ClosureRow> rows;
  bool passed() const;
};

/// Closure residual of one seeded loop family (loop, lambda, mu) refined over
/// the given site counts.
ClosureStudy closure_study(const ManifoldSpec& spec, std::span<const std::size_t> sites, std::uint64_t seed);

struct FlowResult {
  std::size_t sites = 0;
  double dt = 0.0;
  std::size_t steps = 0;
  double initial_max_constraint = 0.0;
  double final_max_constraint = 0.0;
  double drift = 0.0;
  double envelope = 0.0;
  bool within_envelope() const { return drift <= envelope; }
};

FlowResult flow_study(const ManifoldSpec& spec, std::size_t sites, double dt, std::size_t steps,
                      std::uint64_t seed, double lambda_scale = 1.0);

}  // namespace twistkit
