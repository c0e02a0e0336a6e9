#include "twistkit/loopspace.hpp"

#include <cmath>
#include <numbers>

namespace twistkit {

namespace {

std::span<const double> column(const Eigen::MatrixXd& m, Eigen::Index a) {
  return {m.col(a).data(), static_cast<std::size_t>(m.rows())};
}

std::vector<CompiledExpr> dense_table(const std::vector<std::vector<ScalarExpr>>& m) {
  std::vector<CompiledExpr> out;
  for (const auto& row : m)
    for (const auto& e : row) out.emplace_back(e);
  return out;
}

template <Variance V>
std::vector<std::vector<ScalarExpr>> dense(const AntisymmetricField<V>& t) {
  const std::size_t n = t.dim();
  std::vector<std::vector<ScalarExpr>> m(n, std::vector<ScalarExpr>(n, ScalarExpr(n)));
  for (const auto& [idx, v] : t.components()) {
    m[idx[0]][idx[1]] = v;
    m[idx[1]][idx[0]] = -v;
  }
  return m;
}

template <Variance V>
std::vector<CompiledExpr> derivative_tables(const AntisymmetricField<V>& t) {
  const auto m = dense(t);
  const std::size_t n = t.dim();
  std::vector<CompiledExpr> out;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out.emplace_back(differentiate(m[i][j], k));
  return out;
}

void fill(Eigen::MatrixXd& m, const CompiledExpr* table, std::span<const double> point) {
  const auto n = m.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& e = table[i * n + j];
      m(i, j) = e.is_zero() ? 0.0 : e(point);
    }
}

std::size_t wrap(std::ptrdiff_t a, std::size_t n) {
  const auto sn = static_cast<std::ptrdiff_t>(n);
  return static_cast<std::size_t>(((a % sn) + sn) % sn);
}

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

}  // namespace

LatticeSystem discretize(const ManifoldSpec& spec, std::size_t sites) {
  if (sites < kMinSites)
    throw Error(ErrorKind::BadSiteCount, "need at least " + std::to_string(kMinSites) + " sites, got " + std::to_string(sites));
  const auto* two = std::get_if<TwoFormBackground>(&spec.background);
  if (two == nullptr)
    throw Error(ErrorKind::NoPotential, "lattice constraints need a 2-form potential; the spec only provides H");

  LatticeSystem sys;
  sys.dim_ = spec.dim();
  sys.sites_ = sites;
  sys.spacing_ = 2.0 * std::numbers::pi / static_cast<double>(sites);
  sys.pi_ = dense_table(dense(spec.pi));
  sys.omega_ = dense_table(dense(two->omega));
  sys.dpi_ = derivative_tables(spec.pi);
  sys.domega_ = derivative_tables(two->omega);
  return sys;
}

Eigen::MatrixXd LatticeSystem::pi_at(std::span<const double> point) const {
  const auto n = static_cast<Eigen::Index>(dim_);
  Eigen::MatrixXd m(n, n);
  fill(m, pi_.data(), point);
  return m;
}

Eigen::MatrixXd LatticeSystem::omega_at(std::span<const double> point) const {
  const auto n = static_cast<Eigen::Index>(dim_);
  Eigen::MatrixXd m(n, n);
  fill(m, omega_.data(), point);
  return m;
}

SiteGeometry LatticeSystem::geometry(std::span<const double> point) const {
  const auto n = static_cast<Eigen::Index>(dim_);
  SiteGeometry g;
  g.pi.resize(n, n);
  g.omega.resize(n, n);
  fill(g.pi, pi_.data(), point);
  fill(g.omega, omega_.data(), point);
  g.dpi.assign(dim_, Eigen::MatrixXd(n, n));
  g.domega.assign(dim_, Eigen::MatrixXd(n, n));
  for (std::size_t k = 0; k < dim_; ++k) {
    fill(g.dpi[k], dpi_.data() + k * dim_ * dim_, point);
    fill(g.domega[k], domega_.data() + k * dim_ * dim_, point);
  }
  return g;
}

Eigen::MatrixXd LatticeSystem::difference(const Eigen::MatrixXd& f) const {
  const auto n = static_cast<Eigen::Index>(sites_);
  Eigen::MatrixXd d(f.rows(), n);
  for (Eigen::Index a = 0; a < n; ++a) {
    const auto next = static_cast<Eigen::Index>(wrap(a + 1, sites_));
    const auto prev = static_cast<Eigen::Index>(wrap(a - 1, sites_));
    d.col(a) = (f.col(next) - f.col(prev)) / (2.0 * spacing_);
  }
  return d;
}

Eigen::MatrixXd constraints(const LatticeSystem& sys, const LatticeState& s) {
  const Eigen::MatrixXd dx = sys.difference(s.x);
  Eigen::MatrixXd phi(s.x.rows(), s.x.cols());
  for (Eigen::Index a = 0; a < s.x.cols(); ++a) {
    const auto pt = column(s.x, a);
    phi.col(a) = dx.col(a) + sys.pi_at(pt) * (s.p.col(a) + sys.omega_at(pt) * dx.col(a));
  }
  return phi;
}

double max_constraint(const LatticeSystem& sys, const LatticeState& s) {
  return constraints(sys, s).cwiseAbs().maxCoeff();
}

Eigen::MatrixXd solve_momenta(const LatticeSystem& sys, const Eigen::MatrixXd& x) {
  const Eigen::MatrixXd dx = sys.difference(x);
  const auto n = x.rows();
  Eigen::MatrixXd p(n, x.cols());
  for (Eigen::Index a = 0; a < x.cols(); ++a) {
    SiteGeometry g = sys.geometry(column(x, a));
    const double det = g.pi.determinant();
    if (std::abs(det) < kSingularPiThreshold)
      throw Error(ErrorKind::SingularPi, "Pi is singular at site " + std::to_string(a) + " (|det| = " +
                                             std::to_string(std::abs(det)) + ")");
    Eigen::VectorXd rhs = -dx.col(a) - g.pi * (g.omega * dx.col(a));
    p.col(a) = g.pi.partialPivLu().solve(rhs);
  }
  return p;
}

namespace {

// Jacobian of all constraints (row a*n + i) with respect to the state
// variables (X^k_b at column b*n + k, p_{k,b} at n*N + b*n + k).
Eigen::MatrixXd constraint_jacobian(const LatticeSystem& sys, const LatticeState& s) {
  const auto n = static_cast<Eigen::Index>(sys.dim());
  const auto sites = static_cast<Eigen::Index>(sys.sites());
  const double h = sys.spacing();
  const Eigen::MatrixXd dx = sys.difference(s.x);
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n * sites, 2 * n * sites);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index a = 0; a < sites; ++a) {
    SiteGeometry g = sys.geometry(column(s.x, a));
    const Eigen::VectorXd q = s.p.col(a) + g.omega * dx.col(a);
    const Eigen::MatrixXd coupling = (id + g.pi * g.omega) / (2.0 * h);
    const auto next = static_cast<Eigen::Index>(wrap(a + 1, sys.sites()));
    const auto prev = static_cast<Eigen::Index>(wrap(a - 1, sys.sites()));
    const Eigen::Index row = a * n;
    for (Eigen::Index k = 0; k < n; ++k)
      jac.block(row, a * n + k, n, 1) = g.dpi[k] * q + g.pi * (g.domega[k] * dx.col(a));
    jac.block(row, next * n, n, n) += coupling;
    jac.block(row, prev * n, n, n) -= coupling;
    jac.block(row, n * sites + a * n, n, n) = g.pi;
  }
  return jac;
}

Eigen::VectorXd site_major(const Eigen::MatrixXd& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

}  // namespace

LatticeState project_on_shell(const LatticeSystem& sys, LatticeState s) {
  const auto n = static_cast<Eigen::Index>(sys.dim());
  const auto sites = static_cast<Eigen::Index>(sys.sites());
  const double h = sys.spacing();

  Eigen::MatrixXd smooth = Eigen::MatrixXd::Identity(sites, sites);
  for (Eigen::Index a = 0; a < sites; ++a) {
    smooth(a, a) += 2.0 / (h * h);
    smooth(a, static_cast<Eigen::Index>(wrap(a + 1, sys.sites()))) -= 1.0 / (h * h);
    smooth(a, static_cast<Eigen::Index>(wrap(a - 1, sys.sites()))) -= 1.0 / (h * h);
  }
  const Eigen::MatrixXd smooth_inv = (smooth * smooth).inverse();
  Eigen::MatrixXd metric_inv = Eigen::MatrixXd::Identity(2 * n * sites, 2 * n * sites);
  for (Eigen::Index a = 0; a < sites; ++a)
    for (Eigen::Index b = 0; b < sites; ++b)
      for (Eigen::Index k = 0; k < n; ++k) metric_inv(a * n + k, b * n + k) = smooth_inv(a, b);

  constexpr int kMaxIterations = 50;
  constexpr double kTarget = 1e-13;
  for (int it = 0; it < kMaxIterations; ++it) {
    const Eigen::MatrixXd phi = constraints(sys, s);
    if (phi.cwiseAbs().maxCoeff() <= kTarget) return s;
    const Eigen::MatrixXd jac = constraint_jacobian(sys, s);
    const Eigen::MatrixXd mj = metric_inv * jac.transpose();
    const Eigen::MatrixXd normal = jac * mj;
    const Eigen::VectorXd step = -mj * normal.ldlt().solve(site_major(phi));
    s.x += Eigen::Map<const Eigen::MatrixXd>(step.data(), n, sites);
    s.p += Eigen::Map<const Eigen::MatrixXd>(step.data() + n * sites, n, sites);
  }
  const double residual = max_constraint(sys, s);
  if (residual > kOnShellTolerance)
    throw Error(ErrorKind::OffShell, "projection onto the constraint surface stalled at max|phi| = " +
                                         std::to_string(residual));
  return s;
}

LatticeState on_shell_state(const LatticeSystem& sys, const Eigen::MatrixXd& x) {
  const std::size_t n = sys.dim();
  if (n % 2 == 0) return {x, solve_momenta(sys, x)};

  auto check_rank = [&](const Eigen::MatrixXd& loop) {
    for (Eigen::Index a = 0; a < loop.cols(); ++a) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys.pi_at(column(loop, a)));
      const auto& sv = svd.singularValues();
      std::size_t rank = 0;
      for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) > kSingularPiThreshold) ++rank;
      if (rank < n - 1)
        throw Error(ErrorKind::SingularPi, "Pi has rank " + std::to_string(rank) + " < " + std::to_string(n - 1) +
                                               " at site " + std::to_string(a));
    }
  };
  check_rank(x);
  LatticeState s = project_on_shell(sys, {x, Eigen::MatrixXd::Zero(x.rows(), x.cols())});
  check_rank(s.x);
  return s;
}

double smeared_constraint(const LatticeSystem& sys, const LatticeState& s, const TestFunction& lambda) {
  return lambda.values.cwiseProduct(constraints(sys, s)).sum() * sys.spacing();
}

PhaseGradient smeared_gradient(const LatticeSystem& sys, const LatticeState& s, const TestFunction& lambda) {
  const auto n = static_cast<Eigen::Index>(sys.dim());
  const auto sites = static_cast<Eigen::Index>(sys.sites());
  const double h = sys.spacing();
  const Eigen::MatrixXd dx = sys.difference(s.x);
  const Eigen::MatrixXd& lam = lambda.values;

  PhaseGradient grad{Eigen::MatrixXd(n, sites), Eigen::MatrixXd(n, sites)};
  // v_a multiplies (DX)_a inside phi[lambda] / spacing
  Eigen::MatrixXd v(n, sites);
  for (Eigen::Index a = 0; a < sites; ++a) {
    SiteGeometry g = sys.geometry(column(s.x, a));
    const Eigen::VectorXd q = s.p.col(a) + g.omega * dx.col(a);
    const Eigen::VectorXd w = g.pi.transpose() * lam.col(a);
    grad.dp.col(a) = h * w;
    for (Eigen::Index k = 0; k < n; ++k)
      grad.dx(k, a) = h * (lam.col(a).dot(g.dpi[k] * q) + w.dot(g.domega[k] * dx.col(a)));
    v.col(a) = lam.col(a) + g.omega.transpose() * w;
  }
  for (Eigen::Index a = 0; a < sites; ++a) {
    const auto next = static_cast<Eigen::Index>(wrap(a + 1, sys.sites()));
    const auto prev = static_cast<Eigen::Index>(wrap(a - 1, sys.sites()));
    grad.dx.col(a) += 0.5 * (v.col(prev) - v.col(next));
  }
  return grad;
}

double constraint_bracket(const LatticeSystem& sys, const LatticeState& s, const TestFunction& lambda,
                          const TestFunction& mu) {
  const PhaseGradient gl = smeared_gradient(sys, s, lambda);
  const PhaseGradient gm = smeared_gradient(sys, s, mu);
  return (gl.dx.cwiseProduct(gm.dp).sum() - gm.dx.cwiseProduct(gl.dp).sum()) / sys.spacing();
}

double closure_residual(const LatticeSystem& sys, const LatticeState& s, const TestFunction& lambda,
                        const TestFunction& mu) {
  const double off = max_constraint(sys, s);
  if (off > kOnShellTolerance)
    throw Error(ErrorKind::OffShell, "state is off the constraint surface (max|phi| = " + std::to_string(off) + ")");
  return std::abs(constraint_bracket(sys, s, lambda, mu));
}

std::vector<LatticeState> gauge_trajectory(const LatticeSystem& sys, const LatticeState& s,
                                           const TestFunction& lambda, double dt, std::size_t steps) {
  const double h = sys.spacing();
  auto field = [&](const LatticeState& z) {
    PhaseGradient g = smeared_gradient(sys, z, lambda);
    return LatticeState{g.dp / h, -g.dx / h};
  };
  auto shifted = [](const LatticeState& z, const LatticeState& k, double f) {
    return LatticeState{z.x + f * k.x, z.p + f * k.p};
  };

  std::vector<LatticeState> out;
  out.reserve(steps + 1);
  out.push_back(s);
  if (lambda.values.isZero(0.0)) {
    out.resize(steps + 1, s);
    return out;
  }
  LatticeState z = s;
  for (std::size_t step = 0; step < steps; ++step) {
    try {
      const LatticeState k1 = field(z);
      const LatticeState k2 = field(shifted(z, k1, dt / 2));
      const LatticeState k3 = field(shifted(z, k2, dt / 2));
      const LatticeState k4 = field(shifted(z, k3, dt));
      z.x += dt / 6 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x);
      z.p += dt / 6 * (k1.p + 2 * k2.p + 2 * k3.p + k4.p);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::PoleError) throw;
      throw Error(ErrorKind::PoleError, std::string(e.what()) + " during gauge-flow step " + std::to_string(step));
    }
    out.push_back(z);
  }
  return out;
}

LatticeState gauge_flow(const LatticeSystem& sys, const LatticeState& s, const TestFunction& lambda, double dt,
                        std::size_t steps) {
  return gauge_trajectory(sys, s, lambda, dt, steps).back();
}

double drift(const LatticeSystem& sys, std::span<const LatticeState> trajectory) {
  double worst = 0.0;
  for (const auto& s : trajectory) worst = std::max(worst, max_constraint(sys, s));
  return worst;
}

// ---------------------------------------------------------------------------

TrigLoop TrigLoop::random(std::size_t dim, std::mt19937_64& rng, double amplitude, bool pin_origin,
                          bool with_constant) {
  TrigLoop loop;
  loop.rows_.resize(dim);
  for (auto& row : loop.rows_) {
    if (with_constant) row.constant = amplitude * unit_uniform(rng);
    for (int m = 0; m < kTrigHarmonics; ++m) {
      row.cos.push_back(amplitude * unit_uniform(rng));
      row.sin.push_back(amplitude * unit_uniform(rng));
    }
    if (pin_origin) {
      row.constant = 0.0;
      for (double c : row.cos) row.constant -= c;
    }
  }
  return loop;
}

Eigen::MatrixXd TrigLoop::sample(std::size_t sites) const {
  const auto n = static_cast<Eigen::Index>(rows_.size());
  Eigen::MatrixXd out(n, static_cast<Eigen::Index>(sites));
  for (Eigen::Index i = 0; i < n; ++i) {
    const Row& row = rows_[i];
    for (std::size_t a = 0; a < sites; ++a) {
      const double s = 2.0 * std::numbers::pi * static_cast<double>(a) / static_cast<double>(sites);
      double v = row.constant;
      for (std::size_t m = 0; m < row.cos.size(); ++m) {
        const double ms = static_cast<double>(m + 1) * s;
        v += row.cos[m] * std::cos(ms) + row.sin[m] * std::sin(ms);
      }
      out(i, static_cast<Eigen::Index>(a)) = v;
    }
  }
  return out;
}

TrigLoop TrigLoop::scaled(double factor) const {
  TrigLoop out = *this;
  for (auto& row : out.rows_) {
    row.constant *= factor;
    for (auto& c : row.cos) c *= factor;
    for (auto& c : row.sin) c *= factor;
  }
  return out;
}

bool ClosureStudy::passed() const {
  for (const auto& r : rows)
    if (!r.converging) return false;
  return !rows.empty();
}

ClosureStudy closure_study(const ManifoldSpec& spec, std::span<const std::size_t> sites, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t n = spec.dim();
  const TrigLoop loop = TrigLoop::random(n, rng, kLoopAmplitude, true, false);
  const TrigLoop lambda = TrigLoop::random(n, rng, 1.0, false, true);
  const TrigLoop mu = TrigLoop::random(n, rng, 1.0, false, true);

  ClosureStudy study;
  for (std::size_t count : sites) {
    const LatticeSystem sys = discretize(spec, count);
    const LatticeState s = on_shell_state(sys, loop.sample(count));
    ClosureRow row;
    row.sites = count;
    row.max_constraint = max_constraint(sys, s);
    row.residual = closure_residual(sys, s, {lambda.sample(count)}, {mu.sample(count)});
    row.exact = row.residual <= kExactClosureFloor;
    if (!study.rows.empty()) {
      const ClosureRow& prev = study.rows.back();
      // a ratio against round-off carries no information
      if (row.residual > 0.0 && !prev.exact) row.ratio = prev.residual / row.residual;
      row.converging = row.exact || (row.ratio && *row.ratio >= kClosureRatio);
    }
    study.rows.push_back(row);
  }
  return study;
}

FlowResult flow_study(const ManifoldSpec& spec, std::size_t sites, double dt, std::size_t steps,
                      std::uint64_t seed, double lambda_scale) {
  std::mt19937_64 rng(seed);
  const std::size_t n = spec.dim();
  const TrigLoop loop = TrigLoop::random(n, rng, kLoopAmplitude, true, false);
  const TrigLoop lambda = TrigLoop::random(n, rng, 1.0, false, true).scaled(lambda_scale);

  const LatticeSystem sys = discretize(spec, sites);
  const LatticeState s = on_shell_state(sys, loop.sample(sites));
  const auto trajectory = gauge_trajectory(sys, s, {lambda.sample(sites)}, dt, steps);

  FlowResult r;
  r.sites = sites;
  r.dt = dt;
  r.steps = steps;
  r.initial_max_constraint = max_constraint(sys, trajectory.front());
  r.final_max_constraint = max_constraint(sys, trajectory.back());
  r.drift = drift(sys, trajectory);
  const double h = sys.spacing();
  r.envelope = r.initial_max_constraint + kFlowDriftCoefficient * (static_cast<double>(steps) * dt) * h * h +
               kOnShellTolerance;
  return r;
}

}  // namespace twistkit
