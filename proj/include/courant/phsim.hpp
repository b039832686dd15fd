#pragma once

// Port-Hamiltonian systems ẋ = J∇H(x) + Bu(t), y = Bᵀ∇H(x), their closed
// Poisson form, and the interaction system on (x, z) with H_u = H + u(t)ᵀz.
// Fixed-step classic RK4 in double precision; ∇H is evaluated exactly and
// rounded once.

#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "courant/courant.hpp"

namespace courant {

class SimulationError : public Error {
 public:
  using Error::Error;
};

class PHSystem {
 public:
  PHSystem(RationalMatrix j, RationalMatrix b, Polynomial h, std::string label = {})
      : j_(std::move(j)), b_(std::move(b)), h_(std::move(h)), label_(std::move(label)) {
    const std::size_t n = j_.rows();
    if (j_.cols() != n) throw InputError("J must be square");
    if (b_.rows() != n) throw InputError("B must have " + std::to_string(n) + " rows");
    if (h_.num_vars() != n) throw InputError("H must be a polynomial in " + std::to_string(n) + " variables");
    if (!(j_ + j_.transpose()).is_zero()) throw InputError("J is not skew-symmetric");
    for (std::size_t i = 0; i < n; ++i) grad_.push_back(h_.diff(i));
    jd_ = to_double(j_);
    bd_ = to_double(b_);
  }

  std::size_t n() const noexcept { return j_.rows(); }
  std::size_t m() const noexcept { return b_.cols(); }
  const RationalMatrix& J() const noexcept { return j_; }
  const RationalMatrix& B() const noexcept { return b_; }
  const Polynomial& H() const noexcept { return h_; }
  const std::string& label() const noexcept { return label_; }

  std::vector<double> grad_h(const std::vector<double>& x) const {
    for (double v : x)
      if (!std::isfinite(v)) throw SimulationError("state overflow: non-finite value in the state");
    std::vector<double> g(n());
    for (std::size_t i = 0; i < n(); ++i) g[i] = grad_[i].eval_exact(x);
    return g;
  }

  /// J g + B u, summed in index order.
  std::vector<double> flow(const std::vector<double>& g, const std::vector<double>& u) const {
    std::vector<double> out(n(), 0.0);
    for (std::size_t i = 0; i < n(); ++i) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n(); ++k) acc += jd_[i * n() + k] * g[k];
      for (std::size_t a = 0; a < m(); ++a) acc += bd_[i * m() + a] * u[a];
      out[i] = acc;
    }
    return out;
  }

  /// Bᵀ g.
  std::vector<double> output(const std::vector<double>& g) const {
    std::vector<double> y(m(), 0.0);
    for (std::size_t a = 0; a < m(); ++a) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n(); ++k) acc += bd_[k * m() + a] * g[k];
      y[a] = acc;
    }
    return y;
  }

 private:
  static std::vector<double> to_double(const RationalMatrix& m) {
    std::vector<double> out;
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) out.push_back(m(r, c).get_d());
    return out;
  }

  RationalMatrix j_, b_;
  Polynomial h_;
  std::string label_;
  std::vector<Polynomial> grad_;
  std::vector<double> jd_, bd_;
};

/// u(t), a polynomial map from the single variable t.
class InputSignal {
 public:
  explicit InputSignal(PolyMap u) : u_(std::move(u)) {
    if (u_.num_inputs() != 1) throw InputError("input signal must depend on t only");
  }
  static InputSignal zero(std::size_t m) { return InputSignal(PolyMap(1, m)); }

  std::size_t size() const noexcept { return u_.size(); }
  const PolyMap& map() const noexcept { return u_; }
  std::vector<double> operator()(double t) const {
    std::vector<double> out(u_.size());
    const double pt[1] = {t};
    for (std::size_t a = 0; a < u_.size(); ++a) out[a] = u_[a].eval_exact(pt);
    return out;
  }

 private:
  PolyMap u_;
};

struct Trajectory {
  double h = 0.0;
  std::vector<double> t;
  std::vector<std::vector<double>> x;
  std::vector<std::vector<double>> y;
};

struct InteractionTrajectory {
  double h = 0.0;
  std::vector<double> t;
  std::vector<std::vector<double>> x;
  std::vector<std::vector<double>> z;
  std::vector<std::vector<double>> zdot;  // right-hand side at the grid points
};

namespace detail {

/// Number of uniform steps covering [0, T] with step close to h.
inline std::size_t step_count(double horizon, double h) {
  if (!(h > 0) || !(horizon > 0)) throw InputError("T and h must be positive");
  double steps = std::round(horizon / h);
  return steps < 1 ? 1 : static_cast<std::size_t>(steps);
}

using Rhs = std::function<std::vector<double>(double, const std::vector<double>&)>;

inline std::vector<double> axpy(const std::vector<double>& x, double a, const std::vector<double>& k) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * k[i];
  return out;
}

/// Classic RK4; componentwise arithmetic, so a block that does not depend on
/// the rest of the state evolves identically inside a larger system.
inline std::vector<double> rk4_step(const Rhs& f, double t, const std::vector<double>& x, double h) {
  auto k1 = f(t, x);
  auto k2 = f(t + h / 2, axpy(x, h / 2, k1));
  auto k3 = f(t + h / 2, axpy(x, h / 2, k2));
  auto k4 = f(t + h, axpy(x, h, k3));
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  return out;
}

inline void check_finite(const std::vector<double>& x, double t) {
  for (double v : x)
    if (!std::isfinite(v)) throw SimulationError("state overflow at t = " + std::to_string(t));
}

}  // namespace detail

inline Trajectory simulate_ph(const PHSystem& sys, const InputSignal& u, const std::vector<double>& x0,
                              double horizon, double h) {
  if (x0.size() != sys.n()) throw InputError("x0 must have " + std::to_string(sys.n()) + " entries");
  if (u.size() != sys.m()) throw InputError("input must have " + std::to_string(sys.m()) + " components");
  const std::size_t steps = detail::step_count(horizon, h);
  const double step = horizon / static_cast<double>(steps);
  detail::Rhs f = [&](double t, const std::vector<double>& x) { return sys.flow(sys.grad_h(x), u(t)); };

  Trajectory traj;
  traj.h = step;
  std::vector<double> x = x0;
  for (std::size_t k = 0;; ++k) {
    double t = static_cast<double>(k) * step;
    traj.t.push_back(t);
    traj.x.push_back(x);
    traj.y.push_back(sys.output(sys.grad_h(x)));
    if (k == steps) break;
    x = detail::rk4_step(f, t, x, step);
    detail::check_finite(x, t + step);
  }
  return traj;
}

struct PoissonResult {
  Trajectory trajectory;
  double h_drift = 0.0;  // max |H(x(t)) − H(x0)| over the grid
};

inline PoissonResult simulate_poisson(const RationalMatrix& j, const Polynomial& hamiltonian,
                                      const std::vector<double>& x0, double horizon, double h) {
  PHSystem sys(j, RationalMatrix(j.rows(), 0), hamiltonian, "poisson");
  PoissonResult out{simulate_ph(sys, InputSignal::zero(0), x0, horizon, h), 0.0};
  const double h0 = hamiltonian.eval_exact(x0);
  for (const auto& x : out.trajectory.x) out.h_drift = std::max(out.h_drift, std::abs(hamiltonian.eval_exact(x) - h0));
  return out;
}

/// ẋ = J∇H(x) + Bu(t), ż = −Bᵀ∇H(x).
inline InteractionTrajectory simulate_interaction(const PHSystem& sys, const InputSignal& u,
                                                  const std::vector<double>& x0, const std::vector<double>& z0,
                                                  double horizon, double h) {
  const std::size_t n = sys.n(), m = sys.m();
  if (x0.size() != n) throw InputError("x0 must have " + std::to_string(n) + " entries");
  if (z0.size() != m) throw InputError("z0 must have " + std::to_string(m) + " entries");
  if (u.size() != m) throw InputError("input must have " + std::to_string(m) + " components");
  const std::size_t steps = detail::step_count(horizon, h);
  const double step = horizon / static_cast<double>(steps);

  auto zdot = [&](const std::vector<double>& g) {
    auto y = sys.output(g);
    for (auto& v : y) v = -v;
    return y;
  };
  detail::Rhs f = [&](double t, const std::vector<double>& s) {
    std::vector<double> x(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(n));
    auto g = sys.grad_h(x);
    auto out = sys.flow(g, u(t));
    auto dz = zdot(g);
    out.insert(out.end(), dz.begin(), dz.end());
    return out;
  };

  InteractionTrajectory traj;
  traj.h = step;
  std::vector<double> s = x0;
  s.insert(s.end(), z0.begin(), z0.end());
  for (std::size_t k = 0;; ++k) {
    double t = static_cast<double>(k) * step;
    std::vector<double> x(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(n));
    traj.t.push_back(t);
    traj.zdot.push_back(zdot(sys.grad_h(x)));
    traj.x.push_back(std::move(x));
    traj.z.emplace_back(s.begin() + static_cast<std::ptrdiff_t>(n), s.end());
    if (k == steps) break;
    s = detail::rk4_step(f, t, s, step);
    detail::check_finite(s, t + step);
  }
  return traj;
}

/// (x, z) ↦ (x, −ż).
inline Trajectory project_behavior(const InteractionTrajectory& traj) {
  Trajectory out;
  out.h = traj.h;
  out.t = traj.t;
  out.x = traj.x;
  for (const auto& dz : traj.zdot) {
    std::vector<double> y(dz.size());
    for (std::size_t a = 0; a < dz.size(); ++a) y[a] = -dz[a];
    out.y.push_back(std::move(y));
  }
  return out;
}

/// max over the grid of H_u(t, x, z) − H_u(0, x0, z0).
inline double interaction_drift(const PHSystem& sys, const InputSignal& u, const InteractionTrajectory& traj) {
  auto hu = [&](std::size_t k) {
    double v = sys.H().eval_exact(traj.x[k]);
    auto uk = u(traj.t[k]);
    for (std::size_t a = 0; a < uk.size(); ++a) v += uk[a] * traj.z[k][a];
    return v;
  };
  const double h0 = hu(0);
  double drift = 0.0;
  for (std::size_t k = 0; k < traj.t.size(); ++k) drift = std::max(drift, std::abs(hu(k) - h0));
  return drift;
}

struct EnergyBalance {
  double delta_h = 0.0;   // H(x(T)) − H(x(0))
  double supplied = 0.0;  // ∫ yᵀu dt
  double residual = 0.0;  // |delta_h − supplied|
};

/// Simpson quadrature of yᵀu; with an odd number of intervals the last one
/// uses the trapezoid rule.
inline EnergyBalance energy_balance(const PHSystem& sys, const Trajectory& traj, const InputSignal& u) {
  const std::size_t pts = traj.t.size();
  std::vector<double> power(pts);
  for (std::size_t k = 0; k < pts; ++k) {
    auto uk = u(traj.t[k]);
    double p = 0.0;
    for (std::size_t a = 0; a < uk.size(); ++a) p += traj.y[k][a] * uk[a];
    power[k] = p;
  }
  const std::size_t intervals = pts - 1;
  const std::size_t simpson = intervals - intervals % 2;
  double integral = 0.0;
  for (std::size_t k = 0; k + 2 <= simpson; k += 2)
    integral += traj.h / 3 * (power[k] + 4 * power[k + 1] + power[k + 2]);
  if (simpson < intervals) integral += traj.h / 2 * (power[intervals - 1] + power[intervals]);

  EnergyBalance out;
  out.delta_h = sys.H().eval_exact(traj.x.back()) - sys.H().eval_exact(traj.x.front());
  out.supplied = integral;
  out.residual = std::abs(out.delta_h - out.supplied);
  return out;
}

/// Graph {(K e, e)} ⊆ ℝᴺ ⊕ (ℝᴺ)* of a square matrix K.
inline LinearSubspace matrix_graph(const RationalMatrix& k) {
  const std::size_t n = k.rows();
  if (k.cols() != n) throw InputError("graph of a non-square matrix");
  std::vector<std::vector<Rational>> basis;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Rational> v(2 * n);
    for (std::size_t i = 0; i < n; ++i) v[i] = k(i, j);
    v[n + j] = 1;
    basis.push_back(std::move(v));
  }
  return LinearSubspace(2 * n, std::move(basis));
}

/// Whether the graph of K is a linear Dirac structure of ℝᴺ ⊕ (ℝᴺ)*.
inline bool is_dirac_graph(const RationalMatrix& k) {
  const std::size_t n = k.rows();
  std::vector<Rational> origin(n);
  return dirac_check(standard_structure(n), origin, matrix_graph(k));
}

/// [[J, B], [−Bᵀ, 0]].
inline RationalMatrix interconnection_matrix(const PHSystem& sys) {
  const std::size_t n = sys.n(), m = sys.m();
  RationalMatrix k(n + m, n + m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) k(i, j) = sys.J()(i, j);
    for (std::size_t a = 0; a < m; ++a) {
      k(i, n + a) = sys.B()(i, a);
      k(n + a, i) = -sys.B()(i, a);
    }
  }
  return k;
}

struct DiracVerdict {
  LinearSubspace subspace;
  bool is_dirac;
};

inline DiracVerdict dirac_structure_of(const PHSystem& sys) {
  RationalMatrix k = interconnection_matrix(sys);
  return {matrix_graph(k), is_dirac_graph(k)};
}

/// Header t,x1..xn,y1..ym; 17 significant digits.
inline void write_csv(std::ostream& os, const Trajectory& traj) {
  const std::size_t n = traj.x.empty() ? 0 : traj.x[0].size();
  const std::size_t m = traj.y.empty() ? 0 : traj.y[0].size();
  os << "t";
  for (std::size_t i = 0; i < n; ++i) os << ",x" << i + 1;
  for (std::size_t a = 0; a < m; ++a) os << ",y" << a + 1;
  os << '\n';
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
  };
  for (std::size_t k = 0; k < traj.t.size(); ++k) {
    put(traj.t[k]);
    for (double v : traj.x[k]) os << ',', put(v);
    for (double v : traj.y[k]) os << ',', put(v);
    os << '\n';
  }
}

}  // namespace courant
