#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "courant/parse.hpp"
#include "courant/phsim.hpp"

using namespace courant;

namespace {

const std::vector<std::string> kX = {"x1", "x2"};

RationalMatrix M(std::initializer_list<std::initializer_list<long>> rows, std::size_t cols) {
  RationalMatrix m(rows.size(), cols);
  std::size_t r = 0;
  for (const auto& row : rows) {
    std::size_t c = 0;
    for (long v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

PHSystem oscillator(const RationalMatrix& b = M({{1}, {0}}, 1)) {
  return PHSystem(M({{0, 1}, {-1, 0}}, 2), b, parse("1/2*x1^2 + 1/2*x2^2", kX), "oscillator");
}

InputSignal input(const std::string& expr) {
  return InputSignal(parse_map(std::vector<std::string>{expr}, std::vector<std::string>{"t"}));
}

double max_abs_diff(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b) {
  double d = 0;
  for (std::size_t k = 0; k < a.size(); ++k)
    for (std::size_t i = 0; i < a[k].size(); ++i) d = std::max(d, std::abs(a[k][i] - b[k][i]));
  return d;
}

}  // namespace

TEST(PHSystem, RejectsNonSkewJ) {
  EXPECT_THROW(PHSystem(M({{1, 0}, {0, 1}}, 2), M({{1}, {0}}, 1), parse("x1", kX)), InputError);
  EXPECT_THROW(PHSystem(M({{0, 1}, {1, 0}}, 2), M({{1}, {0}}, 1), parse("x1", kX)), InputError);
}

TEST(Simulate, OscillatorClosesAfterOnePeriod) {
  auto traj = simulate_ph(oscillator(), InputSignal::zero(1), {1, 0}, 2 * std::numbers::pi, 1e-3);
  EXPECT_NEAR(traj.x.back()[0], 1.0, 1e-6);
  EXPECT_NEAR(traj.x.back()[1], 0.0, 1e-6);
  EXPECT_DOUBLE_EQ(traj.t.back(), 2 * std::numbers::pi);
  EXPECT_EQ(traj.t.size(), traj.x.size());
  EXPECT_EQ(traj.t.size(), traj.y.size());
  for (std::size_t k = 1; k < traj.t.size(); ++k) ASSERT_GT(traj.t[k], traj.t[k - 1]);
}

TEST(Simulate, ZeroInputMatrixEqualsPoisson) {
  PHSystem sys = oscillator(M({{0}, {0}}, 1));
  auto ph = simulate_ph(sys, input("1 + t"), {1, 2}, 1.0, 1e-2);
  auto poisson = simulate_poisson(sys.J(), sys.H(), {1, 2}, 1.0, 1e-2);
  EXPECT_EQ(ph.x, poisson.trajectory.x);
  EXPECT_EQ(ph.t, poisson.trajectory.t);
}

TEST(Simulate, ZeroHamiltonianFreezesState) {
  PHSystem sys(M({{0, 1}, {-1, 0}}, 2), M({{1}, {0}}, 1), Polynomial(2));
  auto traj = simulate_ph(sys, InputSignal::zero(1), {3, -1}, 1.0, 0.1);
  for (std::size_t k = 0; k < traj.x.size(); ++k) {
    EXPECT_EQ(traj.x[k], (std::vector<double>{3, -1}));
    EXPECT_EQ(traj.y[k], (std::vector<double>{0}));
  }
}

TEST(Poisson, OscillatorEnergyDrift) {
  auto r = simulate_poisson(M({{0, 1}, {-1, 0}}, 2), parse("1/2*x1^2 + 1/2*x2^2", kX), {1, 0}, 2 * std::numbers::pi,
                            1e-3);
  EXPECT_LE(r.h_drift, 1e-10);
}

TEST(Poisson, LinearHamiltonianWithZeroJIsConstant) {
  auto r = simulate_poisson(RationalMatrix(2, 2), parse("3*x1 - x2", kX), {0.5, 2}, 1.0, 0.1);
  for (const auto& x : r.trajectory.x) EXPECT_EQ(x, (std::vector<double>{0.5, 2}));
  EXPECT_EQ(r.h_drift, 0.0);
}

TEST(Poisson, IndependentOfInputMatrixWhenUnforced) {
  auto a = simulate_ph(oscillator(M({{5}, {-2}}, 1)), InputSignal::zero(1), {1, 0}, 1.0, 1e-2);
  auto b = simulate_poisson(M({{0, 1}, {-1, 0}}, 2), parse("1/2*x1^2 + 1/2*x2^2", kX), {1, 0}, 1.0, 1e-2);
  EXPECT_EQ(a.x, b.trajectory.x);
}

TEST(Simulate, Rk4ConvergenceOrder) {
  // Closed form: x(t) = (cos t, −sin t).
  auto error = [](double h) {
    auto traj = simulate_ph(oscillator(), InputSignal::zero(1), {1, 0}, 10.0, h);
    const auto& x = traj.x.back();
    return std::hypot(x[0] - std::cos(10.0), x[1] + std::sin(10.0));
  };
  double factor = error(0.1) / error(0.05);
  EXPECT_GE(factor, 12.0);
  EXPECT_LE(factor, 20.0);
}

TEST(Interaction, ConstantInputConservesInteractionHamiltonian) {
  PHSystem sys = oscillator();
  InputSignal u = input("1");
  auto traj = simulate_interaction(sys, u, {1, 0}, {0}, 1.0, 1e-3);
  EXPECT_LE(interaction_drift(sys, u, traj), 1e-8);
}

TEST(Interaction, ZeroInputMatrixKeepsZConstant) {
  PHSystem sys = oscillator(M({{0}, {0}}, 1));
  auto traj = simulate_interaction(sys, input("t"), {1, 0}, {0.25}, 1.0, 1e-2);
  for (const auto& z : traj.z) EXPECT_EQ(z, (std::vector<double>{0.25}));
}

TEST(Interaction, StateMarginalIsBitwiseEqual) {
  PHSystem sys = oscillator();
  for (const char* u : {"0", "1", "t"}) {
    auto ph = simulate_ph(sys, input(u), {1, 0}, 1.0, 1e-3);
    auto inter = simulate_interaction(sys, input(u), {1, 0}, {0}, 1.0, 1e-3);
    ASSERT_EQ(ph.x.size(), inter.x.size());
    for (std::size_t k = 0; k < ph.x.size(); ++k) ASSERT_EQ(ph.x[k], inter.x[k]) << "u=" << u << " step " << k;
  }
}

TEST(Projection, RecoversOutput) {
  PHSystem sys = oscillator();
  for (const char* u : {"0", "1", "t"}) {
    auto ph = simulate_ph(sys, input(u), {1, 0}, 1.0, 1e-3);
    auto proj = project_behavior(simulate_interaction(sys, input(u), {1, 0}, {0}, 1.0, 1e-3));
    EXPECT_EQ(proj.x, ph.x);
    EXPECT_LE(max_abs_diff(proj.y, ph.y), 1e-12) << "u=" << u;
    // Second component equals Bᵀ∇H(x) evaluated independently: y = x1.
    for (std::size_t k = 0; k < proj.y.size(); ++k) ASSERT_EQ(proj.y[k][0], proj.x[k][0]);
  }
}

TEST(EnergyBalance, Examples) {
  PHSystem sys = oscillator();
  auto closed = simulate_ph(sys, InputSignal::zero(1), {1, 0}, 1.0, 1e-3);
  EXPECT_LE(energy_balance(sys, closed, InputSignal::zero(1)).residual, 1e-10);

  InputSignal one = input("1");
  auto driven = simulate_ph(sys, one, {1, 0}, 1.0, 1e-3);
  auto bal = energy_balance(sys, driven, one);
  EXPECT_LE(bal.residual, 1e-8);
  EXPECT_GT(std::abs(bal.supplied), 0.1);

  PHSystem flat(M({{0, 1}, {-1, 0}}, 2), M({{1}, {0}}, 1), Polynomial(2));
  auto still = simulate_ph(flat, one, {1, 0}, 1.0, 1e-2);
  EXPECT_EQ(energy_balance(flat, still, one).residual, 0.0);
}

TEST(EnergyBalance, OddIntervalCountUsesTrapezoidTail) {
  PHSystem sys = oscillator();
  InputSignal one = input("1");
  auto traj = simulate_ph(sys, one, {1, 0}, 1.0, 1.0 / 999);
  ASSERT_EQ(traj.t.size(), 1000u);
  EXPECT_LE(energy_balance(sys, traj, one).residual, 1e-6);
}

TEST(Dirac, InterconnectionGraphs) {
  EXPECT_TRUE(dirac_structure_of(oscillator()).is_dirac);
  auto v = dirac_structure_of(oscillator(M({{0}, {0}}, 1)));
  EXPECT_TRUE(v.is_dirac);
  EXPECT_EQ(v.subspace.dim(), 3u);
  EXPECT_FALSE(is_dirac_graph(M({{1, 0}, {0, 1}}, 2)));
  EXPECT_FALSE(is_dirac_graph(M({{0, 1}, {1, 0}}, 2)));
}

TEST(Csv, HeaderAndPrecision) {
  auto traj = simulate_ph(oscillator(), input("1"), {1, 0}, 0.2, 0.1);
  std::ostringstream os;
  write_csv(os, traj);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,x1,x2,y1");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    double t, x1, x2, y1;
    ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &t, &x1, &x2, &y1), 4);
    EXPECT_EQ(x1, traj.x[rows - 1][0]);
  }
  EXPECT_EQ(rows, 3);
}

TEST(Simulate, InvalidArguments) {
  EXPECT_THROW(simulate_ph(oscillator(), InputSignal::zero(1), {1}, 1.0, 0.1), InputError);
  EXPECT_THROW(simulate_ph(oscillator(), InputSignal::zero(2), {1, 0}, 1.0, 0.1), InputError);
  EXPECT_THROW(simulate_ph(oscillator(), InputSignal::zero(1), {1, 0}, 1.0, 0.0), InputError);
}

TEST(Simulate, OverflowIsReported) {
  PHSystem blowup(M({{0, 1}, {-1, 0}}, 2), M({{1}, {0}}, 1), parse("x1^4 + x2^4", kX));
  EXPECT_THROW(simulate_ph(blowup, InputSignal::zero(1), {1e80, 1e80}, 1.0, 0.5), SimulationError);
}
