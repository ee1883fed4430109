#include <gtest/gtest.h>

#include "cvqite/lattice.hpp"
#include "cvqite/oracle.hpp"
#include "cvqite/probes.hpp"
#include "support.hpp"

using namespace cvqite;

namespace {

double direct(const MatrixX<cplx>& op, const TruncatedState& s) { return std::real(s.amplitudes.dot(op * s.amplitudes)); }

MatrixX<cplx> power(const MatrixX<cplx>& m, int n) {
  MatrixX<cplx> out = MatrixX<cplx>::Identity(m.rows(), m.cols());
  for (int i = 0; i < n; ++i) out = out * m;
  return out;
}

}  // namespace

TEST(MixedDerivative, PolynomialIsExact) {
  // f(u, v) = 3 u v + u^2 v^3 - 5 v; d/du d^3/dv^3 at 0 = 0, d/du d/dv = 3
  const double h = 0.1;
  auto f = [&](std::span<const int> g) {
    const double u = g[0] * h, v = g[1] * h;
    return 3 * u * v + u * u * v * v * v - 5 * v;
  };
  const int uv[] = {1, 1};
  EXPECT_NEAR(mixed_derivative(f, uv, h, 4), 3.0, 1e-9);
  const int uvvv[] = {2, 3};
  EXPECT_NEAR(mixed_derivative(f, uvvv, h, 4), 12.0, 1e-6);
}

TEST(Moments, VacuumAtBothSpacings) {
  const TruncationSpec spec{20, 1};
  const auto vac = vacuum_state(spec);
  const auto coarse = moment_from_projection(vac, 0, 3, 0.1);
  const auto fine = moment_from_projection(vac, 0, 3, 0.01);
  for (int n = 1; n <= 3; ++n) {
    EXPECT_NEAR(coarse[n - 1], ref::gaussian_moment(n), 1e-3) << n;
    EXPECT_NEAR(fine[n - 1], ref::gaussian_moment(n), 1e-5) << n;
  }
  EXPECT_THROW(moment_from_projection(vac, 0, 4, 0.1), std::invalid_argument);
  EXPECT_THROW(moment_from_projection(vac, 0, 2, 0.1, 1), std::invalid_argument);
}

TEST(Moments, SqueezedGaussians) {
  const TruncationSpec spec{30, 1};
  for (const double s : {0.6, 1.4, 2.0}) {
    const double sig[] = {s};
    const auto state = gaussian_family_state(spec, sig, std::nullopt);
    const auto m = moment_from_projection(state, 0, 3, 0.01);
    for (int n = 1; n <= 3; ++n) EXPECT_NEAR(m[n - 1], ref::gaussian_moment(n, s), 1e-4) << s << ' ' << n;
  }
}

TEST(Moments, MomentumProbeOnSqueezedState) {
  const TruncationSpec spec{30, 1};
  const double sig[] = {1.6};
  const auto state = gaussian_family_state(spec, sig, std::nullopt);
  const ProbeKit kit(30, 0.01);
  const ProbeFactor p2{0, Quadrature::p, 1};
  const auto p = quadratures(spec).p.matrix;
  EXPECT_NEAR(kit.moment(state, std::span(&p2, 1)), 1.6 / 2, 1e-5);
  EXPECT_NEAR(direct(p * p, state), 1.6 / 2, 1e-10);
}

TEST(Moments, TwoModeProduct) {
  const TruncationSpec spec{12, 2};
  const ProbeKit kit(12, 0.1);
  const ProbeFactor f[] = {{0, Quadrature::q, 1}, {1, Quadrature::q, 1}};
  EXPECT_NEAR(kit.moment(vacuum_state(spec), f), 0.25, 1e-3);
  const auto s = ref::random_state(spec, 4, 3);
  const auto q = quadratures(spec).q;
  const MatrixX<cplx> q0 = embed(q, 0, spec).matrix, q1 = embed(q, 1, spec).matrix;
  EXPECT_NEAR(kit.moment(s, f), direct(q0 * q0 * q1 * q1, s), 1e-2);
  const ProbeKit fine(12, 0.01);
  EXPECT_NEAR(fine.moment(s, f), direct(q0 * q0 * q1 * q1, s), 1e-4);
}

TEST(Moments, SameModeQAndP) {
  const TruncationSpec spec{24, 1};
  const auto s = ref::random_state(spec, 8, 3);
  const auto [q, p] = quadratures(spec);
  const ProbeKit kit(24, 0.01);
  const ProbeFactor f[] = {{0, Quadrature::q, 1}, {0, Quadrature::p, 1}};
  EXPECT_NEAR(kit.moment(s, f), direct(q.matrix * q.matrix * p.matrix * p.matrix, s), 1e-3);
  const ProbeFactor g[] = {{0, Quadrature::q, 1}, {0, Quadrature::p, 2}};
  EXPECT_NEAR(kit.moment(s, g), direct(q.matrix * q.matrix * power(p.matrix, 4), s), 1e-2);
}

TEST(Moments, SupportRules) {
  const ProbeFactor ok[] = {{0, Quadrature::q, 1}, {0, Quadrature::p, 3}, {1, Quadrature::q, 2}};
  EXPECT_TRUE(ProbeKit::supports(ok));
  const ProbeFactor dup[] = {{0, Quadrature::q, 1}, {0, Quadrature::q, 1}};
  EXPECT_FALSE(ProbeKit::supports(dup));
  const ProbeFactor high[] = {{0, Quadrature::q, 4}};
  EXPECT_FALSE(ProbeKit::supports(high));
  const ProbeFactor q4p2[] = {{0, Quadrature::q, 2}, {0, Quadrature::p, 1}};
  EXPECT_FALSE(ProbeKit::supports(q4p2));
  const ProbeKit kit(8, 0.1);
  EXPECT_THROW(kit.moment(vacuum_state(TruncationSpec{8, 1}), q4p2), std::domain_error);
}

TEST(Moments, ThirdDerivativeOnVacuum) {
  const TruncationSpec spec{24, 1};
  const ProbeKit kit(24, 0.01);
  EXPECT_NEAR(third_derivative(vacuum_state(spec), 0, kit), -15.0 / 64.0, 1e-6);
}
