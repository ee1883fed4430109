#include <gtest/gtest.h>

#include "cvqite/gaussian.hpp"
#include "cvqite/lattice.hpp"
#include "support.hpp"

using namespace cvqite;
using cvqite::ref::max_abs;

namespace {

LatticeConfig config(int L, double m0_sq, double lambda, double delta_m = 0.0) {
  LatticeConfig c;
  c.L = L;
  c.m0_sq = m0_sq;
  c.lambda = lambda;
  c.delta_m = delta_m;
  return c;
}

MatrixX<cplx> restrict(const MatrixX<cplx>& m, const std::vector<Eigen::Index>& idx) {
  MatrixX<cplx> out(idx.size(), idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b) out(a, b) = m(idx[a], idx[b]);
  return out;
}

}  // namespace

TEST(Dispersion, Values) {
  EXPECT_DOUBLE_EQ(dispersion(config(1, 2.0, 0.0))(0), std::sqrt(2.0));
  const auto w = dispersion(config(2, 0.1, 1.0));
  EXPECT_DOUBLE_EQ(w(0), std::sqrt(0.1));
  EXPECT_NEAR(w(1), std::sqrt(4.1), 1e-15);
  EXPECT_NEAR(w(1), 2.02485, 1e-5);
  const auto w5 = dispersion(config(5, 0.3, 0.0));
  for (int k = 0; k < 5; ++k) EXPECT_GE(w5(k), std::sqrt(0.3));
  EXPECT_NEAR(w5(1), w5(4), 1e-14);
}

TEST(Config, Validation) {
  EXPECT_THROW(config(2, -0.1, 1.0).validate(), std::invalid_argument);
  EXPECT_NO_THROW(config(2, -0.1, 1.0, 0.2).validate());
  EXPECT_THROW(config(0, 1.0, 1.0).validate(), std::invalid_argument);
  EXPECT_THROW(config(1, 1.0, -1.0).validate(), std::invalid_argument);
  EXPECT_EQ(config(1, 1.0, 4.8).g(), 4.8 / 24.0);
}

TEST(H0, VacuumAndSingleParticleEnergies) {
  const auto c = config(2, 0.1, 0.0);
  const TruncationSpec spec{8, 2};
  const auto h0 = build_h0(c, spec);
  const auto w = dispersion(c);
  EXPECT_NEAR(std::real(expectation(h0, vacuum_state(spec))), 0.0, tolerance::construction);
  for (int k = 0; k < 2; ++k) {
    EXPECT_NEAR(std::real(expectation(h0, single_particle_state(k, spec))), w(k), tolerance::construction);
  }
  const auto with_zero = build_h0(c, spec, ZeroPoint::included);
  EXPECT_NEAR(std::real(expectation(with_zero, vacuum_state(spec))), 0.5 * w.sum(), tolerance::construction);
}

TEST(H0, PositionSpaceAssemblyAgrees) {
  const auto c = config(2, 0.3, 0.0);
  const TruncationSpec spec{8, 2};
  const auto idx = low_photon_indices(spec, 4);
  EXPECT_LT(max_abs(restrict(build_h0(c, spec).matrix - build_h0_position(c, spec).matrix, idx)),
            tolerance::algebraic);
  const auto c3 = config(3, 0.5, 0.0);
  const TruncationSpec spec3{5, 3};
  const auto idx3 = low_photon_indices(spec3, 2);
  EXPECT_LT(max_abs(restrict(build_h0(c3, spec3).matrix - build_h0_position(c3, spec3).matrix, idx3)),
            tolerance::algebraic);
}

TEST(Fields, SingleSiteIsScaledQuadrature) {
  const auto c = config(1, 2.0, 0.0);
  const TruncationSpec spec{8, 1};
  const auto f = field_operators(c, spec);
  const auto [q, p] = quadratures(spec);
  const double m = std::sqrt(2.0);
  EXPECT_LT(max_abs(f.phi[0].matrix - q.matrix / std::sqrt(m)), tolerance::construction);
  EXPECT_LT(max_abs(f.pi[0].matrix - p.matrix * std::sqrt(m)), tolerance::construction);
}

TEST(Fields, EqualTimeCommutators) {
  const auto c = config(2, 0.1, 1.0);
  const TruncationSpec spec{8, 2};
  const auto f = field_operators(c, spec);
  const auto idx = low_photon_indices(spec, 4);
  const auto id = MatrixX<cplx>::Identity(idx.size(), idx.size());
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      const MatrixX<cplx> comm = f.phi[x].matrix * f.pi[y].matrix - f.pi[y].matrix * f.phi[x].matrix;
      const MatrixX<cplx> want = x == y ? MatrixX<cplx>(cplx(0, 1) * id) : MatrixX<cplx>::Zero(idx.size(), idx.size());
      EXPECT_LT(max_abs(restrict(comm, idx) - want), tolerance::algebraic) << x << ' ' << y;
    }
    EXPECT_LT(hermiticity_defect(f.phi[x].matrix), tolerance::algebraic);
  }
}

TEST(Interaction, FreeTheoryIsZero) {
  const TruncationSpec spec{6, 2};
  EXPECT_EQ(max_abs(build_h_interaction(config(2, 0.1, 0.0), spec).matrix), 0.0);
  const auto c = config(2, 0.1, 0.0);
  EXPECT_LT(max_abs(build_full_h(c, spec).matrix - build_h0(c, spec).matrix), tolerance::construction);
}

TEST(Interaction, VacuumQuarticMoment) {
  const auto c = config(1, 1.0, 4.8);
  const TruncationSpec spec{10, 1};
  const auto hi = build_h_interaction(c, spec);
  EXPECT_LT(hermiticity_defect(hi.matrix), tolerance::algebraic);
  EXPECT_NEAR(std::real(expectation(hi, vacuum_state(spec))), 0.2 * 0.75, tolerance::construction);
}

TEST(Hamiltonian, TransitionAmplitudesVanish) {
  for (const auto& c : {config(2, 0.1, 1.0), config(2, -0.1, 1.0, 0.2), config(3, 0.4, 2.0)}) {
    const TruncationSpec spec{c.L == 3 ? 5 : 10, c.L};
    const auto h = build_full_h(c, spec);
    const auto vac = vacuum_state(spec);
    for (int k = 0; k < c.L; ++k) {
      const auto sk = single_particle_state(k, spec);
      EXPECT_LT(std::abs(inner(vac, cvqite::apply(h, sk))), tolerance::algebraic);
      EXPECT_LT(std::abs(inner(vac, sk)), tolerance::construction);
      for (int j = k + 1; j < c.L; ++j) {
        const auto sj = single_particle_state(j, spec);
        EXPECT_LT(std::abs(inner(sj, cvqite::apply(h, sk))), tolerance::algebraic);
        EXPECT_LT(std::abs(inner(sj, sk)), tolerance::construction);
      }
    }
  }
}

TEST(Hamiltonian, CommutesWithTotalParity) {
  const TruncationSpec spec{8, 2};
  const auto h = build_full_h(config(2, -0.1, 1.0, 0.2), spec).matrix;
  const auto par = total_parity(spec).matrix;
  EXPECT_LT(max_abs(h * par - par * h), tolerance::algebraic);
  EXPECT_LT(hermiticity_defect(h), tolerance::algebraic);
}

TEST(Hamiltonian, FreeSpectrumMatchesOccupationSums) {
  const auto c = config(2, 0.1, 0.0);
  const TruncationSpec spec{10, 2};
  const auto w = dispersion(c);
  const auto ev = ref::hermitian_eigenvalues(build_full_h(c, spec).matrix);
  std::vector<double> want;
  for (int n0 = 0; n0 < 10; ++n0)
    for (int n1 = 0; n1 < 10; ++n1) want.push_back(n0 * w(0) + n1 * w(1));
  std::sort(want.begin(), want.end());
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(ev[i], want[i], 1e-8) << i;
}

TEST(Polynomial, OperatorMatchesMatrixBelowBoundary) {
  for (const auto& c : {config(1, 1.0, 4.8), config(2, 0.1, 1.0), config(2, -0.1, 1.0, 0.2)}) {
    const TruncationSpec spec{10, c.L};
    const auto poly = hamiltonian_polynomial(c);
    EXPECT_TRUE(poly.ordered);
    EXPECT_EQ(poly.n_modes, c.L);
    const auto idx = low_photon_indices(spec, 5);
    EXPECT_LT(max_abs(restrict(to_operator(poly, spec).matrix - build_full_h(c, spec).matrix, idx)),
              tolerance::algebraic);
  }
}

TEST(Polynomial, ZeroPointConstant) {
  const auto c = config(2, 0.1, 0.0);
  const TruncationSpec spec{8, 2};
  const auto sub = to_operator(hamiltonian_polynomial(c), spec);
  const auto inc = to_operator(hamiltonian_polynomial(c, ZeroPoint::included), spec);
  EXPECT_NEAR(std::real(expectation(inc, vacuum_state(spec)) - expectation(sub, vacuum_state(spec))),
              0.5 * dispersion(c).sum(), tolerance::construction);
}

TEST(States, SingleParticleIsOnePhoton) {
  const TruncationSpec spec{5, 2};
  const auto s = single_particle_state(1, spec);
  EXPECT_NEAR(std::abs(s.amplitudes(1)), 1.0, tolerance::construction);
  EXPECT_THROW(single_particle_state(2, spec), std::out_of_range);
}
