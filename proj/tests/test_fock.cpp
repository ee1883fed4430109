#include <gtest/gtest.h>

#include <unsupported/Eigen/KroneckerProduct>

#include "cvqite/dump.hpp"
#include "cvqite/fock.hpp"
#include "cvqite/lattice.hpp"
#include "support.hpp"

using namespace cvqite;
using cvqite::ref::max_abs;

namespace {

const TruncationSpec one{10, 1};
const TruncationSpec two{6, 2};

MatrixX<cplx> top_left(const MatrixX<cplx>& m, int n) { return m.topLeftCorner(n, n); }

}  // namespace

TEST(Ladder, Elements) {
  const auto a = annihilation(one).matrix;
  EXPECT_NEAR(std::abs(a(0, 1) - 1.0), 0.0, tolerance::construction);
  EXPECT_NEAR(std::abs(a(1, 2) - std::sqrt(2.0)), 0.0, tolerance::construction);
  EXPECT_EQ(a(1, 0), cplx(0.0));
  VectorX<cplx> vac = VectorX<cplx>::Zero(10);
  vac(0) = 1.0;
  EXPECT_EQ((a * vac).norm(), 0.0);
  const VectorX<cplx> one_photon = creation(one).matrix * vac;
  EXPECT_NEAR(std::abs(one_photon(1) - 1.0), 0.0, tolerance::construction);
  EXPECT_NEAR(one_photon.norm(), 1.0, tolerance::construction);
}

TEST(Ladder, NumberOperatorIsAdagA) {
  const auto a = annihilation(one).matrix;
  EXPECT_LT(max_abs(a.adjoint() * a - number_operator(one).matrix), tolerance::construction);
}

TEST(Quadratures, Hermitian) {
  const auto [q, p] = quadratures(one);
  EXPECT_LT(hermiticity_defect(q.matrix), tolerance::algebraic);
  EXPECT_LT(hermiticity_defect(p.matrix), tolerance::algebraic);
}

TEST(Quadratures, VacuumMoments) {
  const auto q = quadratures(one).q.matrix;
  const auto vac = vacuum_state(one);
  MatrixX<cplx> power = MatrixX<cplx>::Identity(10, 10);
  for (int n = 1; n <= 3; ++n) {
    power = power * q * q;
    EXPECT_NEAR(std::real(vac.amplitudes.dot(power * vac.amplitudes)), ref::gaussian_moment(n),
                tolerance::construction)
        << "n = " << n;
  }
}

TEST(Quadratures, CanonicalCommutatorAwayFromBoundary) {
  const auto [q, p] = quadratures(one);
  const MatrixX<cplx> c = q.matrix * p.matrix - p.matrix * q.matrix;
  const int safe = one.n_cutoff - 2;
  EXPECT_LT(max_abs(top_left(c, safe) - cplx(0, 1) * MatrixX<cplx>::Identity(safe, safe)), tolerance::algebraic);
  // the truncation shows up in the last level
  EXPECT_GT(std::abs(c(9, 9) - cplx(0, 1)), 1.0);
}

TEST(Layout, StridesAndDimension) {
  const TruncationSpec s{4, 3};
  EXPECT_EQ(s.dimension(), 64);
  EXPECT_EQ(s.stride(0), 16);
  EXPECT_EQ(s.stride(2), 1);
  EXPECT_THROW(s.stride(3), std::out_of_range);
  EXPECT_THROW((TruncationSpec{1, 1}.validate()), std::invalid_argument);
}

TEST(Embed, IdentityAndOrdering) {
  for (int k = 0; k < 2; ++k) {
    EXPECT_LT(max_abs(embed(identity_operator(two.single_mode()), k, two).matrix -
                      MatrixX<cplx>::Identity(36, 36)),
              tolerance::construction);
  }
  // mode 0 is the slow factor: a on mode 0 maps |1,0> (index 6) to |0,0>
  const auto a0 = embed(annihilation(two), 0, two).matrix;
  EXPECT_NEAR(std::abs(a0(0, 6) - 1.0), 0.0, tolerance::construction);
  const auto a1 = embed(annihilation(two), 1, two).matrix;
  EXPECT_NEAR(std::abs(a1(0, 1) - 1.0), 0.0, tolerance::construction);
}

TEST(Embed, DistinctModesCommute) {
  const auto q = quadratures(two).q;
  const auto q0 = embed(q, 0, two).matrix, q1 = embed(q, 1, two).matrix;
  EXPECT_LT(max_abs(q0 * q1 - q1 * q0), tolerance::construction);
}

TEST(Embed, Homomorphism) {
  const auto [q, p] = quadratures(two);
  const ModeOperator qp{q.matrix * p.matrix, two.single_mode()};
  for (int k = 0; k < 2; ++k) {
    EXPECT_LT(max_abs(embed(qp, k, two).matrix - embed(q, k, two).matrix * embed(p, k, two).matrix),
              tolerance::construction);
  }
}

TEST(Embed, VacuumMomentIsModeIndependent) {
  const auto q = quadratures(two).q;
  const ModeOperator q2{q.matrix * q.matrix, two.single_mode(), true};
  for (int k = 0; k < 2; ++k) {
    EXPECT_NEAR(std::real(expectation(embed(q2, k, two), vacuum_state(two))), 0.5, tolerance::construction);
  }
}

TEST(Embed, ApplyLocalMatchesEmbeddedMatrix) {
  const TruncationSpec s{4, 3};
  const auto state = ref::random_state(s, 7);
  const auto q = quadratures(s).q.matrix;
  const auto p = quadratures(s).p.matrix;
  const MatrixX<cplx> local = Eigen::kroneckerProduct(q, p).eval();
  const int modes[] = {2, 0};
  const auto full = embed(ModeOperator{local, {4, 2}}, std::span<const int>(modes), s);
  const auto direct = apply_local(local, std::span<const int>(modes), state);
  EXPECT_LT((full.matrix * state.amplitudes - direct.amplitudes).norm(), tolerance::construction);
  const int twice[] = {1, 1};
  EXPECT_THROW(local_layout(s, twice), std::invalid_argument);
}

TEST(States, NormAndExpectation) {
  const auto vac = vacuum_state(one);
  EXPECT_NEAR(norm(vac), 1.0, tolerance::construction);
  const auto s = ref::random_state(two, 3);
  EXPECT_NEAR(std::real(expectation(identity_operator(two), s)), 1.0, tolerance::construction);
  const auto q = quadratures(one).q;
  EXPECT_NEAR(norm(cvqite::apply(q, vac)), 1.0 / std::sqrt(2.0), tolerance::construction);
  EXPECT_THROW(normalize(TruncatedState{VectorX<cplx>::Zero(10), one}), std::domain_error);
  EXPECT_THROW(inner(vac, vacuum_state(two)), std::invalid_argument);
}

TEST(Exponential, ZeroScaleIsIdentity) {
  const auto q = quadratures(one).q;
  EXPECT_LT(max_abs(matrix_exponential(q, cplx(0.0)).matrix - MatrixX<cplx>::Identity(10, 10)),
            tolerance::construction);
  const ModeOperator nonherm{annihilation(one).matrix, one.single_mode()};
  EXPECT_LT(max_abs(matrix_exponential(nonherm, cplx(0.0)).matrix - MatrixX<cplx>::Identity(10, 10)),
            tolerance::construction);
}

TEST(Exponential, DiagonalCase) {
  Eigen::VectorXd e(4);
  e << 0.0, 1.0, 2.5, -0.3;
  const ModeOperator d{e.cast<cplx>().asDiagonal().toDenseMatrix(), {4, 1}, true};
  const auto out = matrix_exponential(d, cplx(-0.7));
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(out.matrix(i, i) - std::exp(-0.7 * e(i))), 0.0, 1e-14);
  EXPECT_LT(max_abs(out.matrix - MatrixX<cplx>(out.matrix.diagonal().asDiagonal())), 1e-14);
}

TEST(Exponential, NumberRotationPhase) {
  // exp(i pi/2 (q^2 + p^2 - 1)/2) = exp(i pi/2 n) below the boundary
  const auto [q, p] = quadratures(one);
  const MatrixX<cplx> gen = 0.5 * (q.matrix * q.matrix + p.matrix * p.matrix) - 0.5 * MatrixX<cplx>::Identity(10, 10);
  const auto u = matrix_exponential(ModeOperator{gen, one.single_mode(), true}, cplx(0, M_PI / 2));
  VectorX<cplx> ket = VectorX<cplx>::Zero(10);
  ket(1) = 1.0;
  const VectorX<cplx> out = u.matrix * ket;
  EXPECT_NEAR(std::abs(out(1) - cplx(0, 1)), 0.0, 1e-12);
  EXPECT_NEAR(out.norm(), 1.0, 1e-12);
}

TEST(Exponential, HermitianAndGeneralRoutesAgree) {
  const auto q = quadratures(one).q;
  auto general = q;
  general.hermitian_hint = false;
  EXPECT_LT(max_abs(matrix_exponential(q, cplx(0.3, 0.4)).matrix - matrix_exponential(general, cplx(0.3, 0.4)).matrix),
            1e-11);
  EXPECT_THROW(matrix_exponential(q, cplx(NAN)), std::domain_error);
}

TEST(Dump, RoundTripIsExact) {
  const auto s = ref::random_state(two, 11);
  const auto back = load_state(dump_state(s));
  EXPECT_EQ(back.spec, s.spec);
  EXPECT_EQ(back.amplitudes, s.amplitudes);
  const auto q = embed(quadratures(two).p, 1, two);
  EXPECT_EQ(load_operator(dump_operator(q)).matrix, q.matrix);
}

TEST(Dump, FixtureLayout) {
  // |0,1> on a 3x3 space sits at flat index 1
  const auto j = nlohmann::json::parse(R"({"kind":"state","n_cutoff":3,"n_modes":2,
    "data":[[0,0],[1,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0]]})");
  const auto s = load_state(j);
  const auto a1 = embed(annihilation(TruncationSpec{3, 2}), 1, s.spec);
  EXPECT_NEAR(std::abs((a1.matrix * s.amplitudes)(0) - 1.0), 0.0, tolerance::construction);
}
