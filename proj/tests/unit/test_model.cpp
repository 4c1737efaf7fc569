#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "skinlat/eig.hpp"
#include "skinlat/errors.hpp"
#include "skinlat/model.hpp"

using namespace skinlat;

namespace {
constexpr double kPi = std::numbers::pi;

ModelParams general(double j1a, double j2a, double j1b, double j2b, double u, int l, Boundary b) {
    ModelParams p;
    p.j1a = j1a;
    p.j2a = j2a;
    p.j1b = j1b;
    p.j2b = j2b;
    p.u = u;
    p.l = l;
    p.boundary = b;
    return p;
}
}  // namespace

TEST(FlatIndex, Examples) {
    EXPECT_EQ(flat_index(1, 1, 5), 0);
    EXPECT_EQ(flat_index(5, 5, 5), 24);
    EXPECT_EQ(flat_index(2, 3, 5), 7);
}

TEST(FlatIndex, RoundTripsForEverySite) {
    for (int l : {2, 3, 7}) {
        std::vector<bool> seen(l * l, false);
        for (int w = 1; w <= l; ++w)
            for (int v = 1; v <= l; ++v) {
                const int i = flat_index(w, v, l);
                ASSERT_FALSE(seen[i]);
                seen[i] = true;
                EXPECT_EQ(site_of(i, l), std::make_pair(w, v));
            }
    }
}

TEST(FlatIndex, OutOfRangeThrows) {
    EXPECT_THROW(flat_index(0, 1, 3), RangeError);
    EXPECT_THROW(flat_index(1, 4, 3), RangeError);
    EXPECT_THROW(site_of(9, 3), RangeError);
}

TEST(ModelParams, Validation) {
    auto p = ModelParams::uniform(1.0, 1.0, 1, Boundary::Open);
    EXPECT_THROW(build_two_body_hamiltonian(p), ParameterError);
    p.l = 3;
    p.u = -1.0;
    EXPECT_THROW(build_two_body_hamiltonian(p), ParameterError);
    p.u = 0.0;
    p.d = 0.0;
    EXPECT_THROW(build_two_body_hamiltonian(p), ParameterError);
}

TEST(TwoBody, TwoSiteFreeChain) {
    const auto h = build_two_body_hamiltonian(ModelParams::uniform(1.0, 0.0, 2, Boundary::Open));
    int nonzero = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (h(i, j) != cplx(0.0)) {
                ++nonzero;
                EXPECT_EQ(h(i, j), cplx(-1.0));
            }
    EXPECT_EQ(nonzero, 8);
    const auto e = eigendecompose(h).values;
    EXPECT_NEAR(e(0).real(), 2.0, 1e-12);
    EXPECT_NEAR(e(1).real(), 0.0, 1e-12);
    EXPECT_NEAR(e(2).real(), 0.0, 1e-12);
    EXPECT_NEAR(e(3).real(), -2.0, 1e-12);
}

TEST(TwoBody, EntryDirections) {
    const auto p = general(1.1, 1.2, 1.3, 1.4, 7.0, 4, Boundary::Open);
    const auto h = build_two_body_hamiltonian(p);
    const int l = 4;
    EXPECT_EQ(h(flat_index(2, 3, l), flat_index(3, 3, l)), cplx(-1.1));
    EXPECT_EQ(h(flat_index(2, 3, l), flat_index(1, 3, l)), cplx(-1.2));
    EXPECT_EQ(h(flat_index(2, 3, l), flat_index(2, 4, l)), cplx(-1.3));
    EXPECT_EQ(h(flat_index(2, 3, l), flat_index(2, 2, l)), cplx(-1.4));
    EXPECT_EQ(h(flat_index(3, 3, l), flat_index(3, 3, l)), cplx(7.0));
    EXPECT_EQ(h(flat_index(2, 3, l), flat_index(2, 3, l)), cplx(0.0));
    // open ends: nothing wraps
    EXPECT_EQ(h(flat_index(4, 1, l), flat_index(1, 1, l)), cplx(0.0));
}

TEST(TwoBody, PeriodicWrapEntries) {
    const auto p = general(1.1, 1.2, 1.3, 1.4, 0.0, 4, Boundary::Periodic);
    const auto h = build_two_body_hamiltonian(p);
    const int l = 4;
    EXPECT_EQ(h(flat_index(4, 2, l), flat_index(1, 2, l)), cplx(-1.1));
    EXPECT_EQ(h(flat_index(1, 2, l), flat_index(4, 2, l)), cplx(-1.2));
    EXPECT_EQ(h(flat_index(2, 4, l), flat_index(2, 1, l)), cplx(-1.3));
    EXPECT_EQ(h(flat_index(2, 1, l), flat_index(2, 4, l)), cplx(-1.4));
}

TEST(TwoBody, ReciprocalIsHermitian) {
    const auto h = build_two_body_hamiltonian(general(1.3, 1.3, 0.7, 0.7, 5.0, 6, Boundary::Open));
    EXPECT_EQ((h - h.adjoint()).cwiseAbs().maxCoeff(), 0.0);
    const auto e = eigendecompose(h).values;
    EXPECT_LT(e.imag().cwiseAbs().maxCoeff(), 1e-10);
}

TEST(TwoBody, PeriodicTranslationSymmetry) {
    const auto p = general(1.0, 1.6, 0.8, 1.3, 4.0, 5, Boundary::Periodic);
    const auto h = build_two_body_hamiltonian(p);
    const int l = p.l;
    DenseComplexMatrix t = DenseComplexMatrix::Zero(l * l, l * l);
    for (int w = 1; w <= l; ++w)
        for (int v = 1; v <= l; ++v) t(flat_index(w % l + 1, v % l + 1, l), flat_index(w, v, l)) = 1.0;
    EXPECT_LT((h * t - t * h).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(TwoBody, LargestEnergyPeriodicL40) {
    const auto e = eigenvalues(build_two_body_hamiltonian(ModelParams::uniform(1.6, 10.0, 40, Boundary::Periodic)));
    EXPECT_NEAR(e(0).real(), 11.88, 0.02);
}

TEST(Derived, PositiveRealOnly) {
    const auto d = derive(general(3.0, 1.0, 1.0, 3.0, 0.0, 3, Boundary::Open));
    EXPECT_NEAR(d.j0a, std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(d.beta2, 0.5 * std::log(3.0), 1e-15);
    EXPECT_NEAR(d.beta1, -0.5 * std::log(3.0), 1e-15);
    EXPECT_NEAR(d.gamma1, 2.0 * d.beta1, 1e-15);
    EXPECT_THROW(derive(general(0.0, 1.0, 1.0, 1.0, 0.0, 3, Boundary::Open)), SingularParameterError);
    auto c = general(1.0, 1.0, 1.0, 1.0, 0.0, 3, Boundary::Open);
    c.j1a = cplx(1.0, 0.5);
    EXPECT_THROW(derive(c), ParameterError);
}

TEST(RelativeHoppings, ReciprocalAtZeroAndPi) {
    const auto p = ModelParams::uniform(0.9, 0.0, 3, Boundary::Open);
    const auto a = hopping_coefficients(p, 0.0);
    EXPECT_NEAR(std::abs(a.left - (-1.8)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(a.right - (-1.8)), 0.0, 1e-14);
    const auto b = hopping_coefficients(p, kPi);
    EXPECT_NEAR(std::abs(b.left), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(b.right), 0.0, 1e-14);
}

TEST(RelativeHoppings, MatchesPatchSubstitution) {
    for (const auto& p : {general(3, 1, 1, 3, 0, 3, Boundary::Open), general(1.0, 1.6, 1.6, 1.1, 5, 3, Boundary::Open),
                          general(0.4, 2.5, 1.2, 0.3, 1, 3, Boundary::Open)}) {
        for (double k : {0.0, 0.7, -2.1, 3.0}) {
            const auto jj = hopping_coefficients(p, k);
            const auto [l, r] = oracle::relative_hoppings_by_substitution(p, k);
            EXPECT_LT(std::abs(jj.left - l), 1e-13) << "K=" << k;
            EXPECT_LT(std::abs(jj.right - r), 1e-13) << "K=" << k;
        }
    }
}

TEST(RelativeHoppings, ZeroHoppingIsSingular) {
    EXPECT_THROW(hopping_coefficients(general(1, 0, 1, 1, 0, 3, Boundary::Open), 0.0), SingularParameterError);
}

TEST(RelativeHoppings, EqualityCondition) {
    // jL = jR exactly when sin(theta1 d/2) / sin(theta2 d/2) = J0a / J0b
    const auto p = general(1.3, 0.8, 0.6, 1.7, 0.0, 3, Boundary::Open);
    const auto d = derive(p);
    for (double k : {0.3, 1.1, 2.4}) {
        const auto jj = hopping_coefficients(p, k);
        const cplx i(0, 1);
        const cplx t1 = k - i * d.gamma1, t2 = k - i * d.gamma2;
        // jL - jR = -2 i (J0b sin(theta1/2) - J0a sin(theta2/2))
        const cplx diff = jj.left - jj.right;
        const cplx expected = -2.0 * i * (d.j0b * std::sin(t1 / 2.0) - d.j0a * std::sin(t2 / 2.0));
        EXPECT_LT(std::abs(diff - expected), 1e-12);
    }
}

TEST(RelativeChain, ThreeSites) {
    auto p = ModelParams::uniform(1.0, 0.0, 3, Boundary::Open);
    const auto h = build_relative_chain(p, 0.0, 1);
    ASSERT_EQ(h.rows(), 3);
    EXPECT_EQ(h(1, 0), cplx(-2.0));
    EXPECT_EQ(h(1, 2), cplx(-2.0));
    const auto e = eigendecompose(h).values;
    EXPECT_NEAR(e(0).real(), 2.0 * std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(e(1).real(), 0.0, 1e-12);
    EXPECT_NEAR(e(2).real(), -2.0 * std::sqrt(2.0), 1e-12);
}

TEST(RelativeChain, ImpurityBoundState) {
    const auto e = eigenvalues(build_relative_chain(ModelParams::uniform(1.0, 10.0, 3, Boundary::Open), 0.0, 400));
    EXPECT_NEAR(e(0).real(), std::sqrt(116.0), 1e-10);
    const auto e2 = eigenvalues(build_relative_chain(ModelParams::uniform(1.6, 10.0, 3, Boundary::Open), 0.0, 200));
    EXPECT_NEAR(e2(0).real(), std::sqrt(100.0 + 16.0 * 1.6 * 1.6), 1e-10);
    EXPECT_NEAR(e2(0).real(), 11.88, 0.02);
}

TEST(RelativeChain, HalfwidthValidated) {
    EXPECT_THROW(build_relative_chain(ModelParams::uniform(1.0, 1.0, 3, Boundary::Open), 0.0, 0), ParameterError);
}

TEST(RelativeRing, MatchesBlochSectorOfPeriodicMatrix) {
    for (const auto& p : {general(1.6, 1.6, 1.6, 1.6, 5, 6, Boundary::Periodic),
                          general(1.0, 1.6, 1.6, 1.1, 5, 6, Boundary::Periodic),
                          general(3, 1, 1, 3, 10, 5, Boundary::Periodic)}) {
        const auto h = build_two_body_hamiltonian(p);
        for (int n = 0; n < p.l; ++n) {
            double k = 2.0 * kPi * n / p.l;
            if (k >= kPi) k -= 2.0 * kPi;
            const auto sector = oracle::k_sector(h, p.l, k);
            EXPECT_LT(sector.leakage, 1e-12);
            const auto ring = eigenvalues(build_relative_ring(p, k));
            EXPECT_LT(match_spectra(sector.values, ring), 1e-8) << "n=" << n;
        }
    }
}

TEST(Extended, ZeroPairingIsBaseModel) {
    ExtendedParams e;
    e.j1 = 1.3;
    e.j2 = 0.7;
    e.u = 4;
    e.p = 0.0;
    e.l = 6;
    for (auto b : {Boundary::Open, Boundary::Periodic}) {
        e.boundary = b;
        EXPECT_EQ((build_extended_hamiltonian(e) - build_two_body_hamiltonian(e.base())).cwiseAbs().maxCoeff(), 0.0);
    }
}

TEST(Extended, OddSizeRejected) {
    ExtendedParams e;
    e.l = 5;
    EXPECT_THROW(build_extended_hamiltonian(e), ParameterError);
}

TEST(Extended, PairingEntries) {
    ExtendedParams e;
    e.j1 = e.j2 = 1.0;
    e.u = 25;
    e.p = cplx(1.0, 1.0);
    e.l = 6;
    auto h = build_extended_hamiltonian(e);
    const int l = 6;
    EXPECT_EQ(h(flat_index(2, 2, l), flat_index(3, 3, l)), e.p);
    EXPECT_EQ(h(flat_index(3, 3, l), flat_index(2, 2, l)), e.p);
    EXPECT_EQ(h(flat_index(4, 4, l), flat_index(5, 5, l)), e.p);
    EXPECT_EQ(h(flat_index(1, 1, l), flat_index(2, 2, l)), cplx(0.0));
    EXPECT_EQ(h(flat_index(6, 6, l), flat_index(1, 1, l)), cplx(0.0));
    e.conjugation = PairConjugation::Conjugate;
    e.boundary = Boundary::Periodic;
    h = build_extended_hamiltonian(e);
    EXPECT_EQ(h(flat_index(3, 3, l), flat_index(2, 2, l)), std::conj(e.p));
    EXPECT_EQ(h(flat_index(6, 6, l), flat_index(1, 1, l)), e.p);
    EXPECT_EQ(h(flat_index(1, 1, l), flat_index(6, 6, l)), std::conj(e.p));
}

TEST(Extended, ExchangeSymmetry) {
    ExtendedParams e;
    e.j1 = e.j2 = 1.0;
    e.u = 25;
    e.p = 5;
    e.l = 4;
    const auto h = build_extended_hamiltonian(e);
    const int l = 4;
    DenseComplexMatrix s = DenseComplexMatrix::Zero(l * l, l * l);
    for (int w = 1; w <= l; ++w)
        for (int v = 1; v <= l; ++v) s(flat_index(v, w, l), flat_index(w, v, l)) = 1.0;
    EXPECT_EQ((s * h * s - h).cwiseAbs().maxCoeff(), 0.0);
}
