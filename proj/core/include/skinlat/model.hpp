#pragma once

// Hamiltonian builders for two distinguishable particles on a non-reciprocal
// 1D chain, written as one particle on an L x L lattice.
//
// Basis convention (shared by every module): particle a sits on site w,
// particle b on site v, both 1-based. The state |a_w, b_v> has flat index
// (w - 1) * L + (v - 1), i.e. row-major with w outer and v inner.

#include <complex>
#include <utility>

#include <Eigen/Dense>

namespace skinlat {

using cplx = std::complex<double>;
using DenseComplexMatrix = Eigen::MatrixXcd;

enum class Boundary { Open, Periodic };

const char* to_string(Boundary b) noexcept;

struct ModelParams {
    // j1x hops particle x towards larger site index in the amplitude
    // equation (coefficient of psi at w+1 / v+1); j2x the other way.
    cplx j1a{1.0};
    cplx j2a{1.0};
    cplx j1b{1.0};
    cplx j2b{1.0};
    double u = 0.0;
    int l = 2;
    Boundary boundary = Boundary::Open;
    double d = 1.0;

    // Throws ParameterError when l < 2, u < 0, d <= 0 or a field is not finite.
    void validate() const;

    static ModelParams uniform(double j, double u, int l, Boundary boundary);
    static ModelParams symmetric(cplx j1, cplx j2, double u, int l, Boundary boundary);
};

// J0 = sqrt(j1 j2), e^beta = sqrt(j1 / j2), gamma = 2 beta / d.
// beta1/gamma1 belong to particle b, beta2/gamma2 to particle a.
// Only defined for strictly positive real hoppings.
struct DerivedParams {
    double j0a;
    double j0b;
    double beta1;
    double beta2;
    double gamma1;
    double gamma2;
};

DerivedParams derive(const ModelParams& params);

// Whether all four hoppings are real and strictly positive.
bool has_positive_real_hoppings(const ModelParams& params) noexcept;

// How the reverse two-photon process couples for complex P.
enum class PairConjugation {
    Transpose,  // P on both (2m,2m)->(2m+1,2m+1) and the reverse
    Conjugate,  // P on the forward process, conj(P) on the reverse
};

struct ExtendedParams {
    cplx j1{1.0};
    cplx j2{1.0};
    double u = 0.0;
    cplx p{0.0};
    int l = 4;
    Boundary boundary = Boundary::Open;
    PairConjugation conjugation = PairConjugation::Transpose;

    // l even and >= 4, u >= 0, finite fields.
    void validate() const;

    cplx lambda1() const noexcept { return (j1 + j2) / 4.0; }
    cplx lambda2() const noexcept { return (j1 - j2) / 4.0; }

    // The two-body model with j1a = j1b = j1 and j2a = j2b = j2.
    ModelParams base() const;
};

int flat_index(int w, int v, int l);
std::pair<int, int> site_of(int index, int l);

DenseComplexMatrix build_two_body_hamiltonian(const ModelParams& params);

// Effective hoppings of the relative-coordinate chain at centre-of-mass
// momentum K: jL multiplies psi_K(r-1), jR multiplies psi_K(r+1).
struct RelativeHoppings {
    cplx left;
    cplx right;
};

// Evaluated through J0, theta = K - i gamma with principal-branch sqrt/log.
// For complex hoppings the principal branches can flip the sign of a term
// relative to the direct substitution; positive real hoppings are exact.
RelativeHoppings hopping_coefficients(const ModelParams& params, double big_k);

// Open chain on r = -halfwidth..halfwidth (index r + halfwidth), impurity u at r = 0.
DenseComplexMatrix build_relative_chain(const ModelParams& params, double big_k, int halfwidth);

// Relative coordinate r = w - v (mod l) of the periodic lattice at quantized
// K = 2 pi n / l: l sites r = 0..l-1, impurity u at r = 0, and wrap bonds
// carrying the twist exp(+-i K l / 2) picked up when r crosses the seam.
DenseComplexMatrix build_relative_ring(const ModelParams& params, double big_k);

DenseComplexMatrix build_extended_hamiltonian(const ExtendedParams& params);

}  // namespace skinlat
