#pragma once

#include <Eigen/Dense>

#include "skinlat/model.hpp"

namespace skinlat {

// Right eigenpairs of a dense complex matrix. Column i of right_vectors pairs
// with values[i]; every column has unit 2-norm and its largest-modulus entry
// real and positive. residuals[i] = ||H v_i - lambda_i v_i||_2.
struct EigenSolution {
    Eigen::VectorXcd values;
    Eigen::MatrixXcd right_vectors;
    Eigen::VectorXd residuals;
    double frobenius_norm = 0.0;

    Eigen::Index size() const { return values.size(); }
    double worst_residual() const { return residuals.size() ? residuals.maxCoeff() : 0.0; }
};

inline constexpr double kDefaultEigTol = 1e-10;

// General complex eigendecomposition. Exactly Hermitian input is routed to the
// Hermitian solver, so its eigenvalues come back with zero imaginary part.
// Output is in canonical order: descending real part, then descending
// imaginary part. Throws ConvergenceError if LAPACK fails or a residual
// exceeds tol * ||H||_F.
EigenSolution eigendecompose(const DenseComplexMatrix& h, double tol = kDefaultEigTol);

// Eigenvalues only (no residual contract), canonical order.
Eigen::VectorXcd eigenvalues(const DenseComplexMatrix& h);

struct SortKey {
    enum class Kind {
        ByRealPart,     // descending Re E
        ByModulus,      // descending |E|
        ByDistanceTo,   // ascending |E - c|
        ByModulusNear,  // ascending ||E| - |c||
    };
    Kind kind = Kind::ByRealPart;
    cplx center{0.0};

    static SortKey real_part() { return {Kind::ByRealPart, 0.0}; }
    static SortKey modulus() { return {Kind::ByModulus, 0.0}; }
    static SortKey distance_to(cplx c) { return {Kind::ByDistanceTo, c}; }
    static SortKey modulus_near(double x) { return {Kind::ByModulusNear, x}; }
};

// Stable sort; vectors and residuals are permuted with the values.
EigenSolution sort_spectrum(const EigenSolution& sol, SortKey key);

// Minimal-sum one-to-one matching between two eigenvalue lists of equal size
// (Hungarian algorithm on |a_i - b_j|); returns the largest matched distance.
double match_spectra(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

}  // namespace skinlat
