#include "skinlat/eig.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <Eigen/SparseCore>

#include "skinlat/errors.hpp"
#include "skinlat/threads.hpp"

namespace skinlat {

namespace {

bool canonical_before(cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
}

void check_input(const DenseComplexMatrix& h) {
    if (h.rows() != h.cols() || h.rows() < 1) throw ShapeError("eigendecompose: matrix must be square, n >= 1");
    if (!h.allFinite()) throw ParameterError("eigendecompose: non-finite entry");
}

// Column-major copy for LAPACK; Eigen's default storage already is.
std::vector<cplx> to_lapack(const DenseComplexMatrix& h) {
    return std::vector<cplx>(h.data(), h.data() + h.size());
}

// Fixes the gauge of each column: unit norm, largest-modulus entry real positive
// (first such entry on ties).
void normalise_columns(Eigen::MatrixXcd& v) {
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
        auto col = v.col(c);
        const double nrm = col.norm();
        if (nrm > 0.0) col /= nrm;
        Eigen::Index best = 0;
        double best_abs = -1.0;
        for (Eigen::Index r = 0; r < col.size(); ++r) {
            const double a = std::abs(col(r));
            if (a > best_abs) {
                best_abs = a;
                best = r;
            }
        }
        if (best_abs > 0.0) col *= std::conj(col(best)) / best_abs;
        col(best) = cplx(col(best).real(), 0.0);
    }
}

EigenSolution reorder(const Eigen::VectorXcd& values, const Eigen::MatrixXcd& vectors,
                      const std::vector<Eigen::Index>& perm) {
    EigenSolution out;
    const Eigen::Index n = values.size();
    out.values.resize(n);
    out.right_vectors.resize(vectors.rows(), n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.values(i) = values(perm[i]);
        out.right_vectors.col(i) = vectors.col(perm[i]);
    }
    return out;
}

std::vector<Eigen::Index> canonical_perm(const Eigen::VectorXcd& values) {
    std::vector<Eigen::Index> perm(values.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return canonical_before(values(a), values(b)); });
    return perm;
}

}  // namespace

EigenSolution eigendecompose(const DenseComplexMatrix& h, double tol) {
    check_input(h);
    if (!(tol > 0.0)) throw ParameterError("eigendecompose: tol must be > 0");
    pin_blas_threads();

    const lapack_int n = static_cast<lapack_int>(h.rows());
    std::vector<cplx> a = to_lapack(h);
    Eigen::VectorXcd values(n);
    Eigen::MatrixXcd vectors(n, n);

    const bool hermitian = (h - h.adjoint()).cwiseAbs().maxCoeff() == 0.0;
    lapack_int info = 0;
    if (hermitian) {
        // zheevr rather than zheevd: the divide-and-conquer driver in the
        // bundled OpenBLAS returns wrong vectors on large degenerate spectra.
        std::vector<double> w(n);
        std::vector<cplx> z(static_cast<std::size_t>(n) * n);
        std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
        lapack_int found = 0;
        info = LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'A', 'U', n, a.data(), n, 0.0, 0.0, 0, 0, 0.0, &found, w.data(),
                              z.data(), n, support.data());
        if (info == 0) {
            for (lapack_int i = 0; i < n; ++i) values(i) = w[i];
            vectors = Eigen::Map<Eigen::MatrixXcd>(z.data(), n, n);
        }
    } else {
        std::vector<cplx> w(n);
        std::vector<cplx> vr(static_cast<std::size_t>(n) * n);
        info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, a.data(), n, w.data(), nullptr, 1, vr.data(), n);
        if (info == 0) {
            for (lapack_int i = 0; i < n; ++i) values(i) = w[i];
            vectors = Eigen::Map<Eigen::MatrixXcd>(vr.data(), n, n);
        }
    }
    if (info < 0) throw ParameterError("eigendecompose: LAPACK rejected argument " + std::to_string(-info));
    if (info > 0)
        throw ConvergenceError("eigendecompose: QR iteration did not converge (info=" + std::to_string(info) + ")",
                               std::numeric_limits<double>::infinity());

    normalise_columns(vectors);
    EigenSolution out = reorder(values, vectors, canonical_perm(values));
    out.frobenius_norm = h.norm();
    out.residuals.resize(n);
    // Lattice Hamiltonians are sparse; the product is O(nnz n) instead of O(n^3).
    const Eigen::SparseMatrix<cplx> hs = h.sparseView();
    const Eigen::MatrixXcd hv = hs * out.right_vectors;
    for (lapack_int i = 0; i < n; ++i)
        out.residuals(i) = (hv.col(i) - out.values(i) * out.right_vectors.col(i)).norm();

    const double bound = tol * std::max(out.frobenius_norm, std::numeric_limits<double>::min());
    const double worst = out.worst_residual();
    if (worst > bound)
        throw ConvergenceError("eigendecompose: residual " + std::to_string(worst) + " exceeds tol*||H||_F = " +
                                   std::to_string(bound),
                               worst);
    return out;
}

Eigen::VectorXcd eigenvalues(const DenseComplexMatrix& h) {
    check_input(h);
    pin_blas_threads();
    const lapack_int n = static_cast<lapack_int>(h.rows());
    std::vector<cplx> a = to_lapack(h);
    std::vector<cplx> w(n);
    cplx dummy;
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, w.data(), &dummy, 1, &dummy, 1);
    if (info != 0)
        throw ConvergenceError("eigenvalues: LAPACK info=" + std::to_string(info),
                               std::numeric_limits<double>::infinity());
    Eigen::VectorXcd values(n);
    for (lapack_int i = 0; i < n; ++i) values(i) = w[i];
    const auto perm = canonical_perm(values);
    Eigen::VectorXcd out(n);
    for (lapack_int i = 0; i < n; ++i) out(i) = values(perm[i]);
    return out;
}

EigenSolution sort_spectrum(const EigenSolution& sol, SortKey key) {
    const Eigen::Index n = sol.values.size();
    std::vector<double> score(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const cplx e = sol.values(i);
        switch (key.kind) {
            case SortKey::Kind::ByRealPart: score[i] = -e.real(); break;
            case SortKey::Kind::ByModulus: score[i] = -std::abs(e); break;
            case SortKey::Kind::ByDistanceTo: score[i] = std::abs(e - key.center); break;
            case SortKey::Kind::ByModulusNear: score[i] = std::abs(std::abs(e) - std::abs(key.center)); break;
        }
    }
    std::vector<Eigen::Index> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](Eigen::Index a, Eigen::Index b) { return score[a] < score[b]; });

    EigenSolution out = reorder(sol.values, sol.right_vectors, perm);
    out.frobenius_norm = sol.frobenius_norm;
    out.residuals.resize(sol.residuals.size());
    for (Eigen::Index i = 0; i < sol.residuals.size(); ++i) out.residuals(i) = sol.residuals(perm[i]);
    return out;
}

double match_spectra(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    if (a.size() != b.size()) throw ShapeError("match_spectra: sizes differ");
    const int n = static_cast<int>(a.size());
    if (n == 0) return 0.0;

    // Shortest augmenting path Hungarian method with row/column potentials, 1-based.
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1);
    auto cost = [&](int i, int j) { return std::abs(a(i - 1) - b(j - 1)); };
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0, j) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    double worst = 0.0;
    for (int j = 1; j <= n; ++j) worst = std::max(worst, cost(p[j], j));
    return worst;
}

}  // namespace skinlat
