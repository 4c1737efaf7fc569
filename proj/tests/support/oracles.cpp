#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace oracle {

namespace {
constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);
int idx(int w, int v, int l) { return (w - 1) * l + (v - 1); }
}  // namespace

std::vector<cplx> free_spectrum(const skinlat::ModelParams& p) {
    std::vector<cplx> out;
    for (int pa = 0; pa < p.l; ++pa) {
        for (int pb = 0; pb < p.l; ++pb) {
            const double qa = 2.0 * kPi * pa / p.l, qb = 2.0 * kPi * pb / p.l;
            const cplx ea = -p.j1a * std::exp(kI * qa) - p.j2a * std::exp(-kI * qa);
            const cplx eb = -p.j1b * std::exp(kI * qb) - p.j2b * std::exp(-kI * qb);
            out.push_back(ea + eb);
        }
    }
    return out;
}

cplx chain_green_by_solve(cplx jl, cplx jr, cplx e, int n) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
    for (int x = 0; x < n; ++x) {
        a(x, x) = -e;
        if (x > 0) a(x, x - 1) = jl;
        if (x + 1 < n) a(x, x + 1) = jr;
    }
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
    rhs(n / 2) = 1.0;
    const Eigen::VectorXcd x = a.partialPivLu().solve(rhs);
    return x(n / 2);
}

std::pair<cplx, cplx> relative_hoppings_by_substitution(const skinlat::ModelParams& p, double big_k) {
    skinlat::ModelParams q = p;
    q.l = 7;
    q.u = 0.0;
    q.boundary = skinlat::Boundary::Open;
    const auto h = skinlat::build_two_body_hamiltonian(q);
    const int l = q.l;
    const int w0 = 4, v0 = 4;  // interior site with r = 0
    cplx left = 0.0, right = 0.0;
    for (int w = 1; w <= l; ++w) {
        for (int v = 1; v <= l; ++v) {
            const cplx hx = h(idx(w0, v0, l), idx(w, v, l));
            if (hx == cplx(0.0)) continue;
            const cplx phase = std::exp(kI * (big_k * ((w + v) - (w0 + v0)) / 2.0));
            const int r = w - v;
            if (r == -1) left += hx * phase;
            if (r == 1) right += hx * phase;
        }
    }
    return {left, right};
}

SectorBlock k_sector(const skinlat::DenseComplexMatrix& h, int l, double big_k) {
    // One translation eigenvector per diagonal r = w - v (mod L): start at
    // (r + 1, 1) and walk the orbit of the simultaneous shift with weight e^{iKs}.
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(l * l, l);
    for (int r = 0; r < l; ++r) {
        int w = r + 1, v = 1;
        for (int s = 0; s < l; ++s) {
            b(idx(w, v, l), r) = std::exp(kI * (big_k * s)) / std::sqrt(static_cast<double>(l));
            w = w % l + 1;
            v = v % l + 1;
        }
    }
    const Eigen::MatrixXcd block = b.adjoint() * h * b;
    SectorBlock out;
    out.values = Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(block).eigenvalues();
    out.leakage = (h * b - b * block).norm();
    return out;
}

cplx impurity_energy(double u, cplx jl, cplx jr) { return std::sqrt(u * u + 4.0 * jl * jr); }

BondSolution bond_closed_form(double j1, double j2, double omega, double c0) {
    BondSolution s;
    s.l_series = (1.0 / j1 + 1.0 / j2) / (2.0 * omega * omega * c0);
    s.c_inic = j1 == j2 ? std::numeric_limits<double>::infinity() : 2.0 * c0 * j1 * j2 / (j1 - j2);
    return s;
}

std::vector<cplx> sorted(std::vector<cplx> v) {
    std::sort(v.begin(), v.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return v;
}

double greedy_match(std::vector<cplx> a, std::vector<cplx> b) {
    double worst = 0.0;
    for (cplx x : a) {
        auto it = std::min_element(b.begin(), b.end(), [&](cplx p, cplx q) { return std::abs(p - x) < std::abs(q - x); });
        if (it == b.end()) return std::numeric_limits<double>::infinity();
        worst = std::max(worst, std::abs(*it - x));
        b.erase(it);
    }
    return worst;
}

}  // namespace oracle
