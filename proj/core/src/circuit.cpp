#include "skinlat/circuit.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "skinlat/errors.hpp"

namespace skinlat {

namespace {

const cplx kI(0.0, 1.0);

struct Target {
    double j1;
    double j2;
};

Target real_target(cplx j1, cplx j2, const char* which) {
    if (j1.imag() != 0.0 || j2.imag() != 0.0 || !(j1.real() > 0.0) || !(j2.real() > 0.0))
        throw InfeasibleError(std::string("solve_components: ") + which +
                                  " hoppings must be positive real for a passive-plus-INIC bond",
                              "");
    return {j1.real(), j2.real()};
}

// Relative mismatch of the two matching conditions R1 = -i w C0 j1, R2 = -i w C0 j2.
std::array<double, 2> mismatch(const BondComponents& bond, double omega, double c0, Target t) {
    const auto [r1, r2] = stack_admittances(bond, omega);
    const cplx t1 = -kI * omega * c0 * t.j1;
    const cplx t2 = -kI * omega * c0 * t.j2;
    return {std::abs(r1 - t1) / std::abs(t1), std::abs(r2 - t2) / std::abs(t2)};
}

// Signed residual vector used by Newton (the matching quantities are purely imaginary).
std::array<double, 2> residual(double sign, double y0, double y1, double omega, double c0, Target t) {
    BondComponents bond{sign * std::exp(y0), std::exp(y1)};
    const auto [r1, r2] = stack_admittances(bond, omega);
    return {(r1.imag() + omega * c0 * t.j1) / (omega * c0 * t.j1), (r2.imag() + omega * c0 * t.j2) / (omega * c0 * t.j2)};
}

struct NewtonResult {
    bool converged = false;
    double y0 = 0.0, y1 = 0.0;
    double norm = std::numeric_limits<double>::infinity();
    int iterations = 0;
};

NewtonResult damped_newton(double sign, double y0, double y1, double omega, double c0, Target t) {
    NewtonResult out;
    auto f = [&](double a, double b) { return residual(sign, a, b, omega, c0, t); };
    auto nrm = [](const std::array<double, 2>& r) {
        const double n = std::hypot(r[0], r[1]);
        return std::isfinite(n) ? n : std::numeric_limits<double>::infinity();
    };
    std::array<double, 2> r = f(y0, y1);
    double n0 = nrm(r);
    for (int it = 0; it < 200; ++it) {
        out.iterations = it;
        if (n0 < 1e-14) break;
        const double h = 1e-7;
        const auto ra = f(y0 + h, y1), rb = f(y0 - h, y1), rc = f(y0, y1 + h), rd = f(y0, y1 - h);
        const double j00 = (ra[0] - rb[0]) / (2 * h), j10 = (ra[1] - rb[1]) / (2 * h);
        const double j01 = (rc[0] - rd[0]) / (2 * h), j11 = (rc[1] - rd[1]) / (2 * h);
        const double det = j00 * j11 - j01 * j10;
        if (!std::isfinite(det) || det == 0.0) break;
        const double d0 = -(j11 * r[0] - j01 * r[1]) / det;
        const double d1 = -(-j10 * r[0] + j00 * r[1]) / det;
        double step = 1.0;
        bool moved = false;
        for (int k = 0; k < 40; ++k, step *= 0.5) {
            const double a = y0 + step * d0, b = y1 + step * d1;
            const auto rn = f(a, b);
            const double nn = nrm(rn);
            if (nn < n0) {
                y0 = a;
                y1 = b;
                r = rn;
                n0 = nn;
                moved = true;
                break;
            }
        }
        if (!moved) break;
    }
    out.y0 = y0;
    out.y1 = y1;
    out.norm = n0;
    out.converged = n0 < 1e-12;
    return out;
}

BondComponents solve_bond(Target t, double omega, double c0, const char* which, int& iterations) {
    if (t.j1 == t.j2) {
        // No non-reciprocity: a bare inductor gives 1/(i w L) = -i w C0 j.
        return {std::nullopt, 1.0 / (omega * omega * c0 * t.j1)};
    }
    // Small-L linearisation: R1 - R2 ~ 2 R_a and R1 + R2 ~ -2 i w L R_a^2.
    const double a0 = omega * c0 * std::abs(t.j1 - t.j2) / 2.0;
    const double x0 = omega * c0 * (t.j1 + t.j2) / (2.0 * a0 * a0);
    const double y0_seed = std::log(a0 / omega);
    const double y1_seed = std::log(x0 / omega);

    std::ostringstream landscape;
    NewtonResult best;
    double best_sign = 1.0;
    for (double sign : {1.0, -1.0}) {
        for (int i = -3; i <= 3; ++i) {
            for (int j = -3; j <= 3; ++j) {
                const NewtonResult r =
                    damped_newton(sign, y0_seed + i * std::log(10.0), y1_seed + j * std::log(10.0), omega, c0, t);
                iterations += r.iterations;
                landscape << "seed(sign=" << sign << ",dec_c=" << i << ",dec_l=" << j << ") -> " << r.norm << "\n";
                if (r.norm < best.norm) {
                    best = r;
                    best_sign = sign;
                }
                if (best.converged) break;
            }
            if (best.converged) break;
        }
        if (best.converged) break;
    }
    if (!best.converged)
        throw InfeasibleError(std::string("solve_components: no positive-component solution for ") + which + " bonds",
                              landscape.str());
    return {best_sign * std::exp(best.y0), std::exp(best.y1)};
}

}  // namespace

std::pair<cplx, cplx> stack_admittances(const BondComponents& bond, double omega) {
    const cplx il = kI * omega * bond.l_series;
    if (!bond.c_inic) {
        const cplx y = 1.0 / il;
        return {y, y};
    }
    const cplx ra = kI * omega * *bond.c_inic;
    return {ra / (1.0 + il * ra), -ra / (1.0 - il * ra)};
}

SolveReport solve_components_report(const ModelParams& params, double omega, double c0) {
    params.validate();
    if (!(omega > 0.0) || !(c0 > 0.0) || !std::isfinite(omega) || !std::isfinite(c0))
        throw ParameterError("solve_components: omega and c0 must be positive");
    const Target ta = real_target(params.j1a, params.j2a, "a");
    const Target tb = real_target(params.j1b, params.j2b, "b");

    SolveReport rep;
    CircuitComponents& c = rep.components;
    c.omega = omega;
    c.c0 = c0;
    c.a = solve_bond(ta, omega, c0, "a", rep.newton_iterations);
    c.b = solve_bond(tb, omega, c0, "b", rep.newton_iterations);
    c.l0 = params.u > 0.0 ? 1.0 / (omega * omega * c0 * params.u) : std::numeric_limits<double>::infinity();

    for (auto [bond, t] : {std::pair{c.a, ta}, std::pair{c.b, tb}}) {
        for (double m : mismatch(bond, omega, c0, t)) rep.max_relative_residual = std::max(rep.max_relative_residual, m);
    }
    if (!(rep.max_relative_residual <= 1e-10))
        throw InfeasibleError("solve_components: matching residual " + std::to_string(rep.max_relative_residual) +
                                  " above 1e-10",
                              "");
    return rep;
}

CircuitComponents solve_components(const ModelParams& params, double omega, double c0) {
    return solve_components_report(params, omega, c0).components;
}

DenseComplexMatrix build_laplacian(const CircuitComponents& comp, const ModelParams& params) {
    params.validate();
    const int l = params.l;
    const bool periodic = params.boundary == Boundary::Periodic;
    const Eigen::Index n = static_cast<Eigen::Index>(l) * l;
    DenseComplexMatrix lap = DenseComplexMatrix::Zero(n, n);
    const auto [ra1, ra2] = stack_admittances(comp.a, comp.omega);
    const auto [rb1, rb2] = stack_admittances(comp.b, comp.omega);
    auto bond = [&](int s, int e, cplx r1, cplx r2) {
        lap(s, s) += r1;
        lap(s, e) -= r1;
        lap(e, e) += r2;
        lap(e, s) -= r2;
    };
    // Same accumulation order as the netlist: capacitors, grounding inductors, bonds.
    for (Eigen::Index s = 0; s < n; ++s) lap(s, s) += kI * comp.omega * comp.c0;
    if (std::isfinite(comp.l0))
        for (int t = 1; t <= l; ++t) lap(flat_index(t, t, l), flat_index(t, t, l)) += 1.0 / (kI * comp.omega * comp.l0);
    for (int w = 1; w <= l; ++w) {
        for (int v = 1; v <= l; ++v) {
            const int s = flat_index(w, v, l);
            if (w < l || periodic) bond(s, flat_index(w % l + 1, v, l), ra1, ra2);
            if (v < l || periodic) bond(s, flat_index(w, v % l + 1, l), rb1, rb2);
        }
    }
    return lap;
}

EquivalenceReport verify_equivalence(const DenseComplexMatrix& laplacian, const DenseComplexMatrix& h, double omega,
                                     double c0) {
    if (laplacian.rows() != h.rows() || laplacian.cols() != h.cols() || h.rows() != h.cols())
        throw ShapeError("verify_equivalence: dimension mismatch");
    const DenseComplexMatrix scaled = laplacian / (kI * omega * c0);
    const double n = static_cast<double>(h.rows());
    const cplx tr_h = h.trace();
    const cplx tr_s = scaled.trace();
    const double hh = h.squaredNorm();
    const cplx hs = (h.conjugate().cwiseProduct(scaled)).sum();

    // Normal equations of min ||S - alpha I - sigma H||_F.
    Eigen::Matrix2cd a;
    a << n, tr_h, std::conj(tr_h), hh;
    Eigen::Vector2cd rhs(tr_s, hs);
    const Eigen::Vector2cd x = a.fullPivLu().solve(rhs);

    EquivalenceReport rep;
    rep.alpha = x(0);
    rep.sigma = x(1);
    DenseComplexMatrix dev = scaled - rep.sigma * h;
    dev.diagonal().array() -= rep.alpha;
    rep.max_dev = dev.cwiseAbs().maxCoeff(&rep.worst_row, &rep.worst_col);
    return rep;
}

}  // namespace skinlat
