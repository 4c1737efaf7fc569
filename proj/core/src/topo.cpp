#include "skinlat/topo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "skinlat/errors.hpp"
#include "skinlat/localization.hpp"
#include "skinlat/spectra.hpp"

namespace skinlat {

namespace {
constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

double min_gap_near(const ExtendedParams& params, double* k_at) {
    constexpr int grid = 1024;
    int best = 0;
    double best_gap = std::numeric_limits<double>::infinity();
    for (int j = 0; j < grid; ++j) {
        const double k = -kPi + 2.0 * kPi * j / grid;
        const double g = ssh_gap(params, k);
        if (g < best_gap) {
            best_gap = g;
            best = j;
        }
    }
    const double h = 2.0 * kPi / grid;
    const double k0 = -kPi + h * best;
    auto r = boost::math::tools::brent_find_minima([&](double k) { return ssh_gap(params, k); }, k0 - h, k0 + h, 50);
    if (r.second < best_gap) {
        best_gap = r.second;
        if (k_at) *k_at = std::remainder(r.first, 2.0 * kPi);
    } else if (k_at) {
        *k_at = k0;
    }
    return best_gap;
}

}  // namespace

SshComponents ssh_components(const ExtendedParams& p, double k) {
    const cplx l1 = p.lambda1(), l2 = p.lambda2();
    SshComponents c;
    c.dx = l1 + (l1 + p.p) * std::cos(k) - kI * l2 * std::sin(k);
    c.dy = -kI * l2 + (p.p + l1) * std::sin(k) + kI * l2 * std::cos(k);
    c.h_plus = c.dx + kI * c.dy;
    c.h_minus = c.dx - kI * c.dy;
    return c;
}

Eigen::Matrix2cd effective_ssh_bloch(const ExtendedParams& p, double k) {
    const SshComponents c = ssh_components(p, k);
    const cplx shift = p.u + (p.j1 + p.j2) / 2.0;
    Eigen::Matrix2cd m;
    m << shift, c.h_minus, c.h_plus, shift;
    return m;
}

double ssh_gap(const ExtendedParams& p, double k) {
    const SshComponents c = ssh_components(p, k);
    return 2.0 * std::abs(std::sqrt(c.h_plus * c.h_minus));
}

SshWinding ssh_windings(const ExtendedParams& params, int n_k) {
    SshWinding out;
    out.min_gap = min_gap_near(params, nullptr);
    if (out.min_gap < kGaplessTol)
        throw GaplessError("ssh_winding: gap closes (min " + std::to_string(out.min_gap) + ")");
    out.w_plus = winding_number([&](double k) { return ssh_components(params, k).h_plus; }, cplx(0.0), n_k);
    out.w_minus = winding_number([&](double k) { return ssh_components(params, k).h_minus; }, cplx(0.0), n_k);
    return out;
}

int ssh_winding(const ExtendedParams& params, int n_k) { return ssh_windings(params, n_k).w_plus; }

std::vector<GapPoint> gap_scan(const ExtendedParams& base, const std::vector<cplx>& p_values) {
    std::vector<GapPoint> out;
    for (cplx p : p_values) {
        ExtendedParams q = base;
        q.p = p;
        GapPoint g{p, 0.0, 0.0};
        g.min_gap = min_gap_near(q, &g.k_at_min);
        out.push_back(g);
    }
    return out;
}

std::pair<double, double> bound_band_gap(const ExtendedParams& params) {
    ExtendedParams pbc = params;
    pbc.boundary = Boundary::Periodic;
    const EigenSolution sol = eigendecompose(build_extended_hamiltonian(pbc));
    const StatePartition part = classify_states(sol, pbc.base());
    std::vector<double> re;
    for (auto i : part.bound) re.push_back(sol.values(i).real());
    std::sort(re.begin(), re.end());
    if (re.size() < 2) throw ClassificationError("bound_band_gap: bound band has fewer than 2 states");
    std::size_t at = 0;
    double width = -1.0;
    for (std::size_t i = 0; i + 1 < re.size(); ++i) {
        if (re[i + 1] - re[i] > width) {
            width = re[i + 1] - re[i];
            at = i;
        }
    }
    return {re[at], re[at + 1]};
}

CornerModeReport detect_corner_modes(const EigenSolution& sol, const ExtendedParams& params,
                                     CornerModeOptions options) {
    params.validate();
    const int l = params.l;
    if (sol.right_vectors.rows() != static_cast<Eigen::Index>(l) * l)
        throw ShapeError("detect_corner_modes: solution does not match l^2");
    if (options.block < 1 || 2 * options.block > l) throw ParameterError("detect_corner_modes: bad block size");

    CornerModeReport rep;
    rep.block = options.block;
    const auto [lo, hi] = bound_band_gap(params);
    const double margin = options.shrink * (hi - lo);
    rep.gap_lower = lo + margin;
    rep.gap_upper = hi - margin;

    const StatePartition part = classify_states(sol, params.base());
    for (auto i : part.bound) {
        const double re = sol.values(i).real();
        if (re > rep.gap_lower && re < rep.gap_upper) rep.in_gap_indices.push_back(i);
    }
    std::sort(rep.in_gap_indices.begin(), rep.in_gap_indices.end());

    // Projector weights on the two corner blocks.
    const int b = options.block;
    std::vector<Eigen::Index> first_sites, last_sites;
    for (int w = 1; w <= b; ++w)
        for (int v = 1; v <= b; ++v) {
            first_sites.push_back(flat_index(w, v, l));
            last_sites.push_back(flat_index(l - b + w, l - b + v, l));
        }
    auto weight = [](const Eigen::VectorXcd& x, const std::vector<Eigen::Index>& sites) {
        double s = 0.0;
        for (auto i : sites) s += std::norm(x(i));
        return s / x.squaredNorm();
    };

    // Degenerate clusters: rotate to the basis diagonalising the (1,1)-block weight.
    const auto& idx = rep.in_gap_indices;
    std::size_t start = 0;
    while (start < idx.size()) {
        std::size_t end = start + 1;
        while (end < idx.size()) {
            const cplx e0 = sol.values(idx[end - 1]);
            if (std::abs(sol.values(idx[end]) - e0) >= 1e-8 * std::max(1.0, std::abs(e0))) break;
            ++end;
        }
        const Eigen::Index m = static_cast<Eigen::Index>(end - start);
        Eigen::MatrixXcd block(sol.right_vectors.rows(), m);
        for (Eigen::Index j = 0; j < m; ++j) block.col(j) = sol.right_vectors.col(idx[start + j]);
        if (m > 1) {
            Eigen::HouseholderQR<Eigen::MatrixXcd> qr(block);
            const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(block.rows(), m);
            Eigen::MatrixXcd pw = Eigen::MatrixXcd::Zero(m, m);
            for (auto s : first_sites) pw += q.row(s).adjoint() * q.row(s);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pw);
            block = q * es.eigenvectors();
        }
        for (Eigen::Index j = 0; j < m; ++j) {
            Eigen::VectorXcd x = block.col(j).normalized();
            rep.energies.push_back(sol.values(idx[start + j]));
            rep.weight_first.push_back(weight(x, first_sites));
            rep.weight_last.push_back(weight(x, last_sites));
            rep.vectors.push_back(std::move(x));
        }
        start = end;
    }
    return rep;
}

}  // namespace skinlat
