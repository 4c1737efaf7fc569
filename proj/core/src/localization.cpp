#include "skinlat/localization.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "skinlat/errors.hpp"

namespace skinlat {

DensityProfile density(const Eigen::VectorXcd& vector, int l, cplx source_energy) {
    if (l < 1 || vector.size() != static_cast<Eigen::Index>(l) * l)
        throw ShapeError("density: vector length " + std::to_string(vector.size()) + " is not l^2");
    DensityProfile out;
    out.grid.resize(l, l);
    for (int w = 1; w <= l; ++w)
        for (int v = 1; v <= l; ++v) out.grid(w - 1, v - 1) = std::norm(vector(flat_index(w, v, l)));
    out.total = out.grid.sum();
    out.source_energy = source_energy;
    return out;
}

std::vector<CutPoint> relative_cut(const DensityProfile& profile, int fixed_v) {
    const int l = profile.l();
    if (fixed_v < 1 || fixed_v > l) throw RangeError("relative_cut: fixed_v outside 1..L");
    std::vector<CutPoint> cut;
    cut.reserve(l);
    for (int w = 1; w <= l; ++w) cut.push_back({w - fixed_v, profile.at(w, fixed_v)});
    return cut;
}

std::vector<CutPoint> center_of_mass_profile(const DensityProfile& profile) {
    std::vector<CutPoint> out;
    for (int t = 1; t <= profile.l(); ++t) out.push_back({t, profile.at(t, t)});
    return out;
}

namespace {

OneSidedFit fit_side(std::vector<CutPoint> pts, const char* name) {
    std::sort(pts.begin(), pts.end(), [](const CutPoint& a, const CutPoint& b) { return std::abs(a.r) < std::abs(b.r); });
    // drop the two outermost points (boundary sites)
    pts.resize(pts.size() > 2 ? pts.size() - 2 : 0);
    std::vector<std::pair<double, double>> xy;
    for (const auto& p : pts)
        if (p.rho > kDensityFloor) xy.emplace_back(std::abs(p.r), std::log(p.rho));
    if (xy.size() < 4)
        throw FitError(std::string("fit_scaling_factor: fewer than 4 usable points on the ") + name + " side");

    const double n = static_cast<double>(xy.size());
    double sx = 0, sy = 0;
    for (auto [x, y] : xy) {
        sx += x;
        sy += y;
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (auto [x, y] : xy) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if (sxx == 0.0) throw FitError("fit_scaling_factor: degenerate abscissae");
    const double slope = sxy / sxx;
    OneSidedFit fit;
    fit.eta = -slope;
    fit.intercept = my - slope * mx;
    fit.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
    fit.min_abs_r = static_cast<int>(xy.front().first);
    fit.max_abs_r = static_cast<int>(xy.front().first);
    for (auto [x, y] : xy) {
        fit.min_abs_r = std::min(fit.min_abs_r, static_cast<int>(x));
        fit.max_abs_r = std::max(fit.max_abs_r, static_cast<int>(x));
    }
    fit.points = static_cast<int>(xy.size());
    return fit;
}

}  // namespace

ScalingFit fit_scaling_factor(const std::vector<CutPoint>& cut, FitSide side) {
    std::vector<CutPoint> left, right;
    for (const auto& p : cut) {
        if (p.r < 0) left.push_back(p);
        if (p.r > 0) right.push_back(p);
    }
    ScalingFit out;
    if (side != FitSide::Right) out.left = fit_side(left, "left");
    if (side != FitSide::Left) out.right = fit_side(right, "right");

    if (side == FitSide::Both) {
        out.eta = 0.5 * (out.left->eta + out.right->eta);
        out.intercept = 0.5 * (out.left->intercept + out.right->intercept);
        out.r_squared = std::min(out.left->r_squared, out.right->r_squared);
        out.min_abs_r = std::min(out.left->min_abs_r, out.right->min_abs_r);
        out.max_abs_r = std::max(out.left->max_abs_r, out.right->max_abs_r);
    } else {
        const OneSidedFit& f = side == FitSide::Left ? *out.left : *out.right;
        out.eta = f.eta;
        out.intercept = f.intercept;
        out.r_squared = f.r_squared;
        out.min_abs_r = f.min_abs_r;
        out.max_abs_r = f.max_abs_r;
    }
    return out;
}

DenseComplexMatrix gauge_transform(const DenseComplexMatrix& h, double beta1, double beta2, int l) {
    const Eigen::Index n = static_cast<Eigen::Index>(l) * l;
    if (l < 1 || h.rows() != n || h.cols() != n) throw ShapeError("gauge_transform: matrix is not l^2 x l^2");
    Eigen::VectorXd m(n);
    for (int w = 1; w <= l; ++w)
        for (int v = 1; v <= l; ++v) m(flat_index(w, v, l)) = std::exp(-beta1 * v - beta2 * w);
    DenseComplexMatrix out(n, n);
    for (Eigen::Index y = 0; y < n; ++y)
        for (Eigen::Index x = 0; x < n; ++x) out(x, y) = h(x, y) * (m(y) / m(x));
    return out;
}

std::vector<LocalMaximum> find_maxima(const DensityProfile& profile, double prominence) {
    if (!(prominence > 0.0 && prominence < 1.0)) throw ParameterError("find_maxima: prominence must be in (0,1)");
    const int l = profile.l();
    const double top = profile.grid.maxCoeff();
    std::vector<LocalMaximum> cand;
    for (int w = 1; w <= l; ++w) {
        for (int v = 1; v <= l; ++v) {
            const double x = profile.at(w, v);
            if (!(x > prominence * top)) continue;
            bool peak = true;
            for (int dw = -1; dw <= 1 && peak; ++dw)
                for (int dv = -1; dv <= 1; ++dv) {
                    const int w2 = w + dw, v2 = v + dv;
                    if ((dw || dv) && w2 >= 1 && w2 <= l && v2 >= 1 && v2 <= l && profile.at(w2, v2) > x) {
                        peak = false;
                        break;
                    }
                }
            if (peak) cand.push_back({w, v, x});
        }
    }
    std::stable_sort(cand.begin(), cand.end(), [](const LocalMaximum& a, const LocalMaximum& b) { return a.rho > b.rho; });
    std::vector<LocalMaximum> kept;
    for (const auto& c : cand) {
        const bool near = std::any_of(kept.begin(), kept.end(), [&](const LocalMaximum& k) {
            return std::max(std::abs(k.w - c.w), std::abs(k.v - c.v)) <= 2;
        });
        if (!near) kept.push_back(c);
    }
    return kept;
}

}  // namespace skinlat
