#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "skinlat/model.hpp"

namespace skinlat {

// rho(w, v) = |psi(a_w, b_v)|^2 stored at grid(w - 1, v - 1).
struct DensityProfile {
    Eigen::MatrixXd grid;
    double total = 0.0;
    cplx source_energy{0.0};

    int l() const { return static_cast<int>(grid.rows()); }
    double at(int w, int v) const { return grid(w - 1, v - 1); }
};

DensityProfile density(const Eigen::VectorXcd& vector, int l, cplx source_energy = 0.0);

struct CutPoint {
    int r;
    double rho;
};

// rho(w, fixed_v) with r = w - fixed_v.
std::vector<CutPoint> relative_cut(const DensityProfile& profile, int fixed_v);

// rho(t, t), t = 1..L.
std::vector<CutPoint> center_of_mass_profile(const DensityProfile& profile);

enum class FitSide { Left, Right, Both };

struct OneSidedFit {
    double eta = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    int min_abs_r = 0;
    int max_abs_r = 0;
    int points = 0;
};

struct ScalingFit {
    double eta = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    int min_abs_r = 0;  // fit window in |r|
    int max_abs_r = 0;
    // Filled for Both (and for the matching side otherwise).
    std::optional<OneSidedFit> left;
    std::optional<OneSidedFit> right;
};

inline constexpr double kDensityFloor = 1e-14;

// Least squares of ln rho against |r| on the requested side (Left: r < 0,
// Right: r > 0). Excluded: r = 0, points below kDensityFloor and the two
// outermost points of each side. Both averages the two one-sided fits.
// Throws FitError with fewer than 4 usable points on a side.
ScalingFit fit_scaling_factor(const std::vector<CutPoint>& cut, FitSide side);

// M^{-1} H M with M(w, v) = exp(-beta1 v - beta2 w).
DenseComplexMatrix gauge_transform(const DenseComplexMatrix& h, double beta1, double beta2, int l);

struct LocalMaximum {
    int w;
    int v;
    double rho;
};

// Strict-or-equal maxima over 8-neighbourhoods that exceed prominence * global
// max; maxima within Chebyshev distance 2 are merged (the higher survives).
// Sorted by rho descending.
std::vector<LocalMaximum> find_maxima(const DensityProfile& profile, double prominence = 0.3);

}  // namespace skinlat
