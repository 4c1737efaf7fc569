#pragma once

#include <vector>

#include <Eigen/Dense>

#include "skinlat/eig.hpp"
#include "skinlat/model.hpp"

namespace skinlat {

// Strong-coupling Bloch Hamiltonian of the doublon band:
// (U + J_T / 2) I + d_x sigma_x + d_y sigma_y, J_T = j1 + j2.
Eigen::Matrix2cd effective_ssh_bloch(const ExtendedParams& params, double k);

// Off-diagonal pair of the Bloch matrix:
// h_plus  = d_x + i d_y = j1/2 + (P + j2/2) e^{ik}   (lower-left entry)
// h_minus = d_x - i d_y = j2/2 + (P + j1/2) e^{-ik}  (upper-right entry)
struct SshComponents {
    cplx dx, dy, h_plus, h_minus;
};
SshComponents ssh_components(const ExtendedParams& params, double k);

// |E_+(k) - E_-(k)| = 2 |sqrt(h_plus h_minus)|.
double ssh_gap(const ExtendedParams& params, double k);

struct SshWinding {
    int w_plus = 0;   // winding of h_plus around 0 as k increases
    int w_minus = 0;  // winding of h_minus
    double min_gap = 0.0;
};

inline constexpr double kGaplessTol = 1e-6;

// Both windings; throws GaplessError when the minimal gap is below kGaplessTol.
SshWinding ssh_windings(const ExtendedParams& params, int n_k = 256);

// The reported invariant W: the winding of h_plus.
int ssh_winding(const ExtendedParams& params, int n_k = 256);

struct GapPoint {
    cplx p;
    double min_gap;
    double k_at_min;
};

// Minimal gap over k for each P: 1024-point grid, then Brent refinement
// around the best grid point.
std::vector<GapPoint> gap_scan(const ExtendedParams& params_base, const std::vector<cplx>& p_values);

struct CornerModeReport {
    std::vector<Eigen::Index> in_gap_indices;  // into the EigenSolution given
    std::vector<cplx> energies;
    std::vector<double> weight_first;  // on the 3x3 block at (1,1)
    std::vector<double> weight_last;   // on the 3x3 block at (L,L)
    std::vector<Eigen::VectorXcd> vectors;  // possibly rotated inside degenerate clusters
    double gap_lower = 0.0;
    double gap_upper = 0.0;
    int block = 3;
};

struct CornerModeOptions {
    int block = 3;
    double shrink = 0.05;  // fraction of the gap width removed on each side
};

// In-gap states of a full extended-model spectrum. The gap is the largest gap
// between consecutive real parts of the bound band of the same model under
// periodic boundaries.
CornerModeReport detect_corner_modes(const EigenSolution& sol, const ExtendedParams& params,
                                     CornerModeOptions options = {});

// Real-part interval of the largest gap inside the periodic bound band.
std::pair<double, double> bound_band_gap(const ExtendedParams& params);

}  // namespace skinlat
