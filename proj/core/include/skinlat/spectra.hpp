#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "skinlat/eig.hpp"
#include "skinlat/model.hpp"

namespace skinlat {

// E[qa] + E[qb] with E[q] = -J0 (e^{iq d + beta} + e^{-iq d - beta});
// beta2 belongs to particle a, beta1 to particle b.
cplx free_dispersion(const ModelParams& params, double qa, double qb);

// Closed curve E(t_j), t_j = -pi + 2 pi j / n.
struct SpectralLoop {
    std::vector<cplx> samples;

    cplx centroid() const;
};

using LoopFunction = std::function<cplx(double)>;

SpectralLoop sample_loop(const LoopFunction& e_of_t, int n_samples);

// Free two-body loops. Over K at fixed k the curve is 4 pi periodic in K, so
// the loop parameter is t = K / 2 with qa = t + k, qb = t - k. Over k at fixed
// K: qa = K / 2 + k, qb = K / 2 - k.
LoopFunction free_loop_over_big_k(const ModelParams& params, double k);
LoopFunction free_loop_over_k(const ModelParams& params, double big_k);

// Winding of (E - base) as t increases through the loop. Throws
// DegenerateLoopError if a sample touches base and SamplingError if two
// consecutive samples are more than pi/2 apart in phase.
int winding_number(const SpectralLoop& loop, cplx base);
int winding_number(const SpectralLoop& loop);  // base = centroid

// Adaptive variant: doubles the sample count from n_initial until two
// successive counts agree. base defaults to the centroid of each sampling.
int winding_number(const LoopFunction& e_of_t, std::optional<cplx> base = std::nullopt, int n_initial = 64,
                   int max_samples = 1 << 18);

// Diagonal element g(E) = <0|(H0 - E)^{-1}|0> of the infinite relative chain
// without impurity: -1 / (E sqrt(1 - 4 jL jR / E^2)), principal sqrt, which is
// the continuation from g ~ -1/E at large |E|. The cut is the segment between
// the branch points +-2 sqrt(jL jR).
cplx green_function_diag(cplx jl, cplx jr, cplx e, double branch_eps = 1e-12);

// Same element for the periodic relative ring of l sites at momentum K:
// (1/l) sum_m 1/(eps(k_m) - E), eps(k) = jL e^{-ik} + jR e^{ik},
// k_m = (2 pi m - K l / 2) / l.
cplx green_function_ring(cplx jl, cplx jr, double big_k, int l, cplx e);

enum class GreenKernel {
    Auto,           // ring for periodic params at quantized K, infinite chain otherwise
    InfiniteChain,
    PeriodicRing,
};

struct BoundStateBranch {
    std::vector<double> k_values;
    std::vector<cplx> energies;      // NaN when absent
    std::vector<bool> present;
    std::vector<double> residuals;   // |1 + U g(E)|
    std::vector<int> iterations;
    std::vector<double> band_lower;  // continuum edges of Re eps at each K
    std::vector<double> band_upper;
};

inline constexpr double kPoleTol = 1e-10;

// Solves 1 + U g(K; E) = 0 per K by complex secant from E0 = sqrt(U^2 + 4 jL jR).
BoundStateBranch bound_state_branch(const ModelParams& params, const std::vector<double>& k_grid,
                                    GreenKernel kernel = GreenKernel::Auto);

struct StatePartition {
    std::vector<Eigen::Index> bound;
    std::vector<Eigen::Index> scattering;
    double gap = 0.0;
    double median_gap = 0.0;
};

// Orders states by |E - U| and splits at the largest adjacent gap among the
// first 2L. The gap must exceed 3x the median adjacent gap, otherwise
// ClassificationError.
StatePartition classify_states(const EigenSolution& sol, const ModelParams& params);

// Quantized centre-of-mass momenta 2 pi n / l wrapped into [-pi, pi).
std::vector<double> quantized_momenta(int l);

}  // namespace skinlat
