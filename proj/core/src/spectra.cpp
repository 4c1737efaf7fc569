#include "skinlat/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "skinlat/errors.hpp"

namespace skinlat {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

double wrap_phase(double x) {
    return std::remainder(x, 2.0 * kPi);
}

bool quantized(double big_k, int l) {
    return std::abs(std::exp(kI * (big_k * l)) - 1.0) < 1e-9;
}

}  // namespace

cplx free_dispersion(const ModelParams& p, double qa, double qb) {
    const DerivedParams dp = derive(p);
    auto single = [&](double j0, double beta, double q) {
        return -j0 * (std::exp(cplx(beta, q * p.d)) + std::exp(cplx(-beta, -q * p.d)));
    };
    return single(dp.j0a, dp.beta2, qa) + single(dp.j0b, dp.beta1, qb);
}

cplx SpectralLoop::centroid() const {
    cplx s = 0.0;
    for (cplx z : samples) s += z;
    return samples.empty() ? s : s / static_cast<double>(samples.size());
}

SpectralLoop sample_loop(const LoopFunction& e_of_t, int n_samples) {
    if (n_samples < 16) throw ParameterError("sample_loop: n_samples must be >= 16");
    SpectralLoop loop;
    loop.samples.reserve(n_samples);
    for (int j = 0; j < n_samples; ++j) loop.samples.push_back(e_of_t(-kPi + 2.0 * kPi * j / n_samples));
    return loop;
}

LoopFunction free_loop_over_big_k(const ModelParams& params, double k) {
    derive(params);  // validate early
    return [params, k](double t) { return free_dispersion(params, t + k, t - k); };
}

LoopFunction free_loop_over_k(const ModelParams& params, double big_k) {
    derive(params);
    return [params, big_k](double k) { return free_dispersion(params, big_k / 2.0 + k, big_k / 2.0 - k); };
}

int winding_number(const SpectralLoop& loop, cplx base) {
    const auto& s = loop.samples;
    if (s.size() < 16) throw ParameterError("winding_number: loop needs >= 16 samples");
    double scale = 0.0;
    for (cplx z : s) scale = std::max(scale, std::abs(z - base));
    if (scale == 0.0) throw DegenerateLoopError("winding_number: loop collapses onto the base point");
    for (cplx z : s)
        if (std::abs(z - base) <= 1e-12 * scale)
            throw DegenerateLoopError("winding_number: loop passes through the base point");
    double total = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
        const cplx a = s[j] - base;
        const cplx b = s[(j + 1) % s.size()] - base;
        const double step = wrap_phase(std::arg(b) - std::arg(a));
        if (std::abs(step) > kPi / 2.0) throw SamplingError("winding_number: phase step too large, refine the loop");
        total += step;
    }
    return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

int winding_number(const SpectralLoop& loop) { return winding_number(loop, loop.centroid()); }

int winding_number(const LoopFunction& e_of_t, std::optional<cplx> base, int n_initial, int max_samples) {
    bool have_previous = false;
    int previous = 0;
    for (int n = std::max(16, n_initial); n <= max_samples; n *= 2) {
        const SpectralLoop loop = sample_loop(e_of_t, n);
        int w = 0;
        try {
            w = winding_number(loop, base ? *base : loop.centroid());
        } catch (const SamplingError&) {
            have_previous = false;
            continue;
        }
        if (have_previous && previous == w) return w;
        have_previous = true;
        previous = w;
    }
    throw SamplingError("winding_number: refinement did not stabilise up to " + std::to_string(max_samples) +
                        " samples");
}

cplx green_function_diag(cplx jl, cplx jr, cplx e, double branch_eps) {
    const cplx disc = e * e - 4.0 * jl * jr;
    const double scale = std::max({1.0, std::norm(e), std::abs(4.0 * jl * jr)});
    if (std::abs(disc) < branch_eps * scale)
        throw NearSingularError("green_function_diag: energy at a branch point");
    if (e == cplx(0.0)) return -1.0 / std::sqrt(disc);  // only reached when jl*jr != 0
    return -1.0 / (e * std::sqrt(1.0 - 4.0 * jl * jr / (e * e)));
}

cplx green_function_ring(cplx jl, cplx jr, double big_k, int l, cplx e) {
    if (l < 1) throw ParameterError("green_function_ring: l must be >= 1");
    cplx sum = 0.0;
    for (int m = 0; m < l; ++m) {
        const double k = (2.0 * kPi * m - big_k * l / 2.0) / l;
        const cplx eps = jl * std::exp(-kI * k) + jr * std::exp(kI * k);
        const cplx den = eps - e;
        if (std::abs(den) < 1e-14 * std::max(1.0, std::abs(e)))
            throw NearSingularError("green_function_ring: energy on a ring eigenvalue");
        sum += 1.0 / den;
    }
    return sum / static_cast<double>(l);
}

BoundStateBranch bound_state_branch(const ModelParams& params, const std::vector<double>& k_grid,
                                    GreenKernel kernel) {
    params.validate();
    if (!(params.u > 0.0)) throw ParameterError("bound_state_branch: u must be > 0");
    BoundStateBranch out;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (double big_k : k_grid) {
        if (!(big_k >= -kPi && big_k < kPi)) throw RangeError("bound_state_branch: K outside [-pi, pi)");
        const RelativeHoppings jj = hopping_coefficients(params, big_k);
        bool ring = kernel == GreenKernel::PeriodicRing;
        if (kernel == GreenKernel::Auto)
            ring = params.boundary == Boundary::Periodic && quantized(big_k, params.l);

        auto f = [&](cplx e) {
            const cplx g = ring ? green_function_ring(jj.left, jj.right, big_k, params.l, e)
                                : green_function_diag(jj.left, jj.right, e);
            return 1.0 + params.u * g;
        };

        cplx e0 = std::sqrt(params.u * params.u + 4.0 * jj.left * jj.right);
        if (e0.real() < 0.0) e0 = -e0;
        cplx e1 = e0 * (1.0 + 1e-6) + 1e-6;
        bool ok = true;
        int it = 0;
        cplx root = e0;
        double res = std::numeric_limits<double>::infinity();
        try {
            cplx f0 = f(e0);
            cplx f1 = f(e1);
            for (it = 0; it < 100; ++it) {
                if (std::abs(f1) < 1e-14) break;
                const cplx df = f1 - f0;
                if (df == cplx(0.0)) break;
                const cplx e2 = e1 - f1 * (e1 - e0) / df;
                e0 = e1;
                f0 = f1;
                e1 = e2;
                f1 = f(e1);
                if (std::abs(e1 - e0) < 1e-15 * std::max(1.0, std::abs(e1))) break;
            }
            root = e1;
            res = std::abs(f1);
        } catch (const NearSingularError&) {
            ok = false;
        }
        if (ok && !ring) {
            // Bound if the decaying root of jR z^2 - E z + jL is strictly the smaller one.
            // same branch as green_function_diag, so that s = U at the pole
            const cplx s = root * std::sqrt(1.0 - 4.0 * jj.left * jj.right / (root * root));
            const double zm = std::abs((root - s) / (2.0 * jj.right));
            const double zp = std::abs((root + s) / (2.0 * jj.right));
            if (jj.right == cplx(0.0) || !(zm < zp * (1.0 - 1e-9))) ok = false;
        }
        ok = ok && res < kPoleTol;

        out.k_values.push_back(big_k);
        out.present.push_back(ok);
        out.energies.push_back(ok ? root : cplx(nan, nan));
        out.residuals.push_back(res);
        out.iterations.push_back(it);
        const double edge = std::abs(jj.right + std::conj(jj.left));
        out.band_lower.push_back(-edge);
        out.band_upper.push_back(edge);
    }
    return out;
}

StatePartition classify_states(const EigenSolution& sol, const ModelParams& params) {
    if (!(params.u > 0.0)) throw ClassificationError("classify_states: no bound states without interaction");
    const Eigen::Index n = sol.values.size();
    if (n < 3) throw ClassificationError("classify_states: spectrum too small");

    std::vector<Eigen::Index> order(n);
    for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
    auto key = [&](Eigen::Index i) { return std::abs(sol.values(i) - params.u); };
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return key(a) < key(b); });

    std::vector<double> gaps(n - 1);
    for (Eigen::Index i = 0; i + 1 < n; ++i) gaps[i] = key(order[i + 1]) - key(order[i]);
    const Eigen::Index window = std::min<Eigen::Index>(2 * params.l, n - 1);
    const auto best = std::max_element(gaps.begin(), gaps.begin() + window);
    std::vector<double> sorted = gaps;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double median = sorted[sorted.size() / 2];
    if (!(*best > 3.0 * median) || *best <= 0.0)
        throw ClassificationError("classify_states: no gap separates bound from scattering states (largest " +
                                  std::to_string(*best) + ", median " + std::to_string(median) + ")");

    StatePartition out;
    out.gap = *best;
    out.median_gap = median;
    const Eigen::Index cut = (best - gaps.begin()) + 1;
    out.bound.assign(order.begin(), order.begin() + cut);
    out.scattering.assign(order.begin() + cut, order.end());
    std::sort(out.bound.begin(), out.bound.end());
    std::sort(out.scattering.begin(), out.scattering.end());
    return out;
}

std::vector<double> quantized_momenta(int l) {
    if (l < 1) throw ParameterError("quantized_momenta: l must be >= 1");
    std::vector<double> ks;
    for (int n = 0; n < l; ++n) {
        double k = 2.0 * kPi * n / l;
        if (k >= kPi) k -= 2.0 * kPi;
        ks.push_back(k);
    }
    std::sort(ks.begin(), ks.end());
    return ks;
}

}  // namespace skinlat
