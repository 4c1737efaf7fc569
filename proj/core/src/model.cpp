#include "skinlat/model.hpp"

#include <cmath>
#include <string>

#include "skinlat/errors.hpp"

namespace skinlat {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_finite(cplx z, const char* name) {
    if (!finite(z)) throw ParameterError(std::string(name) + ": not finite");
}

// Wraps a 1-based site index onto the ring, or returns 0 when it falls off an open chain.
int neighbour(int site, int l, bool periodic) {
    if (site >= 1 && site <= l) return site;
    if (!periodic) return 0;
    return (site - 1 + l) % l + 1;
}

}  // namespace

const char* to_string(Boundary b) noexcept {
    return b == Boundary::Periodic ? "pbc" : "obc";
}

void ModelParams::validate() const {
    if (l < 2) throw ParameterError("l: must be >= 2");
    if (!std::isfinite(u) || u < 0.0) throw ParameterError("u: must be finite and >= 0");
    if (!std::isfinite(d) || d <= 0.0) throw ParameterError("d: must be > 0");
    require_finite(j1a, "j1a");
    require_finite(j2a, "j2a");
    require_finite(j1b, "j1b");
    require_finite(j2b, "j2b");
}

ModelParams ModelParams::uniform(double j, double u, int l, Boundary boundary) {
    return symmetric(j, j, u, l, boundary);
}

ModelParams ModelParams::symmetric(cplx j1, cplx j2, double u, int l, Boundary boundary) {
    ModelParams p;
    p.j1a = p.j1b = j1;
    p.j2a = p.j2b = j2;
    p.u = u;
    p.l = l;
    p.boundary = boundary;
    return p;
}

bool has_positive_real_hoppings(const ModelParams& p) noexcept {
    for (cplx j : {p.j1a, p.j2a, p.j1b, p.j2b}) {
        if (j.imag() != 0.0 || !(j.real() > 0.0)) return false;
    }
    return true;
}

DerivedParams derive(const ModelParams& p) {
    for (cplx j : {p.j1a, p.j2a, p.j1b, p.j2b}) {
        if (j == cplx(0.0)) throw SingularParameterError("zero hopping amplitude");
    }
    if (!has_positive_real_hoppings(p))
        throw ParameterError("beta/gamma are only defined for positive real hoppings");
    DerivedParams out{};
    out.j0a = std::sqrt(p.j1a.real() * p.j2a.real());
    out.j0b = std::sqrt(p.j1b.real() * p.j2b.real());
    out.beta2 = 0.5 * std::log(p.j1a.real() / p.j2a.real());
    out.beta1 = 0.5 * std::log(p.j1b.real() / p.j2b.real());
    out.gamma1 = 2.0 * out.beta1 / p.d;
    out.gamma2 = 2.0 * out.beta2 / p.d;
    return out;
}

void ExtendedParams::validate() const {
    if (l < 4 || l % 2 != 0) throw ParameterError("l: must be even and >= 4");
    if (!std::isfinite(u) || u < 0.0) throw ParameterError("u: must be finite and >= 0");
    require_finite(j1, "j1");
    require_finite(j2, "j2");
    require_finite(p, "p");
}

ModelParams ExtendedParams::base() const {
    return ModelParams::symmetric(j1, j2, u, l, boundary);
}

int flat_index(int w, int v, int l) {
    if (l < 1 || w < 1 || w > l || v < 1 || v > l)
        throw RangeError("flat_index: site (" + std::to_string(w) + "," + std::to_string(v) +
                         ") outside 1.." + std::to_string(l));
    return (w - 1) * l + (v - 1);
}

std::pair<int, int> site_of(int index, int l) {
    if (l < 1 || index < 0 || index >= l * l)
        throw RangeError("site_of: index " + std::to_string(index) + " outside lattice");
    return {index / l + 1, index % l + 1};
}

DenseComplexMatrix build_two_body_hamiltonian(const ModelParams& params) {
    params.validate();
    const int l = params.l;
    const bool periodic = params.boundary == Boundary::Periodic;
    DenseComplexMatrix h = DenseComplexMatrix::Zero(l * l, l * l);

    for (int w = 1; w <= l; ++w) {
        for (int v = 1; v <= l; ++v) {
            const int row = flat_index(w, v, l);
            if (int x = neighbour(w + 1, l, periodic)) h(row, flat_index(x, v, l)) += -params.j1a;
            if (int x = neighbour(w - 1, l, periodic)) h(row, flat_index(x, v, l)) += -params.j2a;
            if (int x = neighbour(v + 1, l, periodic)) h(row, flat_index(w, x, l)) += -params.j1b;
            if (int x = neighbour(v - 1, l, periodic)) h(row, flat_index(w, x, l)) += -params.j2b;
        }
    }
    for (int t = 1; t <= l; ++t) h(flat_index(t, t, l), flat_index(t, t, l)) += params.u;
    return h;
}

RelativeHoppings hopping_coefficients(const ModelParams& p, double big_k) {
    for (cplx j : {p.j1a, p.j2a, p.j1b, p.j2b}) {
        if (j == cplx(0.0)) throw SingularParameterError("hopping_coefficients: zero hopping");
    }
    const cplx i(0.0, 1.0);
    const cplx j0a = std::sqrt(p.j1a * p.j2a);
    const cplx j0b = std::sqrt(p.j1b * p.j2b);
    const cplx beta2 = 0.5 * std::log(p.j1a / p.j2a);
    const cplx beta1 = 0.5 * std::log(p.j1b / p.j2b);
    const cplx theta1 = big_k - i * (2.0 * beta1 / p.d);
    const cplx theta2 = big_k - i * (2.0 * beta2 / p.d);
    const double h = p.d / 2.0;
    RelativeHoppings out;
    out.left = -j0b * std::exp(i * theta1 * h) - j0a * std::exp(-i * theta2 * h);
    out.right = -j0b * std::exp(-i * theta1 * h) - j0a * std::exp(i * theta2 * h);
    return out;
}

DenseComplexMatrix build_relative_chain(const ModelParams& params, double big_k, int halfwidth) {
    if (halfwidth < 1) throw ParameterError("halfwidth: must be >= 1");
    const RelativeHoppings jj = hopping_coefficients(params, big_k);
    const int n = 2 * halfwidth + 1;
    DenseComplexMatrix h = DenseComplexMatrix::Zero(n, n);
    for (int x = 0; x < n; ++x) {
        if (x > 0) h(x, x - 1) = jj.left;
        if (x + 1 < n) h(x, x + 1) = jj.right;
    }
    h(halfwidth, halfwidth) = params.u;
    return h;
}

DenseComplexMatrix build_relative_ring(const ModelParams& params, double big_k) {
    params.validate();
    const int l = params.l;
    if (l < 3) throw ParameterError("l: relative ring needs l >= 3");
    const RelativeHoppings jj = hopping_coefficients(params, big_k);
    const cplx twist = std::exp(cplx(0.0, big_k * l / 2.0));
    DenseComplexMatrix h = DenseComplexMatrix::Zero(l, l);
    for (int x = 0; x < l; ++x) {
        if (x > 0) h(x, x - 1) = jj.left;
        if (x + 1 < l) h(x, x + 1) = jj.right;
    }
    h(0, l - 1) = jj.left * twist;
    h(l - 1, 0) = jj.right / twist;
    h(0, 0) = params.u;
    return h;
}

DenseComplexMatrix build_extended_hamiltonian(const ExtendedParams& params) {
    params.validate();
    DenseComplexMatrix h = build_two_body_hamiltonian(params.base());
    const int l = params.l;
    const cplx rev = params.conjugation == PairConjugation::Conjugate ? std::conj(params.p) : params.p;
    auto pair = [&](int s, int t) {
        const int a = flat_index(s, s, l);
        const int b = flat_index(t, t, l);
        h(a, b) += params.p;
        h(b, a) += rev;
    };
    for (int m = 1; m <= l / 2 - 1; ++m) pair(2 * m, 2 * m + 1);
    if (params.boundary == Boundary::Periodic) pair(l, 1);
    return h;
}

}  // namespace skinlat
