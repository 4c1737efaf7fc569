#pragma once

// Electrical realization of the two-body lattice. Node (w, v) of an L x L grid
// carries a grounding capacitor C0; diagonal nodes also an inductor L0 to
// ground. Each bond is an INIC (behavioural, signed capacitance C_a) in series
// with an inductor. A series stack seen from its two ends has admittances
//   R1 = R_a / (1 + i w L R_a)    (current out of the start node)
//   R2 = -R_a / (1 - i w L R_a)   (current out of the end node)
// with R_a = i w C_a. Bonds are matched to R_i = -i w C0 J_i, which makes
// L(w) / (i w C0) = (1 - sum J) I - H.

#include <optional>
#include <string>
#include <vector>

#include "skinlat/model.hpp"

namespace skinlat {

struct BondComponents {
    // Signed INIC capacitance; the sign is the orientation (+ start->end).
    // Empty when the two hoppings are equal: the bond is then a bare inductor.
    std::optional<double> c_inic;
    double l_series = 0.0;
};

struct CircuitComponents {
    double omega = 1.0;
    double c0 = 1.0;
    BondComponents a;  // bonds along w (particle a): {C_a, L2}
    BondComponents b;  // bonds along v (particle b): {C_b, L1}
    double l0 = 0.0;   // +inf when u = 0 (no grounding inductor)

    double u_realized() const { return 1.0 / (omega * omega * l0 * c0); }
};

// Admittances (R1, R2) of a series stack at angular frequency omega.
std::pair<cplx, cplx> stack_admittances(const BondComponents& bond, double omega);

struct SolveReport {
    CircuitComponents components;
    double max_relative_residual = 0.0;  // over the four matching conditions
    int newton_iterations = 0;
};

// Damped Newton in (log |C|, log L) per bond direction. Throws InfeasibleError
// for non-positive or complex targets, or when Newton fails from every seed.
SolveReport solve_components_report(const ModelParams& params, double omega, double c0);
CircuitComponents solve_components(const ModelParams& params, double omega, double c0);

// Node admittance matrix I = L V in the flat basis of model.hpp.
DenseComplexMatrix build_laplacian(const CircuitComponents& components, const ModelParams& params);

struct EquivalenceReport {
    cplx alpha;
    cplx sigma;
    double max_dev = 0.0;  // max |L/(i w C0) - alpha I - sigma H|
    Eigen::Index worst_row = 0;
    Eigen::Index worst_col = 0;

    bool passed(double tol) const { return max_dev < tol; }
};

// Least-squares fit of L/(i w C0) by alpha I + sigma H.
EquivalenceReport verify_equivalence(const DenseComplexMatrix& laplacian, const DenseComplexMatrix& hamiltonian,
                                     double omega, double c0);

// Netlist text format, one element per line:
//   * comment / header           (first lines record omega, c0 and the model)
//   C N_w_v GND <farad>
//   L N_w_v GND <henry>
//   INIC N_a N_b <farad> fwd|rev  (series stack: always followed by its inductor)
//   L N_a N_b <henry>
// Values are printed with 17 significant digits.
struct NetlistElement {
    enum class Kind { Capacitor, Inductor, Inic };
    Kind kind;
    std::string node_a;
    std::string node_b;
    double value;
    int orientation = 0;  // INIC only: +1 fwd, -1 rev
};

struct Netlist {
    double omega = 1.0;
    double c0 = 1.0;
    int l = 0;
    std::vector<std::string> header;
    std::vector<NetlistElement> elements;
};

Netlist export_netlist(const CircuitComponents& components, const ModelParams& params);
std::string render_netlist(const Netlist& netlist);
Netlist parse_netlist(const std::string& text);
DenseComplexMatrix laplacian_from_netlist(const Netlist& netlist);

}  // namespace skinlat
