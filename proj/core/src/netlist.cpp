#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>

#include "skinlat/circuit.hpp"
#include "skinlat/errors.hpp"

namespace skinlat {

namespace {

const cplx kI(0.0, 1.0);

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt(cplx z) { return "(" + fmt(z.real()) + "," + fmt(z.imag()) + ")"; }

std::string node(int w, int v) { return "N_" + std::to_string(w) + "_" + std::to_string(v); }

bool parse_node(const std::string& s, int& w, int& v) {
    if (s.rfind("N_", 0) != 0) return false;
    const auto mid = s.find('_', 2);
    if (mid == std::string::npos) return false;
    try {
        std::size_t p1 = 0, p2 = 0;
        const std::string a = s.substr(2, mid - 2), b = s.substr(mid + 1);
        w = std::stoi(a, &p1);
        v = std::stoi(b, &p2);
        return p1 == a.size() && p2 == b.size() && w >= 1 && v >= 1;
    } catch (const std::exception&) {
        return false;
    }
}

double parse_value(const std::string& tok, int line) {
    char* end = nullptr;
    const double x = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0' || !std::isfinite(x))
        throw NetlistParseError("netlist line " + std::to_string(line) + ": bad value '" + tok + "'");
    return x;
}

void emit_bond(Netlist& nl, const BondComponents& bond, const std::string& a, const std::string& b) {
    if (bond.c_inic) {
        const double c = *bond.c_inic;
        nl.elements.push_back({NetlistElement::Kind::Inic, a, b, std::abs(c), c >= 0.0 ? 1 : -1});
    }
    nl.elements.push_back({NetlistElement::Kind::Inductor, a, b, bond.l_series, 0});
}

}  // namespace

Netlist export_netlist(const CircuitComponents& comp, const ModelParams& params) {
    params.validate();
    const int l = params.l;
    const bool periodic = params.boundary == Boundary::Periodic;
    Netlist nl;
    nl.omega = comp.omega;
    nl.c0 = comp.c0;
    nl.l = l;
    nl.header.push_back("skinlat circuit netlist v1; node N_w_v is site w of particle a, site v of particle b");
    nl.header.push_back("omega=" + fmt(comp.omega) + " c0=" + fmt(comp.c0));
    nl.header.push_back("model l=" + std::to_string(l) + " boundary=" + to_string(params.boundary) +
                        " u=" + fmt(params.u) + " j1a=" + fmt(params.j1a) + " j2a=" + fmt(params.j2a) +
                        " j1b=" + fmt(params.j1b) + " j2b=" + fmt(params.j2b));

    for (int w = 1; w <= l; ++w)
        for (int v = 1; v <= l; ++v)
            nl.elements.push_back({NetlistElement::Kind::Capacitor, node(w, v), "GND", comp.c0, 0});
    if (std::isfinite(comp.l0))
        for (int t = 1; t <= l; ++t)
            nl.elements.push_back({NetlistElement::Kind::Inductor, node(t, t), "GND", comp.l0, 0});
    for (int w = 1; w <= l; ++w) {
        for (int v = 1; v <= l; ++v) {
            if (w < l || periodic) emit_bond(nl, comp.a, node(w, v), node(w % l + 1, v));
            if (v < l || periodic) emit_bond(nl, comp.b, node(w, v), node(w, v % l + 1));
        }
    }
    return nl;
}

std::string render_netlist(const Netlist& nl) {
    std::ostringstream out;
    for (const auto& h : nl.header) out << "* " << h << "\n";
    for (const auto& e : nl.elements) {
        switch (e.kind) {
            case NetlistElement::Kind::Capacitor: out << "C"; break;
            case NetlistElement::Kind::Inductor: out << "L"; break;
            case NetlistElement::Kind::Inic: out << "INIC"; break;
        }
        out << " " << e.node_a << " " << e.node_b << " " << fmt(e.value);
        if (e.kind == NetlistElement::Kind::Inic) out << (e.orientation > 0 ? " fwd" : " rev");
        out << "\n";
    }
    return out.str();
}

Netlist parse_netlist(const std::string& text) {
    Netlist nl;
    bool have_omega = false;
    int declared_l = 0;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '*') {
            std::string body = line.substr(1);
            if (!body.empty() && body[0] == ' ') body.erase(0, 1);
            nl.header.push_back(body);
            std::istringstream hs(body);
            std::string tok;
            while (hs >> tok) {
                if (tok.rfind("omega=", 0) == 0) {
                    nl.omega = parse_value(tok.substr(6), lineno);
                    have_omega = true;
                } else if (tok.rfind("c0=", 0) == 0) {
                    nl.c0 = parse_value(tok.substr(3), lineno);
                } else if (tok.rfind("l=", 0) == 0) {
                    const double x = parse_value(tok.substr(2), lineno);
                    if (x < 1 || x != std::floor(x))
                        throw NetlistParseError("netlist line " + std::to_string(lineno) + ": bad l");
                    declared_l = static_cast<int>(x);
                }
            }
            continue;
        }
        std::istringstream ls(line);
        std::string kind, a, b, value, orient, extra;
        if (!(ls >> kind >> a >> b >> value))
            throw NetlistParseError("netlist line " + std::to_string(lineno) + ": expected KIND nodeA nodeB value");
        NetlistElement e{NetlistElement::Kind::Capacitor, a, b, parse_value(value, lineno), 0};
        if (kind == "C") {
            e.kind = NetlistElement::Kind::Capacitor;
        } else if (kind == "L") {
            e.kind = NetlistElement::Kind::Inductor;
        } else if (kind == "INIC") {
            e.kind = NetlistElement::Kind::Inic;
            if (!(ls >> orient) || (orient != "fwd" && orient != "rev"))
                throw NetlistParseError("netlist line " + std::to_string(lineno) + ": INIC needs fwd|rev");
            e.orientation = orient == "fwd" ? 1 : -1;
        } else {
            throw NetlistParseError("netlist line " + std::to_string(lineno) + ": unknown element '" + kind + "'");
        }
        if (ls >> extra) throw NetlistParseError("netlist line " + std::to_string(lineno) + ": trailing tokens");
        int w = 0, v = 0;
        for (const auto* nd : {&e.node_a, &e.node_b}) {
            if (*nd == "GND") continue;
            if (!parse_node(*nd, w, v))
                throw NetlistParseError("netlist line " + std::to_string(lineno) + ": bad node '" + *nd + "'");
            nl.l = std::max({nl.l, w, v});
        }
        if (e.node_a == "GND") throw NetlistParseError("netlist line " + std::to_string(lineno) + ": GND as first node");
        nl.elements.push_back(std::move(e));
    }
    if (!have_omega) throw NetlistParseError("netlist: header lacks omega=");
    if (nl.l < 1) throw NetlistParseError("netlist: no lattice nodes");
    if (declared_l > 0) {
        if (nl.l > declared_l) throw NetlistParseError("netlist: node index beyond header l=" + std::to_string(declared_l));
        nl.l = declared_l;
    }
    return nl;
}

DenseComplexMatrix laplacian_from_netlist(const Netlist& nl) {
    const int l = nl.l;
    const Eigen::Index n = static_cast<Eigen::Index>(l) * l;
    DenseComplexMatrix lap = DenseComplexMatrix::Zero(n, n);
    auto index = [&](const std::string& s) {
        int w = 0, v = 0;
        if (!parse_node(s, w, v) || w > l || v > l) throw NetlistParseError("netlist: bad node '" + s + "'");
        return flat_index(w, v, l);
    };
    auto admittance = [&](const NetlistElement& e) -> cplx {
        return e.kind == NetlistElement::Kind::Capacitor ? kI * nl.omega * e.value : 1.0 / (kI * nl.omega * e.value);
    };
    const auto& el = nl.elements;
    for (std::size_t i = 0; i < el.size(); ++i) {
        const auto& e = el[i];
        const int a = index(e.node_a);
        if (e.node_b == "GND") {
            if (e.kind == NetlistElement::Kind::Inic) throw NetlistParseError("netlist: INIC to ground");
            lap(a, a) += admittance(e);
            continue;
        }
        const int b = index(e.node_b);
        cplx r1, r2;
        if (e.kind == NetlistElement::Kind::Inic) {
            if (i + 1 >= el.size() || el[i + 1].kind != NetlistElement::Kind::Inductor || el[i + 1].node_a != e.node_a ||
                el[i + 1].node_b != e.node_b)
                throw NetlistParseError("netlist: INIC without its series inductor");
            BondComponents bond{e.orientation * e.value, el[i + 1].value};
            std::tie(r1, r2) = stack_admittances(bond, nl.omega);
            ++i;
        } else {
            r1 = r2 = admittance(e);
        }
        lap(a, a) += r1;
        lap(a, b) -= r1;
        lap(b, b) += r2;
        lap(b, a) -= r2;
    }
    return lap;
}

}  // namespace skinlat
