#include "runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "skinlat/circuit.hpp"
#include "skinlat/errors.hpp"
#include "skinlat/localization.hpp"
#include "skinlat/spectra.hpp"
#include "skinlat/threads.hpp"
#include "skinlat/topo.hpp"
#include "writers.hpp"

namespace skinlat::cli {

namespace {

using nlohmann::json;
constexpr double kPi = std::numbers::pi;

json tagged(const ExperimentConfig& c) {
    return json{{"schema", kSchemaTag}, {"experiment", c.experiment}, {"name", c.name}};
}

bool wants(const ExperimentConfig& c, const char* format) { return c.formats.count(format) > 0; }

EigCheck check_of(const DenseComplexMatrix& h, const EigenSolution& sol, const std::string& label) {
    EigCheck ck;
    ck.label = label;
    ck.n = sol.size();
    ck.worst_residual = sol.worst_residual();
    ck.bound = kDefaultEigTol * sol.frobenius_norm;
    ck.trace_error = std::abs(sol.values.sum() - h.trace());
    ck.trace_bound = kDefaultEigTol * sol.frobenius_norm * std::sqrt(static_cast<double>(ck.n));
    ck.hermitian = (h - h.adjoint()).cwiseAbs().maxCoeff() == 0.0;
    ck.max_imag = sol.values.imag().cwiseAbs().maxCoeff();
    return ck;
}

EigenSolution solve(const DenseComplexMatrix& h, const std::string& label, std::vector<EigCheck>& checks) {
    EigenSolution sol = eigendecompose(h);
    checks.push_back(check_of(h, sol, label));
    return sol;
}

json check_json(const EigCheck& c) {
    return json{{"label", c.label},
                {"n", c.n},
                {"worst_residual", c.worst_residual},
                {"bound", c.bound},
                {"trace_error", c.trace_error},
                {"trace_bound", c.trace_bound},
                {"hermitian", c.hermitian},
                {"max_imag", c.max_imag},
                {"passed", c.passed()}};
}

std::string suffix(std::size_t i) { return i == 0 ? "" : "_" + std::to_string(i); }

const char* class_name(StateClass c) {
    switch (c) {
        case StateClass::Bound: return "bound";
        case StateClass::Scattering: return "scattering";
        default: return "any";
    }
}

// Bound/scattering label per state, or empty when the spectrum cannot be split.
std::vector<std::string> state_classes(const EigenSolution& sol, const ModelParams& params) {
    if (!(params.u > 0.0)) return {};
    try {
        const StatePartition part = classify_states(sol, params);
        std::vector<std::string> out(sol.size(), "scattering");
        for (auto i : part.bound) out[i] = "bound";
        return out;
    } catch (const ClassificationError&) {
        return {};
    }
}

void add_profile(RunResult& r, const ExperimentConfig& c, const DensityProfile& d, const std::string& sfx,
                 HeatmapScale scale) {
    const int l = d.l();
    if (wants(c, "csv")) {
        CsvTable t({"w", "v", "rho"});
        for (int w = 1; w <= l; ++w)
            for (int v = 1; v <= l; ++v) t.row().add(w).add(v).add(d.at(w, v));
        r.artifacts.push_back({"density" + sfx + ".csv", t.str()});
        CsvTable com({"t", "rho"});
        for (const auto& p : center_of_mass_profile(d)) com.row().add(p.r).add(p.rho);
        r.artifacts.push_back({"com" + sfx + ".csv", com.str()});
    }
    if (wants(c, "pgm")) r.artifacts.push_back({"density" + sfx + ".pgm", heatmap_pgm(d, scale)});
    if (wants(c, "svg")) r.artifacts.push_back({"density" + sfx + ".svg", heatmap_svg(d, scale)});
}

json profile_summary(const DensityProfile& d, double prominence) {
    const int l = d.l();
    json maxima = json::array();
    for (const auto& m : find_maxima(d, prominence)) maxima.push_back({{"w", m.w}, {"v", m.v}, {"rho", m.rho}});
    const auto com = center_of_mass_profile(d);
    int argmax = 1;
    double asym = 0.0, mean = 0.0, var = 0.0;
    for (int t = 1; t <= l; ++t) {
        if (com[t - 1].rho > com[argmax - 1].rho) argmax = t;
        asym = std::max(asym, std::abs(com[t - 1].rho - com[l - t].rho));
        mean += com[t - 1].rho / l;
    }
    for (const auto& p : com) var += (p.rho - mean) * (p.rho - mean) / l;
    return json{{"total", d.total},
                {"energy", complex_json(d.source_energy)},
                {"maxima", maxima},
                {"com_argmax", argmax},
                {"com_central_asymmetry", asym},
                {"diagonal_rel_std", mean > 0.0 ? std::sqrt(var) / mean : 0.0}};
}

HeatmapScale heatmap_scale(const ExperimentConfig& c) {
    return param_string(c, "scale", {"linear", "log"}, "linear") == "log" ? HeatmapScale::Log : HeatmapScale::Linear;
}

// ---------------------------------------------------------------- spectrum

RunResult spectrum(const ExperimentConfig& c) {
    RunResult r;
    const std::vector<double> us = c.params.contains("u_values") ? param_numbers(c, "u_values") : std::vector<double>{c.model.u};
    struct Slot {
        EigenSolution sol;
        EigCheck check;
        std::vector<std::string> classes;
    };
    std::vector<Slot> slots(us.size());
    parallel_for(us.size(), [&](std::size_t i) {
        ModelParams p = c.model;
        p.u = us[i];
        const auto h = build_two_body_hamiltonian(p);
        slots[i].sol = eigendecompose(h);
        slots[i].check = check_of(h, slots[i].sol, "spectrum u=" + format_number(us[i]));
        slots[i].classes = state_classes(slots[i].sol, p);
    });

    CsvTable t({"u", "index", "re", "im", "class"});
    json per_u = json::array();
    for (std::size_t i = 0; i < us.size(); ++i) {
        const auto& s = slots[i];
        r.checks.push_back(s.check);
        int bound = 0;
        for (Eigen::Index k = 0; k < s.sol.size(); ++k) {
            const std::string cls = s.classes.empty() ? "unclassified" : s.classes[k];
            bound += cls == "bound";
            t.row().add(us[i]).add(static_cast<long long>(k)).add(s.sol.values(k).real()).add(s.sol.values(k).imag()).add(cls);
        }
        per_u.push_back({{"u", us[i]},
                         {"n", s.sol.size()},
                         {"max_real", s.sol.values(0).real()},
                         {"min_real", s.sol.values(s.sol.size() - 1).real()},
                         {"classified", !s.classes.empty()},
                         {"bound_count", bound}});
    }
    if (wants(c, "csv")) r.artifacts.push_back({"spectrum.csv", t.str()});
    r.summary = tagged(c);
    r.summary["spectra"] = per_u;
    return r;
}

// ---------------------------------------------------------------- density

RunResult density_experiment(const ExperimentConfig& c) {
    RunResult r;
    const double prominence = param_number(c, "prominence", 0.3);
    const auto h = build_two_body_hamiltonian(c.model);
    const auto sol = solve(h, "density", r.checks);
    json states = json::array();
    for (std::size_t i = 0; i < c.selections.size(); ++i) {
        const auto& s = c.selections[i];
        const Eigen::Index idx = select_state(sol, c.model, s);
        const auto d = density(sol.right_vectors.col(idx), c.model.l, sol.values(idx));
        add_profile(r, c, d, suffix(i), heatmap_scale(c));
        json st = profile_summary(d, prominence);
        st["index"] = idx;
        st["label"] = s.label;
        st["class_filter"] = class_name(s.state_class);
        states.push_back(st);
    }
    r.summary = tagged(c);
    r.summary["prominence"] = prominence;
    r.summary["states"] = states;
    return r;
}

// ---------------------------------------------------------------- winding

RunResult winding_experiment(const ExperimentConfig& c) {
    RunResult r;
    const std::string loop = param_string(c, "loop", {"big_k", "k"}, "big_k");
    const double fixed = param_number(c, "fixed", 0.0);
    const int samples = param_int(c, "samples", 256);
    std::optional<cplx> base;
    if (c.params.contains("base")) base = parse_complex(c.params.at("base"), "params.base");
    const LoopFunction f = loop == "big_k" ? free_loop_over_big_k(c.model, fixed) : free_loop_over_k(c.model, fixed);
    const int w = winding_number(f, base);

    const SpectralLoop sampled = sample_loop(f, samples);
    if (wants(c, "csv")) {
        CsvTable t({"t", "re", "im"});
        for (int j = 0; j < samples; ++j) {
            const double tt = -kPi + 2.0 * kPi * j / samples;
            t.row().add(tt).add(sampled.samples[j].real()).add(sampled.samples[j].imag());
        }
        r.artifacts.push_back({"loop.csv", t.str()});
    }
    const auto d = derive(c.model);
    r.summary = tagged(c);
    r.summary["w"] = w;
    r.summary["loop"] = loop;
    r.summary["fixed"] = fixed;
    r.summary["base"] = base ? complex_json(*base) : complex_json(sampled.centroid());
    r.summary["beta1"] = d.beta1;
    r.summary["beta2"] = d.beta2;
    return r;
}

// ---------------------------------------------------------------- bound branch

RunResult bound_branch_experiment(const ExperimentConfig& c) {
    RunResult r;
    std::vector<double> ks;
    if (c.params.contains("k_values")) {
        ks = param_numbers(c, "k_values");
    } else if (c.params.contains("n_k") || c.model.boundary == Boundary::Open) {
        const int n = param_int(c, "n_k", 128);
        for (int j = 0; j < n; ++j) ks.push_back(-kPi + 2.0 * kPi * j / n);
    } else {
        ks = quantized_momenta(c.model.l);
    }
    const std::string kname = param_string(c, "kernel", {"auto", "infinite", "ring"}, "auto");
    const GreenKernel kernel =
        kname == "infinite" ? GreenKernel::InfiniteChain : kname == "ring" ? GreenKernel::PeriodicRing : GreenKernel::Auto;
    const auto br = bound_state_branch(c.model, ks, kernel);

    CsvTable t({"K", "re", "im", "present", "residual", "band_lower", "band_upper"});
    double worst = 0.0;
    int present = 0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        t.row()
            .add(ks[i])
            .add(br.energies[i].real())
            .add(br.energies[i].imag())
            .add(static_cast<int>(br.present[i]))
            .add(br.residuals[i])
            .add(br.band_lower[i])
            .add(br.band_upper[i]);
        if (br.present[i]) {
            ++present;
            worst = std::max(worst, br.residuals[i]);
        }
    }
    if (wants(c, "csv")) r.artifacts.push_back({"bound_branch.csv", t.str()});
    r.summary = tagged(c);
    r.summary["kernel"] = kname;
    r.summary["points"] = ks.size();
    r.summary["present"] = present;
    r.summary["worst_pole_residual"] = worst;
    return r;
}

// ---------------------------------------------------------------- scaling

RunResult scaling_experiment(const ExperimentConfig& c) {
    RunResult r;
    std::string sweep = "none";
    std::vector<double> values{0.0};
    for (const char* key : {"u_values", "j_values", "l_values"})
        if (c.params.contains(key)) {
            sweep = key;
            values = param_numbers(c, key);
        }
    const std::string side_name = param_string(c, "side", {"both", "left", "right"}, "both");
    const FitSide side = side_name == "left" ? FitSide::Left : side_name == "right" ? FitSide::Right : FitSide::Both;

    struct Slot {
        ModelParams p;
        EigenSolution sol;
        EigCheck check;
        Eigen::Index idx = 0;
        int fixed_v = 1;
    };
    std::vector<Slot> slots(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        ModelParams p = c.model;
        if (sweep == "u_values") p.u = values[i];
        if (sweep == "j_values") p.j1a = p.j2a = p.j1b = p.j2b = values[i];
        if (sweep == "l_values") p.l = static_cast<int>(values[i]);
        slots[i].p = p;
        slots[i].fixed_v = sweep == "l_values" ? (p.l + 1) / 2 : param_int(c, "fixed_v", (p.l + 1) / 2);
    }
    parallel_for(values.size(), [&](std::size_t i) {
        auto& s = slots[i];
        const auto h = build_two_body_hamiltonian(s.p);
        s.sol = eigendecompose(h);
        s.check = check_of(h, s.sol, "scaling " + sweep + "=" + format_number(values[i]));
        s.idx = select_state(s.sol, s.p, c.selections.front());
    });

    CsvTable cut_csv({"value", "r", "rho"});
    CsvTable com_csv({"value", "t", "rho"});
    CsvTable fit_csv({"value", "eta", "intercept", "r_squared", "min_abs_r", "max_abs_r", "eta_left", "eta_right"});
    json fits = json::array();
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto& s = slots[i];
        r.checks.push_back(s.check);
        const auto d = density(s.sol.right_vectors.col(s.idx), s.p.l, s.sol.values(s.idx));
        const auto cut = relative_cut(d, s.fixed_v);
        for (const auto& p : cut) cut_csv.row().add(values[i]).add(p.r).add(p.rho);
        for (const auto& p : center_of_mass_profile(d)) com_csv.row().add(values[i]).add(p.r).add(p.rho);
        const auto fit = fit_scaling_factor(cut, side);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        const double el = fit.left ? fit.left->eta : nan, er = fit.right ? fit.right->eta : nan;
        fit_csv.row()
            .add(values[i])
            .add(fit.eta)
            .add(fit.intercept)
            .add(fit.r_squared)
            .add(fit.min_abs_r)
            .add(fit.max_abs_r)
            .add(el)
            .add(er);
        json f{{"value", values[i]},
               {"l", s.p.l},
               {"fixed_v", s.fixed_v},
               {"energy", complex_json(s.sol.values(s.idx))},
               {"eta", fit.eta},
               {"r_squared", fit.r_squared},
               {"window", {fit.min_abs_r, fit.max_abs_r}}};
        if (fit.left) f["eta_left"] = fit.left->eta;
        if (fit.right) f["eta_right"] = fit.right->eta;
        const auto dp = has_positive_real_hoppings(s.p) ? std::optional(derive(s.p)) : std::nullopt;
        if (dp) {
            f["beta1"] = dp->beta1;
            f["beta2"] = dp->beta2;
            if (dp->beta1 == 0.0 && dp->beta2 == 0.0 && dp->j0a == dp->j0b)
                f["impurity_chain_eta"] = 2.0 * std::asinh(s.p.u / (4.0 * dp->j0a));
        }
        fits.push_back(f);
    }
    if (wants(c, "csv")) {
        r.artifacts.push_back({"cut.csv", cut_csv.str()});
        r.artifacts.push_back({"com.csv", com_csv.str()});
        r.artifacts.push_back({"scaling.csv", fit_csv.str()});
    }
    r.summary = tagged(c);
    r.summary["sweep"] = sweep;
    r.summary["side"] = side_name;
    r.summary["fits"] = fits;
    return r;
}

// ---------------------------------------------------------------- topo

RunResult topo_experiment(const ExperimentConfig& c) {
    RunResult r;
    const int n_k = param_int(c, "n_k", 256);
    std::vector<ExtendedParams> cases;
    if (c.params.contains("cases")) {
        const auto& cs = c.params.at("cases");
        for (std::size_t i = 0; i < cs.size(); ++i) {
            ExtendedParams e = c.extended_model;
            const std::string path = "params.cases[" + std::to_string(i) + "].";
            e.j1 = parse_complex(cs[i].at("j1"), path + "j1");
            e.j2 = parse_complex(cs[i].at("j2"), path + "j2");
            e.p = parse_complex(cs[i].at("p"), path + "p");
            cases.push_back(e);
        }
    } else {
        cases.push_back(c.extended_model);
    }

    CsvTable bloch({"case", "k", "e1_re", "e1_im", "e2_re", "e2_im"});
    json out = json::array();
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto& e = cases[i];
        json item{{"j1", complex_json(e.j1)},
                  {"j2", complex_json(e.j2)},
                  {"p", complex_json(e.p)},
                  {"lambda1", complex_json(e.lambda1())},
                  {"lambda2", complex_json(e.lambda2())}};
        try {
            const auto w = ssh_windings(e, n_k);
            item["gapless"] = false;
            item["w"] = w.w_plus;
            item["w_plus"] = w.w_plus;
            item["w_minus"] = w.w_minus;
            item["min_gap"] = w.min_gap;
        } catch (const GaplessError&) {
            item["gapless"] = true;
        }
        // Spectral winding of both bands about the band centre: det(H(k) - shift) = -h_plus h_minus.
        const LoopFunction det = [&e](double k) {
            const auto s = ssh_components(e, k);
            return -s.h_plus * s.h_minus;
        };
        try {
            item["spectral_winding"] = winding_number(det, cplx{0.0});
        } catch (const DegenerateLoopError&) {
            item["spectral_winding"] = nullptr;
        }
        out.push_back(item);
        const cplx shift = e.u + (e.j1 + e.j2) / 2.0;
        for (int j = 0; j < n_k; ++j) {
            const double k = -kPi + 2.0 * kPi * j / n_k;
            const auto s = ssh_components(e, k);
            const cplx root = std::sqrt(s.h_plus * s.h_minus);
            const cplx e1 = shift + root, e2 = shift - root;
            bloch.row().add(static_cast<int>(i)).add(k).add(e1.real()).add(e1.imag()).add(e2.real()).add(e2.imag());
        }
    }
    if (wants(c, "csv")) r.artifacts.push_back({"bloch.csv", bloch.str()});

    r.summary = tagged(c);
    r.summary["cases"] = out;
    if (c.params.contains("p_values")) {
        const auto scan = gap_scan(c.extended_model, param_complexes(c, "p_values"));
        CsvTable g({"p_re", "p_im", "min_gap", "k_at_min"});
        json gs = json::array();
        for (const auto& pt : scan) {
            g.row().add(pt.p.real()).add(pt.p.imag()).add(pt.min_gap).add(pt.k_at_min);
            gs.push_back({{"p", complex_json(pt.p)}, {"min_gap", pt.min_gap}, {"k_at_min", pt.k_at_min}});
        }
        if (wants(c, "csv")) r.artifacts.push_back({"gap_scan.csv", g.str()});
        r.summary["gap_scan"] = gs;
    }
    return r;
}

// ---------------------------------------------------------------- corner modes

RunResult corner_modes_experiment(const ExperimentConfig& c) {
    RunResult r;
    const auto& e = c.extended_model;
    CornerModeOptions opt;
    opt.block = param_int(c, "block", 3);
    opt.shrink = param_number(c, "shrink", 0.05);
    const auto h = build_extended_hamiltonian(e);
    const auto sol = solve(h, "corner_modes", r.checks);
    const auto rep = detect_corner_modes(sol, e, opt);

    CsvTable t({"index", "re", "im", "in_gap"});
    for (Eigen::Index i = 0; i < sol.size(); ++i) {
        const bool in_gap = std::find(rep.in_gap_indices.begin(), rep.in_gap_indices.end(), i) != rep.in_gap_indices.end();
        t.row().add(static_cast<long long>(i)).add(sol.values(i).real()).add(sol.values(i).imag()).add(static_cast<int>(in_gap));
    }
    if (wants(c, "csv")) r.artifacts.push_back({"spectrum.csv", t.str()});

    json states = json::array();
    for (std::size_t i = 0; i < rep.energies.size(); ++i) {
        const auto d = density(rep.vectors[i], e.l, rep.energies[i]);
        add_profile(r, c, d, "_" + std::to_string(i + 1), HeatmapScale::Linear);
        states.push_back({{"energy", complex_json(rep.energies[i])},
                          {"weight_first", rep.weight_first[i]},
                          {"weight_last", rep.weight_last[i]}});
    }
    r.summary = tagged(c);
    r.summary["gap"] = {rep.gap_lower, rep.gap_upper};
    r.summary["block"] = rep.block;
    r.summary["states"] = states;
    try {
        r.summary["ssh_winding"] = ssh_winding(e);
    } catch (const GaplessError&) {
        r.summary["ssh_winding"] = nullptr;
    }
    return r;
}

// ---------------------------------------------------------------- circuit

json bond_json(const BondComponents& b) {
    return json{{"c_inic", b.c_inic ? json(*b.c_inic) : json(nullptr)}, {"l_series", b.l_series}};
}

RunResult circuit_experiment(const ExperimentConfig& c) {
    RunResult r;
    const double omega = param_number(c, "omega"), c0 = param_number(c, "c0");
    const auto solved = solve_components_report(c.model, omega, c0);
    const auto& comp = solved.components;
    const auto lap = build_laplacian(comp, c.model);
    const auto h = build_two_body_hamiltonian(c.model);
    const auto eq = verify_equivalence(lap, h, omega, c0);
    const Netlist nl = export_netlist(comp, c.model);
    const std::string text = render_netlist(nl);
    const double roundtrip = (laplacian_from_netlist(parse_netlist(text)) - lap).cwiseAbs().maxCoeff();
    r.artifacts.push_back({"circuit.net", text});

    r.summary = tagged(c);
    r.summary["components"] = {{"omega", comp.omega},   {"c0", comp.c0}, {"l0", std::isfinite(comp.l0) ? json(comp.l0) : json(nullptr)},
                               {"a", bond_json(comp.a)}, {"b", bond_json(comp.b)}};
    r.summary["matching_residual"] = solved.max_relative_residual;
    r.summary["u_target"] = c.model.u;
    if (c.model.u > 0.0) {
        r.summary["u_realized"] = comp.u_realized();
        r.summary["u_relative_error"] = std::abs(comp.u_realized() / c.model.u - 1.0);
    }
    r.summary["equivalence"] = {{"alpha", complex_json(eq.alpha)},
                                {"sigma", complex_json(eq.sigma)},
                                {"max_dev", eq.max_dev},
                                {"worst_row", eq.worst_row},
                                {"worst_col", eq.worst_col}};
    r.summary["netlist_elements"] = nl.elements.size();
    r.summary["roundtrip_max_dev"] = roundtrip;
    return r;
}

}  // namespace

Eigen::Index select_state(const EigenSolution& sol, const ModelParams& params, const Selection& s) {
    std::vector<Eigen::Index> pool;
    if (s.state_class == StateClass::Any) {
        for (Eigen::Index i = 0; i < sol.size(); ++i) pool.push_back(i);
    } else {
        if (!(params.u > 0.0)) throw ClassificationError("selection: class filter needs u > 0");
        const StatePartition part = classify_states(sol, params);
        pool = s.state_class == StateClass::Bound ? part.bound : part.scattering;
        std::sort(pool.begin(), pool.end());
    }
    if (pool.empty()) throw RangeError("selection: no state in the requested class");
    switch (s.rule) {
        case Selection::Rule::LargestReal: return pool.front();
        case Selection::Rule::Index:
            if (s.index >= static_cast<int>(pool.size())) throw RangeError("selection: index out of range");
            return pool[s.index];
        case Selection::Rule::ModulusNearest:
        case Selection::Rule::DistanceTo: {
            auto score = [&](Eigen::Index i) {
                const cplx e = sol.values(i);
                return s.rule == Selection::Rule::DistanceTo ? std::abs(e - s.value) : std::abs(std::abs(e) - s.value.real());
            };
            return *std::min_element(pool.begin(), pool.end(), [&](auto a, auto b) { return score(a) < score(b); });
        }
    }
    return pool.front();
}

RunResult run_experiment(const ExperimentConfig& c) {
    pin_blas_threads();
    const auto& e = c.experiment;
    if (e == "spectrum") return spectrum(c);
    if (e == "density") return density_experiment(c);
    if (e == "winding") return winding_experiment(c);
    if (e == "bound_branch") return bound_branch_experiment(c);
    if (e == "scaling") return scaling_experiment(c);
    if (e == "topo") return topo_experiment(c);
    if (e == "corner_modes") return corner_modes_experiment(c);
    if (e == "circuit") return circuit_experiment(c);
    throw ValidationError("experiment", "unknown experiment '" + e + "'");
}

RunOutcome run_to_directory(const ExperimentConfig& config, const std::filesystem::path& out_dir, bool seed_check) {
    RunOutcome out;
    RunResult res;
    try {
        res = run_experiment(config);
        if (seed_check) {
            const RunResult again = run_experiment(config);
            bool same = again.artifacts.size() == res.artifacts.size() && dump_json(again.summary) == dump_json(res.summary);
            for (std::size_t i = 0; same && i < res.artifacts.size(); ++i)
                same = again.artifacts[i].file == res.artifacts[i].file && again.artifacts[i].bytes == res.artifacts[i].bytes;
            if (!same) {
                out.exit_code = kExitComputation;
                out.message = "seed-check: repeated run produced different output";
                return out;
            }
        }
    } catch (const ValidationError& e) {
        out.exit_code = kExitInvalid;
        out.message = e.what();
        return out;
    } catch (const std::exception& e) {
        out.exit_code = kExitComputation;
        out.message = e.what();
        return out;
    }

    if (config.formats.count("json")) res.artifacts.push_back({config.experiment + ".json", dump_json(res.summary)});
    json artifacts = json::array();
    for (const auto& a : res.artifacts) {
        write_atomic(out_dir / a.file, a.bytes);
        char crc[16];
        std::snprintf(crc, sizeof crc, "%08x", crc32_of(a.bytes));
        artifacts.push_back({{"file", a.file}, {"bytes", a.bytes.size()}, {"crc32", crc}});
    }
    json checks = json::array();
    bool all_passed = true;
    for (const auto& ck : res.checks) {
        checks.push_back(check_json(ck));
        all_passed = all_passed && ck.passed();
    }
    out.report = tagged(config);
    out.report["status"] = all_passed ? "ok" : "eig_contract_failed";
    out.report["artifacts"] = artifacts;
    out.report["eig_checks"] = checks;
    out.report["seed_checked"] = seed_check;
    write_atomic(out_dir / "report.json", dump_json(out.report));
    if (!all_passed) {
        out.exit_code = kExitComputation;
        out.message = "eigensolver contract check failed";
    }
    return out;
}

}  // namespace skinlat::cli
