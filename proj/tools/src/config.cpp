#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace skinlat::cli {

namespace {

using nlohmann::json;

const json& require(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) throw ValidationError(path + key, "required");
    return obj.at(key);
}

double number(const json& j, const std::string& field) {
    if (!j.is_number()) throw ValidationError(field, "must be a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) throw ValidationError(field, "must be finite");
    return x;
}

int integer(const json& j, const std::string& field) {
    if (!j.is_number_integer()) throw ValidationError(field, "must be an integer");
    return j.get<int>();
}

Boundary boundary(const json& j, const std::string& field) {
    if (j == "obc") return Boundary::Open;
    if (j == "pbc") return Boundary::Periodic;
    throw ValidationError(field, "must be \"obc\" or \"pbc\"");
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& path) {
    for (const auto& [key, value] : obj.items())
        if (!known.count(key)) throw ValidationError(path + key, "unknown field");
}

ModelParams two_body_model(const json& m) {
    const std::string p = "model.";
    reject_unknown(m, {"l", "u", "boundary", "j", "j1", "j2", "j1a", "j2a", "j1b", "j2b", "j0", "beta1", "beta2"}, p);
    ModelParams out;
    out.l = integer(require(m, "l", p), p + "l");
    out.u = number(require(m, "u", p), p + "u");
    out.boundary = boundary(require(m, "boundary", p), p + "boundary");
    if (out.l < 2) throw ValidationError(p + "l", "must be >= 2");
    if (out.u < 0.0) throw ValidationError(p + "u", "must be >= 0");

    const bool uniform = m.contains("j");
    const bool pair = m.contains("j1") || m.contains("j2");
    const bool full = m.contains("j1a") || m.contains("j2a") || m.contains("j1b") || m.contains("j2b");
    const bool beta = m.contains("j0") || m.contains("beta1") || m.contains("beta2");
    if (uniform + pair + full + beta != 1)
        throw ValidationError(p + "j", "give exactly one of j | j1,j2 | j1a,j2a,j1b,j2b | j0,beta1,beta2");
    if (uniform) {
        out.j1a = out.j2a = out.j1b = out.j2b = parse_complex(m.at("j"), p + "j");
    } else if (pair) {
        out.j1a = out.j1b = parse_complex(require(m, "j1", p), p + "j1");
        out.j2a = out.j2b = parse_complex(require(m, "j2", p), p + "j2");
    } else if (full) {
        out.j1a = parse_complex(require(m, "j1a", p), p + "j1a");
        out.j2a = parse_complex(require(m, "j2a", p), p + "j2a");
        out.j1b = parse_complex(require(m, "j1b", p), p + "j1b");
        out.j2b = parse_complex(require(m, "j2b", p), p + "j2b");
    } else {
        const double j0 = number(require(m, "j0", p), p + "j0");
        const double b1 = number(require(m, "beta1", p), p + "beta1");
        const double b2 = number(require(m, "beta2", p), p + "beta2");
        out.j1a = j0 * std::exp(b2);
        out.j2a = j0 * std::exp(-b2);
        out.j1b = j0 * std::exp(b1);
        out.j2b = j0 * std::exp(-b1);
    }
    return out;
}

ExtendedParams extended_model(const json& m) {
    const std::string p = "model.";
    reject_unknown(m, {"l", "u", "boundary", "j1", "j2", "p", "conjugation"}, p);
    ExtendedParams out;
    out.l = integer(require(m, "l", p), p + "l");
    out.u = number(require(m, "u", p), p + "u");
    out.boundary = boundary(require(m, "boundary", p), p + "boundary");
    out.j1 = parse_complex(require(m, "j1", p), p + "j1");
    out.j2 = parse_complex(require(m, "j2", p), p + "j2");
    out.p = parse_complex(require(m, "p", p), p + "p");
    if (m.contains("conjugation")) {
        const auto& c = m.at("conjugation");
        if (c == "transpose")
            out.conjugation = PairConjugation::Transpose;
        else if (c == "conjugate")
            out.conjugation = PairConjugation::Conjugate;
        else
            throw ValidationError(p + "conjugation", "must be \"transpose\" or \"conjugate\"");
    }
    if (out.l < 4 || out.l % 2) throw ValidationError(p + "l", "must be even and >= 4");
    if (out.u < 0.0) throw ValidationError(p + "u", "must be >= 0");
    return out;
}

Selection selection(const json& s, const std::string& path) {
    if (!s.is_object()) throw ValidationError(path, "must be an object");
    reject_unknown(s, {"rule", "value", "index", "class", "label"}, path + ".");
    Selection out;
    const auto& rule = require(s, "rule", path + ".");
    if (rule == "largest_real") {
        out.rule = Selection::Rule::LargestReal;
    } else if (rule == "modulus_nearest") {
        out.rule = Selection::Rule::ModulusNearest;
        out.value = number(require(s, "value", path + "."), path + ".value");
    } else if (rule == "distance_to") {
        out.rule = Selection::Rule::DistanceTo;
        out.value = parse_complex(require(s, "value", path + "."), path + ".value");
    } else if (rule == "index") {
        out.rule = Selection::Rule::Index;
        out.index = integer(require(s, "index", path + "."), path + ".index");
        if (out.index < 0) throw ValidationError(path + ".index", "must be >= 0");
    } else {
        throw ValidationError(path + ".rule", "must be largest_real | modulus_nearest | distance_to | index");
    }
    if (s.contains("class")) {
        const auto& c = s.at("class");
        if (c == "any")
            out.state_class = StateClass::Any;
        else if (c == "bound")
            out.state_class = StateClass::Bound;
        else if (c == "scattering")
            out.state_class = StateClass::Scattering;
        else
            throw ValidationError(path + ".class", "must be any | bound | scattering");
    }
    if (s.contains("label")) {
        if (!s.at("label").is_string()) throw ValidationError(path + ".label", "must be a string");
        out.label = s.at("label").get<std::string>();
    }
    return out;
}

bool needs_extended(const std::string& experiment) { return experiment == "topo" || experiment == "corner_modes"; }

// Touches every parameter an experiment reads so that bad values surface
// before any computation starts.
void validate_params(const ExperimentConfig& c) {
    const auto& e = c.experiment;
    std::set<std::string> known;
    if (e == "spectrum") {
        known = {"u_values"};
        if (c.params.contains("u_values"))
            for (double u : param_numbers(c, "u_values"))
                if (u < 0.0) throw ValidationError("params.u_values", "entries must be >= 0");
    } else if (e == "density") {
        known = {"prominence", "scale"};
        const double pr = param_number(c, "prominence", 0.3);
        if (!(pr > 0.0 && pr < 1.0)) throw ValidationError("params.prominence", "must lie in (0, 1)");
        param_string(c, "scale", {"linear", "log"}, "linear");
    } else if (e == "winding") {
        known = {"loop", "fixed", "base", "samples"};
        if (!c.params.contains("loop")) throw ValidationError("params.loop", "required");
        param_string(c, "loop", {"big_k", "k"}, "big_k");
        param_number(c, "fixed", 0.0);
        if (c.params.contains("base")) parse_complex(c.params.at("base"), "params.base");
        if (param_int(c, "samples", 256) < 16) throw ValidationError("params.samples", "must be >= 16");
    } else if (e == "bound_branch") {
        known = {"n_k", "k_values", "kernel"};
        if (!(c.model.u > 0.0)) throw ValidationError("model.u", "must be > 0 for bound_branch");
        if (c.params.contains("n_k") && c.params.contains("k_values"))
            throw ValidationError("params.n_k", "give n_k or k_values, not both");
        if (param_int(c, "n_k", 128) < 1) throw ValidationError("params.n_k", "must be >= 1");
        if (c.params.contains("k_values")) param_numbers(c, "k_values");
        param_string(c, "kernel", {"auto", "infinite", "ring"}, "auto");
    } else if (e == "scaling") {
        known = {"fixed_v", "side", "u_values", "j_values", "l_values"};
        const int v = param_int(c, "fixed_v", (c.model.l + 1) / 2);
        if (v < 1 || v > c.model.l) throw ValidationError("params.fixed_v", "must lie in [1, l]");
        param_string(c, "side", {"both", "left", "right"}, "both");
        int sweeps = 0;
        for (const char* key : {"u_values", "j_values", "l_values"})
            if (c.params.contains(key)) {
                ++sweeps;
                param_numbers(c, key);
            }
        if (sweeps > 1) throw ValidationError("params", "sweep at most one of u_values, j_values, l_values");
        if (c.params.contains("j_values")) {
            const auto& m = c.model;
            if (!(m.j1a == m.j2a && m.j1a == m.j1b && m.j1a == m.j2b))
                throw ValidationError("params.j_values", "needs a uniform model (model.j)");
            for (double x : param_numbers(c, "j_values"))
                if (!(x > 0.0)) throw ValidationError("params.j_values", "entries must be > 0");
        }
        if (c.params.contains("l_values")) {
            if (c.params.contains("fixed_v")) throw ValidationError("params.fixed_v", "is the centre row in an l sweep");
            const auto ls = c.params.at("l_values");
            for (std::size_t i = 0; i < ls.size(); ++i)
                if (integer(ls[i], "params.l_values[" + std::to_string(i) + "]") < 3)
                    throw ValidationError("params.l_values", "entries must be >= 3");
        }
    } else if (e == "topo") {
        known = {"p_values", "cases", "n_k"};
        if (c.params.contains("p_values")) param_complexes(c, "p_values");
        if (param_int(c, "n_k", 256) < 16) throw ValidationError("params.n_k", "must be >= 16");
        if (c.params.contains("cases")) {
            const auto& cases = c.params.at("cases");
            if (!cases.is_array()) throw ValidationError("params.cases", "must be an array");
            for (std::size_t i = 0; i < cases.size(); ++i) {
                const std::string path = "params.cases[" + std::to_string(i) + "].";
                if (!cases[i].is_object()) throw ValidationError(path, "must be an object");
                reject_unknown(cases[i], {"j1", "j2", "p"}, path);
                for (const char* key : {"j1", "j2", "p"}) parse_complex(require(cases[i], key, path), path + key);
            }
        }
    } else if (e == "corner_modes") {
        known = {"block", "shrink"};
        const int b = param_int(c, "block", 3);
        if (b < 1 || 2 * b > c.extended_model.l) throw ValidationError("params.block", "must lie in [1, l/2]");
        const double s = param_number(c, "shrink", 0.05);
        if (!(s >= 0.0 && s < 0.5)) throw ValidationError("params.shrink", "must lie in [0, 0.5)");
    } else if (e == "circuit") {
        known = {"omega", "c0"};
        if (!(param_number(c, "omega") > 0.0)) throw ValidationError("params.omega", "must be > 0");
        if (!(param_number(c, "c0") > 0.0)) throw ValidationError("params.c0", "must be > 0");
    }
    reject_unknown(c.params, known, "params.");
}

}  // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {"spectrum", "density", "winding", "bound_branch",
                                                    "scaling",  "topo",    "corner_modes", "circuit"};
    return names;
}

cplx parse_complex(const nlohmann::json& j, const std::string& field) {
    if (j.is_number()) return number(j, field);
    if (j.is_array() && j.size() == 2) return {number(j[0], field + "[0]"), number(j[1], field + "[1]")};
    throw ValidationError(field, "must be a number or a [re, im] pair");
}

ExperimentConfig parse_config(const nlohmann::json& j) {
    if (!j.is_object()) throw ValidationError("config", "must be a JSON object");
    reject_unknown(j, {"schema", "experiment", "name", "model", "selections", "formats", "params", "description"}, "");
    ExperimentConfig c;
    c.source = j;
    if (j.contains("schema") && j.at("schema") != kSchemaTag)
        throw ValidationError("schema", std::string("must be \"") + kSchemaTag + "\"");
    const auto& exp = require(j, "experiment", "");
    if (!exp.is_string()) throw ValidationError("experiment", "must be a string");
    c.experiment = exp.get<std::string>();
    const auto& names = experiment_names();
    if (std::find(names.begin(), names.end(), c.experiment) == names.end())
        throw ValidationError("experiment", "unknown experiment '" + c.experiment + "'");
    c.name = c.experiment;
    if (j.contains("name")) {
        if (!j.at("name").is_string() || j.at("name").get<std::string>().empty())
            throw ValidationError("name", "must be a non-empty string");
        c.name = j.at("name").get<std::string>();
    }

    const auto& model = require(j, "model", "");
    if (!model.is_object()) throw ValidationError("model", "must be an object");
    c.extended = needs_extended(c.experiment);
    if (c.extended)
        c.extended_model = extended_model(model);
    else
        c.model = two_body_model(model);

    if (j.contains("selections")) {
        const auto& s = j.at("selections");
        if (!s.is_array() || s.empty()) throw ValidationError("selections", "must be a non-empty array");
        for (std::size_t i = 0; i < s.size(); ++i)
            c.selections.push_back(selection(s[i], "selections[" + std::to_string(i) + "]"));
    } else {
        c.selections.push_back(Selection{});
    }

    c.formats = {"csv", "json"};
    if (j.contains("formats")) {
        const auto& f = j.at("formats");
        if (!f.is_array()) throw ValidationError("formats", "must be an array");
        c.formats.clear();
        for (const auto& x : f) {
            if (x != "csv" && x != "json" && x != "pgm" && x != "svg")
                throw ValidationError("formats", "entries must be csv | json | pgm | svg");
            c.formats.insert(x.get<std::string>());
        }
    }

    if (j.contains("params")) {
        if (!j.at("params").is_object()) throw ValidationError("params", "must be an object");
        c.params = j.at("params");
    }
    validate_params(c);
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config", "cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("config", std::string("invalid JSON: ") + e.what());
    }
    return parse_config(j);
}

double param_number(const ExperimentConfig& c, const std::string& key, std::optional<double> fallback) {
    if (!c.params.contains(key)) {
        if (fallback) return *fallback;
        throw ValidationError("params." + key, "required");
    }
    return number(c.params.at(key), "params." + key);
}

int param_int(const ExperimentConfig& c, const std::string& key, std::optional<int> fallback) {
    if (!c.params.contains(key)) {
        if (fallback) return *fallback;
        throw ValidationError("params." + key, "required");
    }
    return integer(c.params.at(key), "params." + key);
}

std::string param_string(const ExperimentConfig& c, const std::string& key, const std::vector<std::string>& allowed,
                         const std::string& fallback) {
    if (!c.params.contains(key)) return fallback;
    const auto& v = c.params.at(key);
    if (v.is_string() && std::find(allowed.begin(), allowed.end(), v.get<std::string>()) != allowed.end())
        return v.get<std::string>();
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : " | ") + a;
    throw ValidationError("params." + key, "must be " + list);
}

std::vector<double> param_numbers(const ExperimentConfig& c, const std::string& key) {
    const auto& v = c.params.at(key);
    if (!v.is_array() || v.empty()) throw ValidationError("params." + key, "must be a non-empty array");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], "params." + key + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<cplx> param_complexes(const ExperimentConfig& c, const std::string& key) {
    const auto& v = c.params.at(key);
    if (!v.is_array() || v.empty()) throw ValidationError("params." + key, "must be a non-empty array");
    std::vector<cplx> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(parse_complex(v[i], "params." + key + "[" + std::to_string(i) + "]"));
    return out;
}

}  // namespace skinlat::cli
