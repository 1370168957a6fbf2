#include "csrr/problem.hpp"

#include <algorithm>
#include <set>

#include "csrr/expr.hpp"

namespace csrr {

Json form_to_json(const Form& f) {
    Json out = Json::array();
    for (const auto& [tuple, coeff] : f.terms()) {
        Json term = Json::object();
        term["coeff"] = coeff.to_string();
        Json gens = Json::array();
        for (auto g : tuple) gens.push_back(f.universe()->gen_name(g));
        term["gens"] = std::move(gens);
        out.push_back(std::move(term));
    }
    return out;
}

Form form_from_json(const Json& j, const GenUniversePtr& g) {
    if (!j.is_array()) throw InputError("a form must be an array of terms");
    Form f = Form::zero(g);
    for (const auto& term : j) {
        if (!term.is_object() || !term.contains("coeff") || !term.contains("gens"))
            throw InputError("form terms need \"coeff\" and \"gens\"");
        RatFun coeff =
            parse_ratfun(term["coeff"].get<std::string>(), g->vars());
        GenTuple tuple;
        for (const auto& name : term["gens"]) {
            auto idx = g->index_of_name(name.get<std::string>());
            if (!idx)
                throw InputError("unknown generator: " + name.get<std::string>());
            tuple.push_back(static_cast<std::uint32_t>(*idx));
        }
        if (!std::is_sorted(tuple.begin(), tuple.end()))
            throw InputError("generator tuples must be strictly increasing");
        f.add_term(tuple, coeff);
    }
    return f;
}

Json matform_to_json(const MatForm& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j)
            row.push_back(form_to_json(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

MatForm matform_from_json(const Json& j, const GenUniversePtr& g) {
    if (!j.is_array() || j.empty()) throw InputError("matrix must be a nonempty array");
    std::size_t rows = j.size();
    std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0) throw InputError("matrix rows must be nonempty arrays");
    MatForm m(g, rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw InputError("ragged matrix at row " + std::to_string(i + 1));
        for (std::size_t k = 0; k < cols; ++k) m.at(i, k) = form_from_json(j[i][k], g);
    }
    return m;
}

Json csclass_to_json(const CsClass& c) {
    Json out = Json::object();
    out["p"] = c.p;
    switch (c.modulus) {
    case CsClass::Modulus::Literal: out["modulus"] = "literal"; break;
    case CsClass::Modulus::ModExact: out["modulus"] = "mod-exact"; break;
    case CsClass::Modulus::ModDlogUnits: out["modulus"] = "mod-dlog-units"; break;
    }
    out["form"] = form_to_json(c.rep);
    return out;
}

Json report_to_json(const Report& r) {
    Json out = Json::object();
    out["check"] = r.check;
    Json params = Json::object();
    for (const auto& [k, v] : r.params) params[k] = v;
    out["params"] = std::move(params);
    out["status"] = status_name(r.status);
    out["witness"] = r.witness ? form_to_json(*r.witness) : Json();
    if (r.detail) out["detail"] = *r.detail;
    out["seed"] = r.seed;
    out["millis"] = r.millis;
    return out;
}

Json reports_to_json(const std::vector<Report>& reports) {
    Json arr = Json::array();
    for (const auto& r : reports) arr.push_back(report_to_json(r));
    return arr;
}

namespace {

// Matrix of 0-forms given as ratfun strings.
MatForm scalar_matrix_from_json(const Json& j, const GenUniversePtr& g,
                                std::vector<std::string>& issues,
                                const std::string& what) {
    if (!j.is_array() || j.empty()) {
        issues.push_back(what + " must be a nonempty array of rows");
        return MatForm(g, 1, 1);
    }
    std::size_t rows = j.size();
    std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0) {
        issues.push_back(what + " rows must be nonempty arrays");
        return MatForm(g, 1, 1);
    }
    if (rows != cols)
        issues.push_back(what + " must be square (got " + std::to_string(rows) +
                         "x" + std::to_string(cols) + ")");
    MatForm m(g, rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols) {
            issues.push_back(what + " is ragged at row " + std::to_string(i + 1));
            continue;
        }
        for (std::size_t k = 0; k < cols; ++k) {
            try {
                m.at(i, k) = Form::scalar(
                    g, parse_ratfun(j[i][k].get<std::string>(), g->vars()));
            } catch (const std::exception& e) {
                issues.push_back(what + "[" + std::to_string(i + 1) + "][" +
                                 std::to_string(k + 1) + "]: " + e.what());
            }
        }
    }
    return m;
}

MatForm form_matrix_from_json(const Json& j, const GenUniversePtr& g,
                              std::vector<std::string>& issues,
                              const std::string& what, std::size_t n) {
    MatForm m(g, n, n);
    if (!j.is_array() || j.size() != n) {
        issues.push_back(what + " must be an array of " + std::to_string(n) +
                         " rows");
        return m;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!j[i].is_array() || j[i].size() != n) {
            issues.push_back(what + " is ragged at row " + std::to_string(i + 1));
            continue;
        }
        for (std::size_t k = 0; k < n; ++k) {
            try {
                m.at(i, k) = form_from_json(j[i][k], g);
            } catch (const std::exception& e) {
                issues.push_back(what + "[" + std::to_string(i + 1) + "][" +
                                 std::to_string(k + 1) + "]: " + e.what());
            }
        }
    }
    return m;
}

std::optional<LogConnection>
connection_from_json(const Json& j, std::vector<std::string>& issues) {
    if (!j.is_object()) {
        issues.push_back("\"connection\" must be an object");
        return std::nullopt;
    }
    for (const auto& key : {"N", "delta", "points", "residues"})
        if (!j.contains(key))
            issues.push_back(std::string("connection is missing \"") + key + "\"");
    if (!issues.empty()) return std::nullopt;

    std::size_t n = j["N"].get<std::size_t>();
    std::size_t delta = j["delta"].get<std::size_t>();
    if (j["points"].size() != delta)
        issues.push_back("\"points\" must list exactly delta entries");

    // Universe: symbolic point names (declaration order), fiber z, params.
    // Duplicate names are reported here but deduplicated so that the rest
    // of the document can still be validated in the same pass.
    std::vector<std::pair<std::string, VarKind>> vars;
    std::set<std::string> seen;
    auto declare = [&](const std::string& name, VarKind kind) {
        if (!seen.insert(name).second) {
            issues.push_back("duplicate variable name: " + name);
            return;
        }
        vars.emplace_back(name, kind);
    };
    std::vector<std::pair<bool, std::string>> point_raw; // symbolic?, payload
    for (const auto& p : j["points"]) {
        if (p.is_object() && p.contains("symbol")) {
            std::string name = p["symbol"].get<std::string>();
            declare(name, VarKind::BasePoint);
            point_raw.emplace_back(true, name);
        } else if (p.is_object() && p.contains("value")) {
            point_raw.emplace_back(false, p["value"].get<std::string>());
        } else {
            issues.push_back("each point needs \"symbol\" or \"value\"");
        }
    }
    declare("z", VarKind::Fiber);
    if (j.contains("parameters"))
        for (const auto& t : j["parameters"])
            declare(t.get<std::string>(), VarKind::Param);
    VarUniversePtr u;
    try {
        u = VarUniverse::make(std::move(vars));
    } catch (const std::exception& e) {
        issues.push_back(e.what());
        return std::nullopt;
    }
    auto g = GenUniverse::make(u);

    std::vector<PointSpec> points;
    for (const auto& [symbolic, payload] : point_raw) {
        if (symbolic) {
            points.push_back(PointSpec::symbol(u->require(payload)));
        } else {
            try {
                RatFun v = parse_ratfun(payload, u);
                if (!v.is_constant()) {
                    issues.push_back("constant point is not constant: " + payload);
                    continue;
                }
                points.push_back(PointSpec::value(v.constant_value()));
            } catch (const std::exception& e) {
                issues.push_back(std::string("bad point value: ") + e.what());
            }
        }
    }

    std::vector<MatForm> residues;
    if (!j["residues"].is_array() || j["residues"].size() != delta) {
        issues.push_back("\"residues\" must list exactly delta matrices");
    } else {
        for (std::size_t nu = 0; nu < delta; ++nu)
            residues.push_back(scalar_matrix_from_json(
                j["residues"][nu], g, issues,
                "residues[" + std::to_string(nu + 1) + "]"));
    }
    for (const auto& a : residues)
        if (a.rows() != n)
            issues.push_back("residue matrices must be N x N");

    MatForm phi(g, n, n);
    if (j.contains("phi")) phi = form_matrix_from_json(j["phi"], g, issues, "phi", n);

    if (!issues.empty()) return std::nullopt;
    try {
        return LogConnection(g, n, std::move(points), std::move(residues),
                             std::move(phi));
    } catch (const InputError& e) {
        for (const auto& msg : e.issues) issues.push_back(msg);
        return std::nullopt;
    }
}

std::optional<FiniteAlgebra>
pushforward_from_json(const Json& j, std::vector<std::string>& issues) {
    if (!j.is_object()) {
        issues.push_back("\"pushforward\" must be an object");
        return std::nullopt;
    }
    if (!j.contains("variables") || !j.contains("phi_poly")) {
        issues.push_back("pushforward needs \"variables\" and \"phi_poly\"");
        return std::nullopt;
    }
    std::vector<std::pair<std::string, VarKind>> vars;
    for (const auto& v : j["variables"])
        vars.emplace_back(v.get<std::string>(), VarKind::Param);
    VarUniversePtr u;
    try {
        u = VarUniverse::make(std::move(vars));
    } catch (const std::exception& e) {
        issues.push_back(e.what());
        return std::nullopt;
    }
    auto g = GenUniverse::make(u);

    FiniteAlgebra fa;
    fa.guni = g;
    fa.rank = j.value("N", std::size_t{1});
    for (const auto& c : j["phi_poly"]) {
        try {
            fa.phi.push_back(parse_ratfun(c.get<std::string>(), u));
        } catch (const std::exception& e) {
            issues.push_back(std::string("phi_poly: ") + e.what());
        }
    }
    if (fa.phi.empty()) issues.push_back("phi_poly must have degree >= 1");
    if (j.contains("A")) {
        for (const auto& mat : j["A"])
            fa.a_coeffs.push_back(
                form_matrix_from_json(mat, g, issues, "A", fa.rank));
    }
    if (j.contains("split_roots")) {
        for (const auto& c : j["split_roots"]) {
            try {
                fa.split_roots.push_back(parse_ratfun(c.get<std::string>(), u));
            } catch (const std::exception& e) {
                issues.push_back(std::string("split_roots: ") + e.what());
            }
        }
    }
    if (!issues.empty()) return std::nullopt;
    return fa;
}

} // namespace

ProblemFile parse_problem_json(const Json& doc) {
    std::vector<std::string> issues;
    ProblemFile out;
    if (!doc.is_object()) throw InputError("problem document must be an object");
    if (!doc.contains("connection") && !doc.contains("pushforward"))
        issues.push_back("problem needs a \"connection\" or \"pushforward\" block");
    if (doc.contains("connection"))
        out.connection = connection_from_json(doc["connection"], issues);
    if (doc.contains("pushforward"))
        out.pushforward = pushforward_from_json(doc["pushforward"], issues);
    if (doc.contains("numeric")) {
        const Json& c = doc["numeric"];
        out.numeric.seed = c.value("seed", out.numeric.seed);
        out.numeric.tol = c.value("tol", out.numeric.tol);
        out.numeric.samples = c.value("samples", out.numeric.samples);
        out.numeric.range = c.value("range", out.numeric.range);
        if (out.numeric.tol <= 0) issues.push_back("numeric.tol must be positive");
    }
    if (!issues.empty()) throw InputError(issues);
    return out;
}

ProblemFile parse_problem(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const std::exception& e) {
        throw InputError(std::string("invalid JSON: ") + e.what());
    }
    return parse_problem_json(doc);
}

} // namespace csrr
