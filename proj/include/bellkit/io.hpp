/**
 * JSON schemas for coincidence data and reports.
 *
 * Input schema:
 *   {"tables": {"AB": [[p11,p12],[p21,p22]], "AB'": ..., "A'B": ..., "A'B'": ...},
 *    "outcomes": {"A": [1,-1], "B": [1,-1], "A'": [1,-1], "B'": [1,-1]}}
 * with "outcomes" optional (defaults +1/-1). Context keys use primes as
 * apostrophes exactly as shown.
 *
 * SchemaError marks a malformed document (wrong shape, missing field) and
 * maps to CLI exit 2; DataError marks invalid probabilities (negative
 * entries, sums off beyond tolerance) and maps to exit 3.
 */

#ifndef BELLKIT_IO_HPP
#define BELLKIT_IO_HPP

#include "models.hpp"
#include "simulators.hpp"
#include "statistics.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace bellkit::io {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr std::array<const char*, 4> kSideNames{"A", "B", "A'", "B'"};

namespace detail {

inline double number_at(const json& j, const std::string& where) {
    if (!j.is_number()) throw SchemaError(where + ": expected a number");
    return j.get<double>();
}

inline std::array<std::array<double, 2>, 2> grid_at(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2) throw SchemaError(where + ": expected a 2x2 array");
    std::array<std::array<double, 2>, 2> out{};
    for (int i = 0; i < 2; ++i) {
        const json& row = j[i];
        if (!row.is_array() || row.size() != 2)
            throw SchemaError(where + "[" + std::to_string(i) + "]: expected an array of 2 numbers");
        for (int v = 0; v < 2; ++v)
            out[i][v] = number_at(row[v], where + "[" + std::to_string(i) + "][" + std::to_string(v) + "]");
    }
    return out;
}

inline std::array<double, 2> pair_at(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2) throw SchemaError(where + ": expected an array of 2 numbers");
    return {number_at(j[0], where + "[0]"), number_at(j[1], where + "[1]")};
}

} // namespace detail

inline BellData bell_data_from_json(const json& j, bool normalize = false,
                                    double strict_sum_tol = kTableSumTol) {
    if (!j.is_object()) throw SchemaError("document: expected an object");
    if (!j.contains("tables")) throw SchemaError("missing field: tables");
    const json& tables = j.at("tables");
    if (!tables.is_object()) throw SchemaError("tables: expected an object");

    BellData d;
    for (int c = 0; c < 4; ++c) {
        std::string key = kContextNames[c];
        if (!tables.contains(key)) throw SchemaError("missing field: tables." + key);
        d.tables[c].p = detail::grid_at(tables.at(key), "tables." + key);
    }
    if (j.contains("outcomes")) {
        const json& outcomes = j.at("outcomes");
        if (!outcomes.is_object()) throw SchemaError("outcomes: expected an object");
        auto side = [&outcomes](const char* name, std::array<double, 2> fallback) {
            if (!outcomes.contains(name)) return fallback;
            return detail::pair_at(outcomes.at(name), std::string("outcomes.") + name);
        };
        std::array<double, 2> a = side("A", {+1, -1}), ap = side("A'", {+1, -1});
        std::array<double, 2> b = side("B", {+1, -1}), bp = side("B'", {+1, -1});
        d[Context::AB].a_values = a;
        d[Context::AB].b_values = b;
        d[Context::ABp].a_values = a;
        d[Context::ABp].b_values = bp;
        d[Context::ApB].a_values = ap;
        d[Context::ApB].b_values = b;
        d[Context::ApBp].a_values = ap;
        d[Context::ApBp].b_values = bp;
    }

    double sum_tol = normalize ? kLooseTableSumTol : strict_sum_tol;
    for (int c = 0; c < 4; ++c) {
        const auto& p = d.tables[c].p;
        std::string key = kContextNames[c];
        for (int i = 0; i < 2; ++i)
            for (int v = 0; v < 2; ++v)
                if (p[i][v] < 0.0)
                    throw DataError("tables." + key + "[" + std::to_string(i) + "][" +
                                    std::to_string(v) + "]: negative probability");
        double s = d.tables[c].sum();
        if (std::abs(s - 1.0) > sum_tol)
            throw DataError("tables." + key + ": probabilities sum to " + std::to_string(s) +
                            ", expected 1");
        if (normalize) d.tables[c] = normalized_table(d.tables[c]);
    }
    return d;
}

inline ordered_json bell_data_to_json(const BellData& d) {
    ordered_json tables;
    for (int c = 0; c < 4; ++c) {
        const auto& p = d.tables[c].p;
        tables[kContextNames[c]] = {{p[0][0], p[0][1]}, {p[1][0], p[1][1]}};
    }
    ordered_json outcomes;
    outcomes["A"] = d[Context::AB].a_values;
    outcomes["B"] = d[Context::AB].b_values;
    outcomes["A'"] = d[Context::ApB].a_values;
    outcomes["B'"] = d[Context::ABp].b_values;
    return ordered_json{{"tables", tables}, {"outcomes", outcomes}};
}

inline ordered_json report_to_json(const ClassificationReport& r) {
    ordered_json out;
    ordered_json exps;
    for (int c = 0; c < 4; ++c) exps[kContextNames[c]] = r.expectations[c];
    out["expectations"] = exps;
    out["chsh"] = {{"fixed", r.chsh_fixed}, {"max", r.chsh_max}};
    ordered_json audit = ordered_json::array();
    for (const MarginalDeviation& dev : r.marginal_deviations)
        audit.push_back({{"setting", dev.setting},
                         {"lhs_context", kContextNames[static_cast<int>(dev.lhs_context)]},
                         {"rhs_context", kContextNames[static_cast<int>(dev.rhs_context)]},
                         {"lhs", dev.lhs},
                         {"rhs", dev.rhs},
                         {"deviation", dev.deviation}});
    out["marginal_audit"] = audit;
    out["max_marginal_deviation"] = r.max_marginal_deviation;
    ordered_json facts;
    for (int c = 0; c < 4; ++c) {
        const Factorization& f = r.factorizations[c];
        facts[kContextNames[c]] = {{"factorizable", f.factorizable},
                                   {"residual", f.residual},
                                   {"row_factors", f.row_factors},
                                   {"col_factors", f.col_factors}};
    }
    out["factorizability"] = facts;
    out["verdict"] = verdict_name(r.verdict);
    out["verdict_description"] = verdict_description(r.verdict);
    out["tolerances"] = {{"bell", r.tol_bell}, {"marginal", r.tol_marginal}};
    return out;
}

inline Verdict verdict_from_name(const std::string& name) {
    for (Verdict v : {Verdict::NoViolation, Verdict::Type1, Verdict::Type2, Verdict::Type3, Verdict::Type4})
        if (name == verdict_name(v)) return v;
    throw SchemaError("verdict: unknown value " + name);
}

inline Context context_from_name(const std::string& name) {
    for (int c = 0; c < 4; ++c)
        if (name == kContextNames[c]) return static_cast<Context>(c);
    throw SchemaError("context: unknown value " + name);
}

inline ClassificationReport report_from_json(const json& j) {
    ClassificationReport r;
    for (int c = 0; c < 4; ++c)
        r.expectations[c] = j.at("expectations").at(kContextNames[c]).get<double>();
    r.chsh_fixed = j.at("chsh").at("fixed").get<double>();
    r.chsh_max = j.at("chsh").at("max").get<double>();
    for (const json& item : j.at("marginal_audit")) {
        MarginalDeviation dev;
        dev.setting = item.at("setting").get<std::string>();
        dev.lhs_context = context_from_name(item.at("lhs_context").get<std::string>());
        dev.rhs_context = context_from_name(item.at("rhs_context").get<std::string>());
        dev.lhs = item.at("lhs").get<double>();
        dev.rhs = item.at("rhs").get<double>();
        dev.deviation = item.at("deviation").get<double>();
        r.marginal_deviations.push_back(dev);
    }
    r.max_marginal_deviation = j.at("max_marginal_deviation").get<double>();
    for (int c = 0; c < 4; ++c) {
        const json& f = j.at("factorizability").at(kContextNames[c]);
        r.factorizations[c].factorizable = f.at("factorizable").get<bool>();
        r.factorizations[c].residual = f.at("residual").get<double>();
        r.factorizations[c].row_factors = f.at("row_factors").get<std::array<double, 2>>();
        r.factorizations[c].col_factors = f.at("col_factors").get<std::array<double, 2>>();
    }
    r.verdict = verdict_from_name(j.at("verdict").get<std::string>());
    r.tol_bell = j.at("tolerances").at("bell").get<double>();
    r.tol_marginal = j.at("tolerances").at("marginal").get<double>();
    return r;
}

inline ordered_json complex_to_json(const cdouble& z) {
    return ordered_json::array({z.real(), z.imag()});
}

inline ordered_json vec4_to_json(const Vec4& v) {
    ordered_json out = ordered_json::array();
    for (int k = 0; k < 4; ++k) out.push_back(complex_to_json(v(k)));
    return out;
}

inline ordered_json counts_to_json(const std::array<ContextCounts, 4>& counts) {
    ordered_json out;
    for (int c = 0; c < 4; ++c) {
        const auto& n = counts[c].n;
        out[kContextNames[c]] = {{n[0][0], n[0][1]}, {n[1][0], n[1][1]}};
    }
    return out;
}

} // namespace bellkit::io

#endif // BELLKIT_IO_HPP
