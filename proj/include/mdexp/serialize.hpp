#pragma once

#include <algorithm>
#include <fstream>
#include <string>

#include <json.hpp>

#include "mdexp/biseries.hpp"
#include "mdexp/certify.hpp"
#include "mdexp/fixpoint.hpp"
#include "mdexp/kernels.hpp"
#include "mdexp/lambda.hpp"
#include "mdexp/lattice.hpp"

// JSON schemas for every exchange format. All maps are emitted in sorted key
// order so identical values serialize to identical bytes.

namespace mdexp {

using Json = nlohmann::ordered_json;

// {"p_trunc": n, "terms": [{"i": int, "j": int, "c": "num/den"}]}
inline Json biseries_to_json(const BiSeries& series) {
    Json terms = Json::array();
    for (const auto& [key, c] : series.terms()) {
        terms.push_back(
            {{"i", key.first}, {"j", key.second}, {"c", rat_to_string(c)}});
    }
    return Json{{"p_trunc", series.p_trunc()}, {"terms", std::move(terms)}};
}

inline BiSeries biseries_from_json(const Json& j) {
    BiSeries out(j.at("p_trunc").get<int>());
    BiSeries sum = out;
    for (const auto& term : j.at("terms")) {
        sum = sum + BiSeries::monomial(
                        rat_from_string(term.at("c").get<std::string>()),
                        term.at("i").get<int>(), term.at("j").get<int>(),
                        out.p_trunc());
    }
    return sum;
}

namespace detail {

// w-polynomials appear in several schemas as {"s": "num/den"} objects keyed
// by the w-power.
inline Json w_poly_to_json(const BiSeries& poly) {
    Json coeffs = Json::object();
    for (const auto& [key, c] : poly.terms()) {
        coeffs[std::to_string(key.second)] = rat_to_string(c);
    }
    return coeffs;
}

inline BiSeries w_poly_from_json(const Json& coeffs) {
    BiSeries poly(0);
    for (const auto& [power, value] : coeffs.items()) {
        poly = poly + BiSeries::monomial(
                          rat_from_string(value.get<std::string>()), 0,
                          std::stoi(power), 0);
    }
    return poly;
}

} // namespace detail

// {"B": real, "kernels": [{"k": int, "coeffs": {"s": "num/den"}}]}
inline Json kernel_table_to_json(const KernelTable& table) {
    Json kernels = Json::array();
    for (const auto& [k, poly] : table.kernels()) {
        kernels.push_back({{"k", k}, {"coeffs", detail::w_poly_to_json(poly)}});
    }
    return Json{{"B", table.bound_b()}, {"kernels", std::move(kernels)}};
}

inline KernelTable kernel_table_from_json(const Json& j) {
    std::map<int, BiSeries> kernels;
    for (const auto& entry : j.at("kernels")) {
        kernels.emplace(entry.at("k").get<int>(),
                        detail::w_poly_from_json(entry.at("coeffs")));
    }
    return KernelTable(std::move(kernels), j.at("B").get<double>());
}

// {"a": [{"k": int, "coeffs": {"s": "num/den"}}]}
inline Json a_table_to_json(const ATable& table) {
    Json entries = Json::array();
    for (const auto& [k, poly] : table.coeffs()) {
        entries.push_back({{"k", k}, {"coeffs", detail::w_poly_to_json(poly)}});
    }
    return Json{{"a", std::move(entries)}};
}

inline ATable a_table_from_json(const Json& j) {
    std::map<int, BiSeries> coeffs;
    for (const auto& entry : j.at("a")) {
        coeffs.emplace(entry.at("k").get<int>(),
                       detail::w_poly_from_json(entry.at("coeffs")));
    }
    return ATable(std::move(coeffs));
}

// {"p_trunc": n, "g": [{"s": int, "coeffs": {"j": "num/den"}}]}
inline Json lambda_expansion_to_json(const LambdaExpansion& expansion) {
    Json entries = Json::array();
    for (const auto& [s, poly] : expansion.g) {
        entries.push_back({{"s", s}, {"coeffs", detail::w_poly_to_json(poly)}});
    }
    return Json{{"p_trunc", expansion.p_trunc}, {"g", std::move(entries)}};
}

// {"iterations": n, "residual": r, "converged": bool}
inline Json iteration_report_to_json(const IterationReport& report) {
    return Json{{"iterations", report.iterations},
                {"residual", report.residual},
                {"converged", report.converged}};
}

// {"B", "epsilon", "p0", "binding_k", "map_margin"[, "contraction_ratio"]}
inline Json certificate_to_json(const Certificate& cert) {
    Json j{{"B", cert.bound_b},
           {"epsilon", cert.epsilon},
           {"p0", cert.p0},
           {"binding_k", cert.binding_k},
           {"map_margin", cert.map_margin}};
    if (cert.contraction_ratio) {
        j["contraction_ratio"] = *cert.contraction_ratio;
    }
    return j;
}

// {"N": n, "counts": {"m": "decimal string"}}
inline Json match_counts_to_json(const MatchCountTable& table) {
    Json counts = Json::object();
    for (std::size_t m = 0; m < table.counts.size(); ++m) {
        counts[std::to_string(m)] = table.counts[m].str();
    }
    return Json{{"N", table.n_sites}, {"counts", std::move(counts)}};
}

inline MatchCountTable match_counts_from_json(const Json& j) {
    MatchCountTable table;
    table.n_sites = j.at("N").get<int>();
    std::size_t top = 0;
    for (const auto& [m, value] : j.at("counts").items()) {
        top = std::max(top, static_cast<std::size_t>(std::stoul(m)));
    }
    table.counts.assign(top + 1, BigInt(0));
    for (const auto& [m, value] : j.at("counts").items()) {
        table.counts[static_cast<std::size_t>(std::stoul(m))] =
            BigInt(value.get<std::string>());
    }
    return table;
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DomainError("cannot open " + path);
    }
    return Json::parse(in);
}

inline void save_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) {
        throw DomainError("cannot write " + path);
    }
    out << j.dump(2) << "\n";
}

} // namespace mdexp
