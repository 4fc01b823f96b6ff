#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "opscale/cauchy.hpp"
#include "opscale/filtered_algebra.hpp"
#include "opscale/hermite.hpp"
#include "opscale/identities.hpp"
#include "opscale/order_estimation.hpp"
#include "opscale/powers.hpp"
#include "opscale/product.hpp"
#include "opscale/taylor.hpp"
#include "opscale/triples.hpp"
#include "opscale/weyl.hpp"

namespace opscale {

using Json = nlohmann::json;

constexpr int kReportSchemaVersion = 1;

inline const char* verdict_string(bool pass) { return pass ? "PASS" : "FAIL"; }

/// Fixed 17-significant-digit rendering for CSV cells.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline Json to_json(const OrderReport& r) {
    Json rows = Json::array();
    for (const auto& s : r.sigma)
        rows.push_back({{"s", s.s}, {"N", s.truncation}, {"sigma", s.sigma}});
    Json slopes = Json::array();
    for (const auto& s : r.slopes) slopes.push_back({{"s", s.s}, {"slope", s.slope}});
    return Json{{"schema_version", kReportSchemaVersion},
                {"kind", "order_report"},
                {"label", r.label},
                {"candidate_order", r.candidate_order},
                {"truncations", r.truncations},
                {"s_grid", r.s_grid},
                {"slope_tolerance", r.slope_tolerance},
                {"sigma_growth_cap", r.sigma_growth_cap},
                {"sigma", rows},
                {"slopes", slopes},
                {"max_sigma", r.max_sigma},
                {"max_growth", r.max_growth},
                {"verdict", verdict_string(r.pass)}};
}

inline std::string to_csv(const OrderReport& r) {
    std::string out = "s,N,sigma,verdict\n";
    for (const auto& s : r.sigma)
        out += format_double(s.s) + "," + std::to_string(s.truncation) + "," +
               format_double(s.sigma) + "," + verdict_string(r.pass) + "\n";
    return out;
}

inline Json to_json(const FactorizationReport& r) {
    return Json{{"schema_version", kReportSchemaVersion},
                {"kind", "factorization_report"},
                {"left", to_json(r.left)},
                {"right", to_json(r.right)},
                {"verdict", verdict_string(r.pass)}};
}

inline Json to_json(const IsometryReport& r) {
    return Json{{"schema_version", kReportSchemaVersion},
                {"kind", "isometry_report"},
                {"re_z", r.exponent.real()},
                {"im_z", r.exponent.imag()},
                {"s", r.sobolev_index},
                {"N", r.truncation},
                {"max_relative_deviation", r.max_relative_deviation}};
}

inline Json to_json(const CauchyResult& r) {
    return Json{{"schema_version", kReportSchemaVersion},
                {"kind", "contour_power_report"},
                {"re_z", r.exponent.real()},
                {"im_z", r.exponent.imag()},
                {"resolvent_power", r.resolvent_power},
                {"tail_bound", r.tail_bound},
                {"refinement_estimate", r.refinement_estimate},
                {"tolerance", r.tolerance},
                {"verdict", verdict_string(r.converged)}};
}

inline Json to_json(const TaylorRemainderReport& r) {
    Json j{{"schema_version", kReportSchemaVersion},
           {"kind", "taylor_remainder_report"},
           {"label", r.label},
           {"re_z", r.exponent.real()},
           {"im_z", r.exponent.imag()},
           {"terms", r.terms},
           {"predicted_order", r.predicted_order},
           {"at_predicted", to_json(r.at_predicted)},
           {"verdict", verdict_string(r.pass)}};
    if (r.sharpness_checked) j["below_predicted"] = to_json(r.below_predicted);
    return j;
}

inline std::string to_csv(const TaylorRemainderReport& r) { return to_csv(r.at_predicted); }

inline Json to_json(const IdentityReport& r) {
    return Json{{"schema_version", kReportSchemaVersion},
                {"kind", "identity_report"},
                {"label", r.label},
                {"k", r.level},
                {"N", r.truncation},
                {"interior_margin", r.interior_margin},
                {"max_relative_deviation", r.max_relative_deviation},
                {"tolerance", r.tolerance},
                {"verdict", verdict_string(r.pass)}};
}

inline std::string identity_csv_header() { return "label,k,N,deviation,verdict\n"; }

inline std::string to_csv_row(const IdentityReport& r) {
    return r.label + "," + std::to_string(r.level) + "," + std::to_string(r.truncation) + "," +
           format_double(r.max_relative_deviation) + "," + verdict_string(r.pass) + "\n";
}

inline Json to_json(const FiltrationReport& r) {
    Json j{{"schema_version", kReportSchemaVersion},
           {"kind", "filtration_report"},
           {"element", r.element},
           {"commutator", r.commutator_form},
           {"verdict", verdict_string(r.pass)}};
    j["element_order"] = r.element_order.has_value() ? Json(*r.element_order) : Json();
    j["commutator_order"] = r.commutator_order.has_value() ? Json(*r.commutator_order) : Json();
    return j;
}

inline Json to_json(const HomomorphismReport& r) {
    return Json{{"schema_version", kReportSchemaVersion},
                {"kind", "homomorphism_report"},
                {"lhs", r.lhs},
                {"rhs", r.rhs},
                {"cutoff", r.cutoff},
                {"interior_margin", r.interior_margin},
                {"max_interior_deviation", r.max_interior_deviation},
                {"tolerance", r.tolerance},
                {"verdict", verdict_string(r.pass)}};
}

inline Json to_json(const BoundedCommutatorReport& r) {
    Json norms = Json::array();
    for (const auto& row : r.norms)
        norms.push_back({{"generator", row.generator},
                         {"source", row.source},
                         {"N", row.truncation},
                         {"norm", row.norm}});
    Json slopes = Json::array();
    for (const auto& row : r.slopes)
        slopes.push_back({{"generator", row.generator},
                          {"source", row.source},
                          {"slope", row.slope},
                          {"max_norm", row.max_norm},
                          {"verdict", verdict_string(row.pass)}});
    return Json{{"schema_version", kReportSchemaVersion},
                {"kind", "bounded_commutator_report"},
                {"label", r.label},
                {"truncations", r.truncations},
                {"norms", norms},
                {"slopes", slopes},
                {"verdict", verdict_string(r.pass)}};
}

inline Json to_json(const CompactnessReport& r) {
    Json profile = Json::array();
    for (const auto& row : r.profile)
        profile.push_back(
            {{"generator", row.generator}, {"j", row.index}, {"sigma_j", row.singular_value}});
    Json verdicts = Json::array();
    for (const auto& [name, pass] : r.verdicts)
        verdicts.push_back({{"generator", name}, {"verdict", verdict_string(pass)}});
    return Json{{"schema_version", kReportSchemaVersion},
                {"kind", "compactness_report"},
                {"label", r.label},
                {"N", r.truncation},
                {"threshold", r.threshold},
                {"profile", profile},
                {"verdicts", verdicts},
                {"verdict", verdict_string(r.pass)}};
}

inline Json to_json(const RegularityReport& r) {
    Json norms = Json::array();
    for (const auto& row : r.norms)
        norms.push_back({{"generator", row.generator},
                         {"source", row.source},
                         {"k", row.level},
                         {"N", row.truncation},
                         {"norm", row.norm}});
    Json slopes = Json::array();
    for (const auto& row : r.slopes)
        slopes.push_back({{"generator", row.generator},
                          {"source", row.source},
                          {"k", row.level},
                          {"slope", row.slope},
                          {"max_norm", row.max_norm},
                          {"verdict", verdict_string(row.pass)}});
    return Json{{"schema_version", kReportSchemaVersion},
                {"kind", "regularity_report"},
                {"label", r.label},
                {"max_k", r.max_level},
                {"truncations", r.truncations},
                {"bounded_commutators", to_json(r.bounded)},
                {"norms", norms},
                {"slopes", slopes},
                {"verdict", verdict_string(r.pass)}};
}

/// Flat rows per (generator, k, N) with the per-level slope verdict.
inline std::string to_csv(const RegularityReport& r) {
    std::string out = "generator,source,k,N,norm,slope,verdict\n";
    for (const auto& row : r.norms) {
        double slope = 0.0;
        bool pass = false;
        for (const auto& s : r.slopes)
            if (s.generator == row.generator && s.source == row.source && s.level == row.level) {
                slope = s.slope;
                pass = s.pass;
                break;
            }
        out += row.generator + "," + row.source + "," + std::to_string(row.level) + "," +
               std::to_string(row.truncation) + "," + format_double(row.norm) + "," +
               format_double(slope) + "," + verdict_string(pass) + "\n";
    }
    return out;
}

inline Json to_json(const SpanOrderReport& r) {
    Json elements = Json::array();
    for (const auto& [word, report] : r.elements)
        elements.push_back({{"word", word}, {"order_report", to_json(report)}});
    return Json{{"schema_version", kReportSchemaVersion},
                {"kind", "span_order_report"},
                {"elements", elements},
                {"verdict", verdict_string(r.pass)}};
}

inline Json to_json(const WeylSpanReport& r) {
    Json degrees = Json::array();
    for (int k = 0; k <= r.span.depth(); ++k) {
        Json words = Json::array();
        for (const auto& e : r.span.at_degree(k)) words.push_back(e.word);
        degrees.push_back({{"degree", k}, {"size", r.span.at_degree(k).size()}, {"words", words}});
    }
    Json orders = Json::array();
    for (const auto& [word, order] : r.orders)
        orders.push_back({{"word", word}, {"order", order}});
    return Json{{"schema_version", kReportSchemaVersion},
                {"kind", "weyl_span_report"},
                {"degrees", degrees},
                {"orders", orders},
                {"verdict", verdict_string(r.pass)}};
}

inline Json to_json(const PdoBuildReport& r) {
    Json elements = Json::array();
    for (const auto& e : r.elements)
        elements.push_back({{"word", e.word},
                            {"source_degree", e.source_degree},
                            {"re_z", e.exponent.real()},
                            {"im_z", e.exponent.imag()},
                            {"order_report", to_json(e.order_report)}});
    return Json{{"schema_version", kReportSchemaVersion},
                {"kind", "pdo_build_report"},
                {"order_bound", r.order_bound},
                {"remainder_order", r.remainder_order},
                {"elements", elements},
                {"verdict", verdict_string(r.pass)}};
}

inline Json to_json(const TensorIdentityReport& r) {
    return Json{{"schema_version", kReportSchemaVersion},
                {"kind", "tensor_identity_report"},
                {"word1", r.word1},
                {"word2", r.word2},
                {"max_relative_deviation", r.max_relative_deviation},
                {"tolerance", r.tolerance},
                {"verdict", verdict_string(r.pass)}};
}

inline Json to_json(const ProductRegularityReport& r) {
    Json identities = Json::array();
    for (const auto& i : r.identities) identities.push_back(to_json(i));
    Json orders = Json::array();
    for (const auto& [word, report] : r.order_checks)
        orders.push_back({{"word", word}, {"order_report", to_json(report)}});
    return Json{{"schema_version", kReportSchemaVersion},
                {"kind", "product_regularity_report"},
                {"label", r.label},
                {"degree1", r.degree1},
                {"degree2", r.degree2},
                {"basis_ordering", "lambda-sum, then (i, j)"},
                {"tensor_identities", identities},
                {"order_checks", orders},
                {"product_probe", to_json(r.product_probe)},
                {"verdict", verdict_string(r.pass)}};
}

inline std::string to_csv(const ProductRegularityReport& r) { return to_csv(r.product_probe); }

}  // namespace opscale
