#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "opscale/models.hpp"
#include "opscale/spectrum.hpp"
#include "opscale/triples.hpp"

namespace opscale {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed JSON in '" + path + "': " + e.what());
    }
    return j;
}

/// Spectrum config: {"label", "rule": {"type": "poly", "coeffs": [...],
/// "offset": 0} | {"type": "table", "values": [...]}, "lower_bound": c}.
inline SpectrumPtr spectrum_from_json(const nlohmann::json& j) {
    try {
        const std::string label = j.at("label").get<std::string>();
        const double lower_bound = j.at("lower_bound").get<double>();
        const auto& rule = j.at("rule");
        const std::string type = rule.at("type").get<std::string>();
        if (type == "poly") {
            PolyRule poly;
            poly.coeffs = rule.at("coeffs").get<std::vector<double>>();
            poly.offset = rule.value("offset", 0L);
            return make_spectrum(label, poly, lower_bound);
        }
        if (type == "table") {
            TableRule table;
            table.values = rule.at("values").get<std::vector<double>>();
            return make_spectrum(label, table, lower_bound);
        }
        throw ConfigError("unknown spectrum rule type '" + type + "'");
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid spectrum config: ") + e.what());
    }
}

/// Resolves a builtin spectrum name or a JSON file path.
inline SpectrumPtr resolve_spectrum(const std::string& ref) {
    if (ref == "circle" || ref == "oscillator") return builtin_spectrum(ref);
    return spectrum_from_json(load_json_file(ref));
}

/// Triple config: either {"label", "builtin": name} or
/// {"label",
///  "dirac": {"type": "doubled-mode-poly", "coeffs": [...]} | {"type": "zero"},
///  "grading": "fibre" | "alternating",
///  "generators": [{"name", "rule": {"type": "shift" | "identity" |
///                  "cyclic-shift" | "mode-diag-poly" (+"coeffs") |
///                  "mode-diag-signed-sqrt"}}]}.
inline SpectralTripleModel triple_from_json(const nlohmann::json& j, int dim) {
    try {
        if (j.contains("builtin"))
            return builtin_triple(j.at("builtin").get<std::string>(), dim);

        const std::string label = j.at("label").get<std::string>();
        const auto& dirac = j.at("dirac");
        const std::string dirac_type = dirac.at("type").get<std::string>();

        if (dirac_type == "doubled-mode-poly") {
            std::vector<ModeGeneratorSpec> gens;
            for (const auto& g : j.at("generators")) {
                ModeGeneratorSpec spec;
                spec.name = g.at("name").get<std::string>();
                const auto& rule = g.at("rule");
                spec.kind = rule.at("type").get<std::string>();
                if (rule.contains("coeffs")) spec.coeffs = rule.at("coeffs").get<std::vector<double>>();
                gens.push_back(std::move(spec));
            }
            SpectralTripleModel model = doubled_mode_triple(
                label, dim, dirac.at("coeffs").get<std::vector<double>>(), gens);
            return model;
        }
        if (dirac_type == "zero") {
            if (dim < 4 || dim % 2 != 0)
                throw ConfigError("zero-Dirac triples need an even dimension >= 4");
            Eigen::VectorXd delta = Eigen::VectorXd::Ones(dim);
            Eigen::VectorXd grading(dim);
            for (int i = 0; i < dim; ++i) grading[i] = (i % 2 == 0) ? 1.0 : -1.0;
            std::vector<std::pair<std::string, SpMat>> gens;
            for (const auto& g : j.at("generators")) {
                const std::string name = g.at("name").get<std::string>();
                const std::string type = g.at("rule").at("type").get<std::string>();
                if (type == "cyclic-shift")
                    gens.emplace_back(name, sparse_kron(cyclic_shift_matrix(dim / 2), identity_matrix(2)));
                else if (type == "identity")
                    gens.emplace_back(name, identity_matrix(dim));
                else
                    throw ConfigError("generator rule '" + type + "' unsupported with a zero Dirac");
            }
            return SpectralTripleModel(label, std::move(delta), std::move(grading), SpMat(dim, dim),
                                       std::move(gens), 0);
        }
        throw ConfigError("unknown dirac type '" + dirac_type + "'");
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid triple config: ") + e.what());
    }
}

inline SpectralTripleModel resolve_triple(const std::string& ref, int dim) {
    if (ref == "circle" || ref == "trivial" || ref == "oscillator" || ref == "nonregular" ||
        ref == "flat")
        return builtin_triple(ref, dim);
    return triple_from_json(load_json_file(ref), dim);
}

/// Strictly increasing truncation list; slope-test subcommands additionally
/// require at least three sizes.
inline std::vector<int> parse_truncation_list(const std::string& csv, bool slope_test) {
    std::vector<int> out;
    std::string token;
    for (char c : csv + ",") {
        if (c == ',') {
            if (token.empty()) throw ConfigError("empty entry in truncation list");
            out.push_back(std::stoi(token));
            token.clear();
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            token += c;
        } else {
            throw ConfigError("invalid character in truncation list");
        }
    }
    if (out.empty()) throw ConfigError("empty truncation list");
    for (std::size_t i = 1; i < out.size(); ++i)
        if (out[i] <= out[i - 1]) throw ConfigError("truncation list must be strictly increasing");
    if (slope_test && out.size() < 3)
        throw ConfigError("slope-test subcommands need at least 3 truncation sizes");
    return out;
}

}  // namespace opscale
