#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace opscale {

/// Polynomial eigenvalue rule: lambda(i) = c0 + c1*m + c2*m^2 + ... with
/// m = offset + i. The enumeration index i always starts at 0.
struct PolyRule {
    std::vector<double> coeffs;
    long offset = 0;
};

/// Explicitly tabulated eigenvalues; only truncations up to values.size()
/// are defined.
struct TableRule {
    std::vector<double> values;
};

using SpectrumRule = std::variant<PolyRule, TableRule>;

/// A strictly positive, nondecreasing spectrum {lambda_i >= c > 0}: the
/// eigenvalue list of the scale operator, in its eigenbasis enumeration.
class SpectrumModel {
public:
    SpectrumModel(std::string label, SpectrumRule rule, double lower_bound)
        : label_(std::move(label)), rule_(std::move(rule)), lower_bound_(lower_bound) {
        if (!(lower_bound_ > 0.0))
            throw std::invalid_argument("SpectrumModel: lower bound must be positive");
    }

    const std::string& label() const { return label_; }
    double lower_bound() const { return lower_bound_; }
    const SpectrumRule& rule() const { return rule_; }

    double eigenvalue(int i) const {
        if (i < 0) throw std::invalid_argument("SpectrumModel: negative index");
        if (const auto* poly = std::get_if<PolyRule>(&rule_)) {
            const double m = static_cast<double>(poly->offset + i);
            double v = 0.0;
            for (auto it = poly->coeffs.rbegin(); it != poly->coeffs.rend(); ++it)
                v = v * m + *it;
            return v;
        }
        const auto& tab = std::get<TableRule>(rule_);
        if (static_cast<std::size_t>(i) >= tab.values.size())
            throw std::out_of_range("SpectrumModel: index beyond tabulated values");
        return tab.values[static_cast<std::size_t>(i)];
    }

    /// Largest truncation this model can produce (unbounded for poly rules).
    int max_truncation() const {
        if (std::holds_alternative<PolyRule>(rule_)) return std::numeric_limits<int>::max();
        return static_cast<int>(std::get<TableRule>(rule_).values.size());
    }

    /// First N eigenvalues; validates positivity and monotonicity on the
    /// requested range.
    Eigen::VectorXd weights(int n) const {
        if (n < 1) throw std::invalid_argument("SpectrumModel: truncation must be >= 1");
        Eigen::VectorXd w(n);
        for (int i = 0; i < n; ++i) {
            w[i] = eigenvalue(i);
            if (!(w[i] >= lower_bound_))
                throw std::invalid_argument("SpectrumModel '" + label_ +
                                            "': eigenvalue below lower bound at index " + std::to_string(i));
            if (i > 0 && w[i] < w[i - 1])
                throw std::invalid_argument("SpectrumModel '" + label_ +
                                            "': eigenvalues decrease at index " + std::to_string(i));
        }
        return w;
    }

    /// Componentwise lambda_i^e for the first n eigenvalues.
    Eigen::VectorXd weights_pow(int n, double e) const {
        Eigen::VectorXd w = weights(n);
        for (int i = 0; i < n; ++i) w[i] = std::pow(w[i], e);
        return w;
    }

private:
    std::string label_;
    SpectrumRule rule_;
    double lower_bound_;
};

using SpectrumPtr = std::shared_ptr<const SpectrumModel>;

inline SpectrumPtr make_spectrum(std::string label, SpectrumRule rule, double lower_bound) {
    return std::make_shared<SpectrumModel>(std::move(label), std::move(rule), lower_bound);
}

/// Spectrum backed by an explicit sorted eigenvalue vector.
inline SpectrumPtr make_table_spectrum(std::string label, const Eigen::VectorXd& values) {
    if (values.size() == 0) throw std::invalid_argument("make_table_spectrum: empty table");
    TableRule rule;
    rule.values.assign(values.data(), values.data() + values.size());
    return make_spectrum(std::move(label), std::move(rule), values.minCoeff());
}

}  // namespace opscale
