#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Dense>

#include "opscale/operators.hpp"
#include "opscale/order_estimation.hpp"
#include "opscale/spectrum.hpp"
#include "opscale/towers.hpp"

namespace opscale {

/// Spectral-triple data at a fixed build dimension, expressed in the
/// eigenbasis of the scale operator: delta is its (sorted, >= c > 0)
/// eigenvalue list, grading a diagonal sign vector, the Dirac matrix and
/// the represented algebra generators compressions of the underlying
/// operators. Probes take nested prefix truncations of this data.
class SpectralTripleModel {
public:
    SpectralTripleModel(std::string label, Eigen::VectorXd delta, Eigen::VectorXd grading,
                        SpMat dirac, std::vector<std::pair<std::string, SpMat>> generators,
                        int delta_check_margin = 0)
        : label_(std::move(label)),
          delta_(std::move(delta)),
          grading_(std::move(grading)),
          dirac_(std::move(dirac)),
          generators_(std::move(generators)) {
        validate(delta_check_margin);
        spectrum_ = make_table_spectrum(label_ + ":scale", delta_);
    }

    const std::string& label() const { return label_; }
    int dim() const { return static_cast<int>(delta_.size()); }
    const Eigen::VectorXd& delta() const { return delta_; }
    const Eigen::VectorXd& grading() const { return grading_; }
    const SpMat& dirac() const { return dirac_; }
    const std::vector<std::pair<std::string, SpMat>>& generators() const { return generators_; }
    const SpectrumPtr& spectrum() const { return spectrum_; }

    int generator_count() const { return static_cast<int>(generators_.size()); }
    const std::string& generator_name(int i) const {
        return generators_.at(static_cast<std::size_t>(i)).first;
    }

    /// Prefix-compression family of a generator (bounded, claimed order 0).
    OperatorFamily generator_family(int i) const {
        return family_from_matrix(generators_.at(static_cast<std::size_t>(i)).first,
                                  generators_.at(static_cast<std::size_t>(i)).second, spectrum_, 0.0);
    }

    /// Prefix-compression family of [D, a_i], computed once at the build
    /// dimension so all truncations are nested.
    OperatorFamily dirac_commutator_family(int i) const {
        const SpMat& a = generators_.at(static_cast<std::size_t>(i)).second;
        SpMat comm = SpMat(dirac_ * a) - SpMat(a * dirac_);
        comm.prune([](int, int, const Complex& v) { return v != Complex(0.0, 0.0); });
        return family_from_matrix("[D," + generators_.at(static_cast<std::size_t>(i)).first + "]",
                                  comm, spectrum_, 0.0);
    }

private:
    void validate(int margin) const {
        const int n = dim();
        if (grading_.size() != n || dirac_.rows() != n || dirac_.cols() != n)
            throw std::invalid_argument("SpectralTripleModel: inconsistent dimensions");
        for (int i = 0; i < n; ++i) {
            if (grading_[i] != 1.0 && grading_[i] != -1.0)
                throw std::invalid_argument("SpectralTripleModel: grading must be +-1");
            if (!(delta_[i] > 0.0))
                throw std::invalid_argument("SpectralTripleModel: scale eigenvalues must be positive");
            if (i > 0 && delta_[i] < delta_[i - 1])
                throw std::invalid_argument("SpectralTripleModel: scale eigenvalues must be sorted");
        }
        const double dirac_scale = std::max(1.0, max_abs(dirac_));
        if (max_abs_diff(dirac_, adjoint_of(dirac_)) > 1e-13 * dirac_scale)
            throw std::invalid_argument("SpectralTripleModel: Dirac matrix is not self-adjoint");
        for (int k = 0; k < dirac_.outerSize(); ++k)
            for (SpMat::InnerIterator it(dirac_, k); it; ++it)
                if (grading_[it.row()] + grading_[it.col()] != 0.0 &&
                    std::abs(it.value()) > 1e-13 * dirac_scale)
                    throw std::invalid_argument("SpectralTripleModel: Dirac matrix is not odd");
        for (const auto& [name, a] : generators_) {
            if (a.rows() != n || a.cols() != n)
                throw std::invalid_argument("SpectralTripleModel: generator dimension mismatch");
            const double a_scale = std::max(1.0, max_abs(a));
            for (int k = 0; k < a.outerSize(); ++k)
                for (SpMat::InnerIterator it(a, k); it; ++it)
                    if (grading_[it.row()] != grading_[it.col()] &&
                        std::abs(it.value()) > 1e-13 * a_scale)
                        throw std::invalid_argument("SpectralTripleModel: generator '" + name +
                                                    "' is not even");
        }
        if (margin >= 0) {
            // Delta = D^2 + 1 holds on the interior block; the last rows may
            // carry compression artifacts of the underlying operator.
            SpMat square = SpMat(dirac_ * dirac_);
            Eigen::VectorXcd shift(n);
            for (int i = 0; i < n; ++i) shift[i] = Complex(1.0 - delta_[i], 0.0);
            SpMat residual = square + SpMat(diag_matrix(shift));
            residual.prune([](int, int, const Complex& v) { return v != Complex(0.0, 0.0); });
            const int interior = n - margin;
            double worst = 0.0;
            for (int k = 0; k < residual.outerSize(); ++k)
                for (SpMat::InnerIterator it(residual, k); it; ++it)
                    if (it.row() < interior && it.col() < interior)
                        worst = std::max(worst, std::abs(it.value()));
            if (worst > 1e-10 * std::max(1.0, delta_[n - 1]))
                throw std::invalid_argument("SpectralTripleModel: scale does not match D^2 + 1 "
                                            "(deviation " + std::to_string(worst) + ")");
        }
    }

    std::string label_;
    Eigen::VectorXd delta_;
    Eigen::VectorXd grading_;
    SpMat dirac_;
    std::vector<std::pair<std::string, SpMat>> generators_;
    SpectrumPtr spectrum_;
};

// ---------------------------------------------------------------------------
// Probes
// ---------------------------------------------------------------------------

struct NormRow {
    std::string generator;
    std::string source;  // "a" or "[D,a]"
    int level = 0;
    int truncation = 0;
    double norm = 0.0;
};

struct SlopeRow {
    std::string generator;
    std::string source;
    int level = 0;
    double slope = 0.0;
    double max_norm = 0.0;
    bool pass = false;
};

struct BoundedCommutatorReport {
    std::string label;
    std::vector<int> truncations;
    std::vector<NormRow> norms;
    std::vector<SlopeRow> slopes;
    bool pass = false;
};

/// || [D, a] || across truncations with the boundedness slope test per
/// generator.
inline BoundedCommutatorReport bounded_commutator_check(const SpectralTripleModel& triple,
                                                        const std::vector<int>& truncations,
                                                        const OrderOptions& options = {}) {
    detail::require_slope_truncations(truncations);
    BoundedCommutatorReport report;
    report.label = triple.label();
    report.truncations = truncations;
    report.pass = true;
    for (int i = 0; i < triple.generator_count(); ++i) {
        const OperatorFamily family = triple.dirac_commutator_family(i);
        std::vector<double> log_n, log_norm;
        double max_norm = 0.0, first_norm = 0.0;
        for (int n : truncations) {
            const double norm = operator_norm(family.at(n), options.norm);
            report.norms.push_back({triple.generator_name(i), "[D,a]", 0, n, norm});
            if (log_n.empty()) first_norm = std::max(norm, 1e-250);
            max_norm = std::max(max_norm, norm);
            log_n.push_back(std::log(static_cast<double>(n)));
            log_norm.push_back(std::log(std::max(norm, 1e-250)));
        }
        const double slope = detail::least_squares_slope(log_n, log_norm);
        const bool pass =
            slope < options.slope_tolerance && max_norm / first_norm < options.sigma_growth_cap;
        report.slopes.push_back({triple.generator_name(i), "[D,a]", 0, slope, max_norm, pass});
        report.pass = report.pass && pass;
    }
    return report;
}

struct CompactnessRow {
    std::string generator;
    int index = 0;
    double singular_value = 0.0;
};

struct CompactnessReport {
    std::string label;
    int truncation = 0;
    double threshold = 1e-3;
    std::vector<CompactnessRow> profile;  // decay profile, downsampled
    std::vector<std::pair<std::string, bool>> verdicts;
    bool pass = false;
};

/// Compactness proxy: singular values of a (D + i)^{-1} at the largest
/// truncation must decay below threshold * largest by the final index.
inline CompactnessReport compact_resolvent_check(const SpectralTripleModel& triple,
                                                 int truncation, double threshold = 1e-3) {
    if (truncation > triple.dim())
        throw std::invalid_argument("compact_resolvent_check: truncation beyond build dimension");
    CompactnessReport report;
    report.label = triple.label();
    report.truncation = truncation;
    report.threshold = threshold;
    report.pass = true;

    const Eigen::MatrixXcd d = Eigen::MatrixXcd(crop(triple.dirac(), truncation));
    Eigen::MatrixXcd shifted = d;
    for (int i = 0; i < truncation; ++i) shifted(i, i) += Complex(0.0, 1.0);
    const Eigen::MatrixXcd resolvent = shifted.partialPivLu().inverse();

    for (int g = 0; g < triple.generator_count(); ++g) {
        const Eigen::MatrixXcd a = Eigen::MatrixXcd(crop(triple.generators()[static_cast<std::size_t>(g)].second, truncation));
        const Eigen::MatrixXcd probe = a * resolvent;
        Eigen::MatrixXcd gram = probe.adjoint() * probe;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
        Eigen::VectorXd sv = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        std::sort(sv.data(), sv.data() + sv.size(), std::greater<double>());

        const double top = sv[0];
        const double last = sv[truncation - 1];
        const bool pass = top == 0.0 || last < threshold * top;
        report.verdicts.emplace_back(triple.generator_name(g), pass);
        report.pass = report.pass && pass;

        const int stride = std::max(1, truncation / 32);
        for (int j = 0; j < truncation; j += stride)
            report.profile.push_back({triple.generator_name(g), j + 1, sv[j]});
        report.profile.push_back({triple.generator_name(g), truncation, last});
    }
    return report;
}

struct RegularityReport {
    std::string label;
    int max_level = 0;
    std::vector<int> truncations;
    BoundedCommutatorReport bounded;
    std::vector<NormRow> norms;
    std::vector<SlopeRow> slopes;
    bool pass = false;
};

/// Evidence for membership of A + [D, A] in the smooth domain of
/// delta = [Delta^{1/2}, -]: every tower level k <= max_k must stay
/// bounded across truncations under the slope test.
inline RegularityReport regularity_probe(const SpectralTripleModel& triple,
                                         const std::vector<int>& truncations, int max_level,
                                         const OrderOptions& options = {}) {
    detail::require_slope_truncations(truncations);
    RegularityReport report;
    report.label = triple.label();
    report.max_level = max_level;
    report.truncations = truncations;
    report.bounded = bounded_commutator_check(triple, truncations, options);
    report.pass = report.bounded.pass;

    for (int i = 0; i < triple.generator_count(); ++i) {
        const std::array<std::pair<std::string, OperatorFamily>, 2> sources = {
            std::make_pair(std::string("a"), triple.generator_family(i)),
            std::make_pair(std::string("[D,a]"), triple.dirac_commutator_family(i))};
        for (const auto& [source, base] : sources) {
            const DeltaTower tower = delta_tower(base, max_level);
            for (int k = 0; k <= max_level; ++k) {
                std::vector<double> log_n, log_norm;
                double max_norm = 0.0, first_norm = 0.0;
                for (int n : truncations) {
                    const double norm = operator_norm(tower.level(k).at(n), options.norm);
                    report.norms.push_back({triple.generator_name(i), source, k, n, norm});
                    if (log_n.empty()) first_norm = std::max(norm, 1e-250);
                    max_norm = std::max(max_norm, norm);
                    log_n.push_back(std::log(static_cast<double>(n)));
                    log_norm.push_back(std::log(std::max(norm, 1e-250)));
                }
                const double slope = detail::least_squares_slope(log_n, log_norm);
                const bool pass = slope < options.slope_tolerance &&
                                  max_norm / first_norm < options.sigma_growth_cap;
                report.slopes.push_back(
                    {triple.generator_name(i), source, k, slope, max_norm, pass});
                report.pass = report.pass && pass;
            }
        }
    }
    return report;
}

}  // namespace opscale
