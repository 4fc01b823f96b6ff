#pragma once

#include <algorithm>
#include <cctype>
#include <complex>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace opscale {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact complex coefficient re + im*i with rational parts.
struct GaussianRational {
    Rational re{0};
    Rational im{0};

    GaussianRational() = default;
    GaussianRational(Rational r) : re(std::move(r)) {}
    GaussianRational(long r) : re(r) {}
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return re == 0 && im == 0; }

    GaussianRational operator-() const { return {-re, -im}; }
    GaussianRational& operator+=(const GaussianRational& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }

    std::complex<double> to_complex() const {
        return {static_cast<double>(re), static_cast<double>(im)};
    }

    std::string to_string() const {
        auto rat = [](const Rational& r) {
            std::ostringstream os;
            os << r;
            return os.str();
        };
        if (im == 0) return rat(re);
        if (re == 0) {
            if (im == 1) return "i";
            if (im == -1) return "-i";
            return rat(im) + "*i";
        }
        std::string s = rat(re);
        if (im > 0)
            s += im == 1 ? "+i" : "+" + rat(im) + "*i";
        else
            s += im == -1 ? "-i" : "-" + rat(-im) + "*i";
        return "(" + s + ")";
    }
};

inline BigInt binomial_int(unsigned n, unsigned k) {
    if (k > n) return 0;
    BigInt acc = 1;
    for (unsigned j = 1; j <= k; ++j) {
        acc *= n - k + j;
        acc /= j;
    }
    return acc;
}

inline BigInt factorial_int(unsigned n) {
    BigInt acc = 1;
    for (unsigned j = 2; j <= n; ++j) acc *= j;
    return acc;
}

/// Normal-ordered monomial x^alpha d^beta (all position factors left of all
/// derivative factors). The exponent vectors always have the ambient
/// variable count.
struct WeylMonomial {
    std::vector<unsigned> alpha;
    std::vector<unsigned> beta;

    unsigned total_degree() const {
        unsigned d = 0;
        for (unsigned a : alpha) d += a;
        for (unsigned b : beta) d += b;
        return d;
    }

    friend bool operator==(const WeylMonomial& a, const WeylMonomial& b) {
        return a.alpha == b.alpha && a.beta == b.beta;
    }
    friend bool operator<(const WeylMonomial& a, const WeylMonomial& b) {
        if (a.alpha != b.alpha) return a.alpha < b.alpha;
        return a.beta < b.beta;
    }
};

struct WeylError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Element of the polynomial algebra generated by positions x_i and
/// derivatives d_i with [d_i, x_i] = 1, kept in normal order with exact
/// coefficients. The filtration order counts every generator with degree 1.
class WeylElement {
public:
    WeylElement() : n_vars_(1) {}
    explicit WeylElement(int n_vars) : n_vars_(n_vars) {
        if (n_vars < 1) throw WeylError("WeylElement: need at least one variable");
    }

    static WeylElement zero(int n_vars) { return WeylElement(n_vars); }

    static WeylElement constant(int n_vars, GaussianRational c) {
        WeylElement e(n_vars);
        if (!c.is_zero())
            e.terms_.emplace(WeylMonomial{std::vector<unsigned>(static_cast<std::size_t>(n_vars), 0),
                                          std::vector<unsigned>(static_cast<std::size_t>(n_vars), 0)},
                             std::move(c));
        return e;
    }

    static WeylElement one(int n_vars) { return constant(n_vars, GaussianRational(1)); }

    static WeylElement position(int n_vars, int i) {
        WeylElement e(n_vars);
        WeylMonomial m{std::vector<unsigned>(static_cast<std::size_t>(n_vars), 0),
                       std::vector<unsigned>(static_cast<std::size_t>(n_vars), 0)};
        m.alpha.at(static_cast<std::size_t>(i)) = 1;
        e.terms_.emplace(std::move(m), GaussianRational(1));
        return e;
    }

    static WeylElement derivative(int n_vars, int i) {
        WeylElement e(n_vars);
        WeylMonomial m{std::vector<unsigned>(static_cast<std::size_t>(n_vars), 0),
                       std::vector<unsigned>(static_cast<std::size_t>(n_vars), 0)};
        m.beta.at(static_cast<std::size_t>(i)) = 1;
        e.terms_.emplace(std::move(m), GaussianRational(1));
        return e;
    }

    int n_vars() const { return n_vars_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const std::map<WeylMonomial, GaussianRational>& terms() const { return terms_; }

    /// Filtration order: max total degree over stored monomials; the zero
    /// element has no order.
    std::optional<int> order() const {
        if (terms_.empty()) return std::nullopt;
        unsigned best = 0;
        for (const auto& [m, c] : terms_) best = std::max(best, m.total_degree());
        return static_cast<int>(best);
    }

    void add_term(const WeylMonomial& m, const GaussianRational& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
            return;
        }
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }

    WeylElement& operator+=(const WeylElement& o) {
        require_same_vars(o);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    WeylElement& operator-=(const WeylElement& o) {
        require_same_vars(o);
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend WeylElement operator+(WeylElement a, const WeylElement& b) { return a += b; }
    friend WeylElement operator-(WeylElement a, const WeylElement& b) { return a -= b; }
    WeylElement operator-() const {
        WeylElement out(n_vars_);
        for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
        return out;
    }

    friend WeylElement operator*(const GaussianRational& c, const WeylElement& e) {
        WeylElement out(e.n_vars_);
        if (c.is_zero()) return out;
        for (const auto& [m, v] : e.terms_) out.terms_.emplace(m, c * v);
        return out;
    }

    friend bool operator==(const WeylElement& a, const WeylElement& b) {
        return a.n_vars_ == b.n_vars_ && a.terms_ == b.terms_;
    }

    /// Normal-ordered product. Reordering uses the closed form
    /// d^b x^a = sum_k C(b,k) C(a,k) k! x^{a-k} d^{b-k} variable by
    /// variable, not term-by-term bubbling.
    friend WeylElement operator*(const WeylElement& lhs, const WeylElement& rhs) {
        lhs.require_same_vars(rhs);
        const int nv = lhs.n_vars_;
        WeylElement out(nv);
        for (const auto& [m1, c1] : lhs.terms_) {
            for (const auto& [m2, c2] : rhs.terms_) {
                const GaussianRational base = c1 * c2;
                std::vector<unsigned> kmax(static_cast<std::size_t>(nv));
                for (int i = 0; i < nv; ++i)
                    kmax[static_cast<std::size_t>(i)] =
                        std::min(m1.beta[static_cast<std::size_t>(i)], m2.alpha[static_cast<std::size_t>(i)]);
                std::vector<unsigned> k(static_cast<std::size_t>(nv), 0);
                while (true) {
                    BigInt factor = 1;
                    for (int i = 0; i < nv; ++i) {
                        const unsigned ki = k[static_cast<std::size_t>(i)];
                        if (ki > 0)
                            factor *= binomial_int(m1.beta[static_cast<std::size_t>(i)], ki) *
                                      binomial_int(m2.alpha[static_cast<std::size_t>(i)], ki) *
                                      factorial_int(ki);
                    }
                    WeylMonomial m{std::vector<unsigned>(static_cast<std::size_t>(nv)),
                                   std::vector<unsigned>(static_cast<std::size_t>(nv))};
                    for (int i = 0; i < nv; ++i) {
                        const auto si = static_cast<std::size_t>(i);
                        m.alpha[si] = m1.alpha[si] + m2.alpha[si] - k[si];
                        m.beta[si] = m1.beta[si] + m2.beta[si] - k[si];
                    }
                    out.add_term(m, GaussianRational(Rational(factor)) * base);

                    int pos = 0;
                    while (pos < nv && k[static_cast<std::size_t>(pos)] == kmax[static_cast<std::size_t>(pos)]) {
                        k[static_cast<std::size_t>(pos)] = 0;
                        ++pos;
                    }
                    if (pos == nv) break;
                    ++k[static_cast<std::size_t>(pos)];
                }
            }
        }
        return out;
    }

    /// Canonical display: terms by descending total degree, then by
    /// monomial; generators print as x1..xn, d1..dn.
    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::vector<const std::pair<const WeylMonomial, GaussianRational>*> items;
        items.reserve(terms_.size());
        for (const auto& t : terms_) items.push_back(&t);
        std::stable_sort(items.begin(), items.end(), [](const auto* a, const auto* b) {
            const unsigned da = a->first.total_degree(), db = b->first.total_degree();
            if (da != db) return da > db;
            return a->first < b->first;
        });
        std::string out;
        bool first = true;
        for (const auto* item : items) {
            const auto& [m, c] = *item;
            std::string coeff = c.to_string();
            bool negative = false;
            if (!coeff.empty() && coeff[0] == '-' && coeff.find('(') == std::string::npos) {
                negative = true;
                coeff = coeff.substr(1);
            }
            std::string factors;
            for (int i = 0; i < n_vars_; ++i) {
                const unsigned a = m.alpha[static_cast<std::size_t>(i)];
                if (a == 0) continue;
                if (!factors.empty()) factors += "*";
                factors += "x" + std::to_string(i + 1);
                if (a > 1) factors += "^" + std::to_string(a);
            }
            for (int i = 0; i < n_vars_; ++i) {
                const unsigned b = m.beta[static_cast<std::size_t>(i)];
                if (b == 0) continue;
                if (!factors.empty()) factors += "*";
                factors += "d" + std::to_string(i + 1);
                if (b > 1) factors += "^" + std::to_string(b);
            }
            std::string body;
            if (factors.empty())
                body = coeff;
            else if (coeff == "1")
                body = factors;
            else
                body = coeff + "*" + factors;
            if (first) {
                out += negative ? "-" + body : body;
                first = false;
            } else {
                out += negative ? " - " + body : " + " + body;
            }
        }
        return out;
    }

private:
    void require_same_vars(const WeylElement& o) const {
        if (n_vars_ != o.n_vars_)
            throw WeylError("WeylElement: variable count mismatch (" + std::to_string(n_vars_) +
                            " vs " + std::to_string(o.n_vars_) + ")");
    }

    int n_vars_;
    std::map<WeylMonomial, GaussianRational> terms_;
};

inline WeylElement commutator(const WeylElement& a, const WeylElement& b) {
    return a * b - b * a;
}

/// The distinguished scale element 1 + sum_i (x_i^2 - d_i^2).
inline WeylElement weyl_laplacian(int n_vars) {
    WeylElement acc = WeylElement::one(n_vars);
    for (int i = 0; i < n_vars; ++i) {
        const WeylElement x = WeylElement::position(n_vars, i);
        const WeylElement d = WeylElement::derivative(n_vars, i);
        acc += x * x - d * d;
    }
    return acc;
}

struct FiltrationReport {
    std::string element;
    std::string commutator_form;
    std::optional<int> element_order;
    std::optional<int> commutator_order;
    bool pass = false;
};

/// Verifies order([Laplacian, A]) <= order(A) + 1; exact arithmetic, so the
/// verdict is a theorem check rather than a tolerance test.
inline FiltrationReport filtration_check(const WeylElement& a) {
    const WeylElement comm = commutator(weyl_laplacian(a.n_vars()), a);
    FiltrationReport report;
    report.element = a.to_string();
    report.commutator_form = comm.to_string();
    report.element_order = a.order();
    report.commutator_order = comm.order();
    if (!report.commutator_order.has_value())
        report.pass = true;  // commutator vanished
    else if (!report.element_order.has_value())
        report.pass = false;  // [Delta, 0] cannot be nonzero
    else
        report.pass = *report.commutator_order <= *report.element_order + 1;
    return report;
}

// ---------------------------------------------------------------------------
// Parser for the text syntax, e.g. "2*x1^2*d1 - d2^2 + 1".
//
//   expr     := [sign] term (('+' | '-') term)*
//   term     := factor ('*' factor)*
//   factor   := rational | 'i' | variable ['^' integer]
//   rational := integer ['/' integer]
//   variable := ('x' | 'd') integer          (1-based index)
// ---------------------------------------------------------------------------

struct WeylParseError : std::runtime_error {
    std::size_t position;
    WeylParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
};

namespace detail {

class WeylParser {
public:
    WeylParser(std::string text, int n_vars) : text_(std::move(text)), n_vars_(n_vars) {}

    WeylElement parse() {
        skip_ws();
        WeylElement acc = WeylElement::zero(n_vars_);
        bool negative = consume_sign();
        acc += signed_term(negative);
        skip_ws();
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c != '+' && c != '-')
                throw WeylParseError("expected '+' or '-'", pos_);
            ++pos_;
            skip_ws();
            acc += signed_term(c == '-');
            skip_ws();
        }
        return acc;
    }

private:
    WeylElement signed_term(bool negative) {
        WeylElement t = term();
        return negative ? -t : t;
    }

    WeylElement term() {
        WeylElement acc = factor();
        skip_ws();
        while (pos_ < text_.size() && text_[pos_] == '*') {
            ++pos_;
            skip_ws();
            acc = acc * factor();
            skip_ws();
        }
        return acc;
    }

    WeylElement factor() {
        skip_ws();
        if (pos_ >= text_.size()) throw WeylParseError("unexpected end of expression", pos_);
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const Rational r = rational();
            return WeylElement::constant(n_vars_, GaussianRational(r));
        }
        if (c == 'i') {
            ++pos_;
            return WeylElement::constant(n_vars_, GaussianRational(Rational(0), Rational(1)));
        }
        if (c == 'x' || c == 'd') {
            ++pos_;
            const std::size_t at = pos_;
            const long idx = integer();
            if (idx < 1 || idx > n_vars_)
                throw WeylParseError("variable index out of range", at);
            WeylElement base = c == 'x' ? WeylElement::position(n_vars_, static_cast<int>(idx - 1))
                                        : WeylElement::derivative(n_vars_, static_cast<int>(idx - 1));
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == '^') {
                ++pos_;
                skip_ws();
                const std::size_t pat = pos_;
                const long e = integer();
                if (e < 0) throw WeylParseError("negative exponent", pat);
                WeylElement acc = WeylElement::one(n_vars_);
                for (long j = 0; j < e; ++j) acc = acc * base;
                return acc;
            }
            return base;
        }
        throw WeylParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    Rational rational() {
        const BigInt num = big_integer();
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '/') {
            ++pos_;
            skip_ws();
            const std::size_t at = pos_;
            const BigInt den = big_integer();
            if (den == 0) throw WeylParseError("zero denominator", at);
            return Rational(num, den);
        }
        return Rational(num);
    }

    BigInt big_integer() {
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
            throw WeylParseError("expected integer", pos_);
        BigInt v = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            v = v * 10 + (text_[pos_] - '0');
            ++pos_;
        }
        return v;
    }

    long integer() {
        const BigInt v = big_integer();
        return static_cast<long>(v);
    }

    bool consume_sign() {
        if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
            const bool neg = text_[pos_] == '-';
            ++pos_;
            skip_ws();
            return neg;
        }
        return false;
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    std::string text_;
    int n_vars_;
    std::size_t pos_ = 0;
};

inline int scan_variable_count(const std::string& text) {
    int best = 1;
    for (std::size_t i = 0; i + 1 < text.size(); ++i) {
        if ((text[i] == 'x' || text[i] == 'd') &&
            std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
            int idx = 0;
            std::size_t j = i + 1;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
                idx = idx * 10 + (text[j] - '0');
                ++j;
            }
            best = std::max(best, idx);
        }
    }
    return best;
}

}  // namespace detail

/// Parses the documented syntax into normal form. With n_vars = 0 the
/// variable count is inferred from the largest index mentioned.
inline WeylElement parse_weyl(const std::string& text, int n_vars = 0) {
    const int nv = n_vars > 0 ? n_vars : detail::scan_variable_count(text);
    detail::WeylParser parser(text, nv);
    return parser.parse();
}

}  // namespace opscale
