#pragma once

// Shared helpers for the unit and acceptance suites: a random generator of
// exact-coefficient algebra elements and an independent polynomial-action
// oracle for the normal-ordering engine.

#include <map>
#include <random>
#include <vector>

#include "opscale/weyl.hpp"

namespace opscale::testing {

inline WeylElement random_weyl_element(std::mt19937_64& rng, int n_vars, int max_order,
                                       int max_terms = 4) {
    std::uniform_int_distribution<int> term_count(1, max_terms);
    std::uniform_int_distribution<int> numerator(-9, 9);
    std::uniform_int_distribution<int> denominator(1, 9);
    std::uniform_int_distribution<int> degree(0, max_order);
    std::uniform_int_distribution<int> var(0, n_vars - 1);
    std::uniform_int_distribution<int> side(0, 1);

    WeylElement e = WeylElement::zero(n_vars);
    const int terms = term_count(rng);
    for (int t = 0; t < terms; ++t) {
        WeylElement mono = WeylElement::constant(
            n_vars, GaussianRational(Rational(numerator(rng), denominator(rng))));
        const int d = degree(rng);
        for (int j = 0; j < d; ++j) {
            const int v = var(rng);
            mono = mono * (side(rng) == 0 ? WeylElement::position(n_vars, v)
                                          : WeylElement::derivative(n_vars, v));
        }
        e += mono;
    }
    return e;
}

/// Commutative polynomials as exponent-vector maps; the domain the algebra
/// acts on.
using Polynomial = std::map<std::vector<unsigned>, GaussianRational>;

inline void poly_add(Polynomial& p, const std::vector<unsigned>& mono, const GaussianRational& c) {
    if (c.is_zero()) return;
    auto it = p.find(mono);
    if (it == p.end()) {
        p.emplace(mono, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) p.erase(it);
}

/// Applies a normal-ordered element to a polynomial by the defining action:
/// derivatives differentiate, positions multiply. Independent of the
/// normal-ordering engine (no WeylElement products involved).
inline Polynomial apply_weyl(const WeylElement& op, const Polynomial& input) {
    Polynomial out;
    for (const auto& [mono, coeff] : op.terms()) {
        for (const auto& [expo, pcoeff] : input) {
            std::vector<unsigned> result = expo;
            BigInt factor = 1;
            bool kill = false;
            for (std::size_t v = 0; v < mono.beta.size(); ++v) {
                const unsigned b = mono.beta[v];
                if (result[v] < b) {
                    kill = true;
                    break;
                }
                for (unsigned j = 0; j < b; ++j) factor *= result[v] - j;
                result[v] -= b;
            }
            if (kill) continue;
            for (std::size_t v = 0; v < mono.alpha.size(); ++v) result[v] += mono.alpha[v];
            poly_add(out, result, coeff * (GaussianRational(Rational(factor)) * pcoeff));
        }
    }
    return out;
}

/// Enumerates the monomial basis of total degree <= max_degree.
inline std::vector<Polynomial> monomial_basis(int n_vars, int max_degree) {
    std::vector<std::vector<unsigned>> exponents;
    std::vector<unsigned> current(static_cast<std::size_t>(n_vars), 0);
    while (true) {
        unsigned total = 0;
        for (unsigned e : current) total += e;
        if (total <= static_cast<unsigned>(max_degree)) exponents.push_back(current);
        int pos = 0;
        while (pos < n_vars) {
            if (current[static_cast<std::size_t>(pos)] < static_cast<unsigned>(max_degree)) {
                ++current[static_cast<std::size_t>(pos)];
                break;
            }
            current[static_cast<std::size_t>(pos)] = 0;
            ++pos;
        }
        if (pos == n_vars) break;
    }
    std::vector<Polynomial> basis;
    for (const auto& e : exponents) {
        Polynomial p;
        p.emplace(e, GaussianRational(1));
        basis.push_back(std::move(p));
    }
    return basis;
}

/// Oracle equality: A and B agree as operators iff they agree on a spanning
/// set of polynomials of high enough degree.
inline bool agree_on_polynomials(const WeylElement& a, const WeylElement& b, int max_degree) {
    for (const auto& p : monomial_basis(a.n_vars(), max_degree))
        if (apply_weyl(a, p) != apply_weyl(b, p)) return false;
    return true;
}

}  // namespace opscale::testing
