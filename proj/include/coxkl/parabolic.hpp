#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coxkl/kl_engine.hpp"
#include "coxkl/permutation.hpp"
#include "coxkl/polynomial.hpp"

namespace coxkl {

// The block parabolic subgroup H = S_m x ... x S_m (n blocks) of S_{mn},
// enumerated with signs.
std::vector<std::pair<Permutation, int>> h_elements(int n, int m);

// sum over u in H of sgn(u) P_{doubled(m,x) u, doubled(m,w)}.
// Zero when x is not below w (every summand vanishes).
LaurentPolynomial h_alternating_sum(KLEngine& engine, int m, const Permutation& x,
                                    const Permutation& w);

// The alternating sum divided by q^{C(m,2)(l(w)-l(x))}. `tilde` is present
// iff the quotient is an honest polynomial with nonnegative coefficients;
// otherwise the offending Laurent polynomial is the finding, not an error.
struct ParabolicResult {
    LaurentPolynomial raw;         // the alternating sum itself
    LaurentPolynomial normalized;  // raw shifted down by the q-power
    std::optional<IntPolynomial> tilde;
};

ParabolicResult parabolic_poly(KLEngine& engine, int m, const Permutation& x,
                               const Permutation& w);

struct ViolationWitness {
    Permutation x, w;
    int m = 0;
    int clause = 0;  // 1 = polynomiality/positivity, 2 = constant term, 3 = descent invariance, 4 = degree law
    LaurentPolynomial offending;
    std::string message;
};

// The four conjectured properties of the normalized sum:
//   (1) a polynomial with nonnegative coefficients,
//   (2) constant term 1,
//   (3) invariance under x -> xs for every simple s with ws < w,
//   (4) degree = m * deg P_{x,w}, and = 1 exactly when P_{x,w} = 1.
// Everything is reported verbatim; for Boolean w the unnormalized degree
// (l(w)-l(x) by the closed form) is recorded alongside so both readings of
// the degree law are visible.
struct ConjectureReport {
    Permutation x, w;
    int m = 0;
    bool boolean_w = false;
    IntPolynomial p;  // P_{x,w}
    std::optional<IntPolynomial> tilde;
    int raw_degree = 0;       // top exponent of the unnormalized sum
    int expected_degree = 0;  // m * deg P_{x,w}
    bool polynomiality = false;
    bool const_term_one = false;
    bool descent_invariance = false;
    bool degree_law = false;
    std::vector<ViolationWitness> witnesses;

    bool all_pass() const {
        return polynomiality && const_term_one && descent_invariance && degree_law;
    }
    // Degree-law failures on Boolean pairs are reported, not failed.
    bool pass_reported() const {
        return polynomiality && const_term_one && descent_invariance && (degree_law || boolean_w);
    }
};

ConjectureReport verify_conjecture(KLEngine& engine, int m, const Permutation& x,
                                   const Permutation& w);

// One row per equivalence class of reduced pairs (w,x) under
// (w,x) ~ (w^-1,x^-1) ~ (w0ww0, w0xw0) ~ (w0w^-1w0, w0x^-1w0), restricted to
// the non-trivial classes (P_{x,w} != 1); representative = lex-min of the
// orbit. Rows that exceed the engine's budget are marked skipped.
struct TableRow {
    enum class Status { Ok, Skipped, Violation };
    Permutation w, x;
    IntPolynomial p;
    Status status = Status::Skipped;
    IntPolynomial tilde;
    LaurentPolynomial offending;
    bool correlation = false;  // tilde == (P^2 + P(q^2))/2
};

struct TableReport {
    int n = 0, m = 0;
    std::vector<TableRow> rows;
};

// (w,x) is reduced: x < w, no cancelable index, and x descends at every
// right/left descent of w.
bool is_reduced_pair(const Permutation& w, const Permutation& x);

// Lex-min representatives of all reduced-pair classes of S_n (including the
// trivial ones; table_report filters).
std::vector<PairKey> reduced_pair_classes(int n);

TableReport table_report(KLEngine& engine, int n, int m);

}  // namespace coxkl
