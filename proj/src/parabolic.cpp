#include "coxkl/parabolic.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "coxkl/patterns.hpp"

namespace coxkl {

std::vector<std::pair<Permutation, int>> h_elements(int n, int m) {
    if (n < 1 || m < 1 || n * m > Permutation::kMaxDegree)
        throw std::invalid_argument("h_elements: degree out of range");
    // all of S_m once, with signs
    std::vector<std::pair<Permutation, int>> block;
    {
        std::vector<int> img(m);
        std::iota(img.begin(), img.end(), 1);
        do {
            Permutation p = Permutation::from_images(img);
            block.emplace_back(p, length(p) % 2 ? -1 : 1);
        } while (std::next_permutation(img.begin(), img.end()));
    }
    uint64_t total = 1;
    for (int i = 0; i < n; ++i) {
        total *= block.size();
        if (total > (1ull << 24)) throw BudgetExceeded("h_elements: enumeration budget exceeded");
    }

    std::vector<std::pair<Permutation, int>> out;
    out.reserve(total);
    std::vector<size_t> odo(n, 0);
    for (;;) {
        std::vector<int> img(n * m);
        int sign = 1;
        for (int b = 0; b < n; ++b) {
            const auto& [sigma, sg] = block[odo[b]];
            sign *= sg;
            for (int t = 1; t <= m; ++t) img[m * b + t - 1] = m * b + sigma(t);
        }
        out.emplace_back(Permutation::from_images(img), sign);
        int b = 0;
        while (b < n && ++odo[b] == block.size()) odo[b++] = 0;
        if (b == n) break;
    }
    return out;
}

LaurentPolynomial h_alternating_sum(KLEngine& engine, int m, const Permutation& x,
                                    const Permutation& w) {
    if (x.degree() != w.degree()) throw std::invalid_argument("h_alternating_sum: degree mismatch");
    LaurentPolynomial acc;
    if (!bruhat_leq(x, w)) return acc;
    const Permutation wt = doubled(m, w);
    const Permutation xt = doubled(m, x);
    for (const auto& [u, sign] : h_elements(w.degree(), m)) {
        const IntPolynomial p = engine.kl_poly(compose(xt, u), wt);
        acc.add_scaled(p, sign, 0);
    }
    return acc;
}

ParabolicResult parabolic_poly(KLEngine& engine, int m, const Permutation& x,
                               const Permutation& w) {
    ParabolicResult res;
    res.raw = h_alternating_sum(engine, m, x, w);
    const int shift = (m * (m - 1) / 2) * (length(w) - length(x));
    res.normalized = res.raw.shifted(-shift);
    IntPolynomial p;
    if (res.normalized.to_poly(p)) res.tilde = std::move(p);
    return res;
}

ConjectureReport verify_conjecture(KLEngine& engine, int m, const Permutation& x,
                                   const Permutation& w) {
    ConjectureReport rep;
    rep.x = x;
    rep.w = w;
    rep.m = m;
    rep.boolean_w = is_in_class(w, PatternClass::Boolean);
    rep.p = engine.kl_poly(x, w);

    ParabolicResult pr = parabolic_poly(engine, m, x, w);
    rep.raw_degree = pr.raw.is_zero() ? 0 : pr.raw.max_exponent();
    rep.expected_degree = m * std::max(rep.p.degree(), 0);
    rep.tilde = pr.tilde;

    rep.polynomiality = pr.tilde.has_value();
    if (!rep.polynomiality) {
        rep.witnesses.push_back({x, w, m, 1, pr.normalized,
                                 "normalized sum is not a nonnegative polynomial"});
        return rep;
    }
    const IntPolynomial& t = *pr.tilde;

    rep.const_term_one = t.coeff(0) == 1;
    if (!rep.const_term_one)
        rep.witnesses.push_back({x, w, m, 2, pr.normalized, "constant term is not 1"});

    rep.descent_invariance = true;
    for (int s : right_descents(w)) {
        Permutation xs = x;
        xs.swap_positions(s);
        ParabolicResult other = parabolic_poly(engine, m, xs, w);
        if (!(other.normalized == pr.normalized)) {
            rep.descent_invariance = false;
            rep.witnesses.push_back({xs, w, m, 3, other.normalized,
                                     "sum changes under x -> xs at descent s_" + std::to_string(s)});
        }
    }

    rep.degree_law = (t.degree() == rep.expected_degree) && (t.is_one() == rep.p.is_one());
    if (!rep.degree_law)
        rep.witnesses.push_back({x, w, m, 4, pr.normalized,
                                 "degree " + std::to_string(t.degree()) + " != m * deg P = " +
                                     std::to_string(rep.expected_degree)});
    return rep;
}

bool is_reduced_pair(const Permutation& w, const Permutation& x) {
    if (x == w || !bruhat_leq(x, w)) return false;
    for (uint32_t m = right_descent_mask(w); m; m &= m - 1) {
        const int s = __builtin_ctz(m) + 1;
        if (!has_right_descent(x, s)) return false;
    }
    for (uint32_t m = left_descent_mask(w); m; m &= m - 1) {
        const int s = __builtin_ctz(m) + 1;
        if (!has_left_descent(x, s)) return false;
    }
    return find_cancelable_index(w, x) < 0;
}

namespace {

PairKey pair_orbit_min(const PairKey& k) {
    PairKey best = k;
    const PairKey inv{k.w.inverse(), k.x.inverse()};
    if (inv < best) best = inv;
    const PairKey conj{w0_conjugate(k.w), w0_conjugate(k.x)};
    if (conj < best) best = conj;
    const PairKey both{w0_conjugate(inv.w), w0_conjugate(inv.x)};
    if (both < best) best = both;
    return best;
}

}  // namespace

std::vector<PairKey> reduced_pair_classes(int n) {
    std::set<PairKey> classes;
    std::vector<int> wimg(n), ximg(n);
    std::iota(wimg.begin(), wimg.end(), 1);
    do {
        const Permutation w = Permutation::from_images(wimg);
        if (w.is_identity()) continue;
        std::iota(ximg.begin(), ximg.end(), 1);
        do {
            const Permutation x = Permutation::from_images(ximg);
            if (!is_reduced_pair(w, x)) continue;
            classes.insert(pair_orbit_min(PairKey{w, x}));
        } while (std::next_permutation(ximg.begin(), ximg.end()));
    } while (std::next_permutation(wimg.begin(), wimg.end()));
    return {classes.begin(), classes.end()};
}

TableReport table_report(KLEngine& engine, int n, int m) {
    TableReport report;
    report.n = n;
    report.m = m;
    for (const PairKey& k : reduced_pair_classes(n)) {
        TableRow row;
        row.w = k.w;
        row.x = k.x;
        row.p = engine.kl_poly(k.x, k.w);
        if (row.p.is_one()) continue;  // only the non-trivial classes are listed
        try {
            ParabolicResult pr = parabolic_poly(engine, m, k.x, k.w);
            if (pr.tilde) {
                row.status = TableRow::Status::Ok;
                row.tilde = *pr.tilde;
                // (P^2 + P(q^2)) / 2, when integral
                IntPolynomial num = row.p * row.p + row.p.substitute_power(2);
                bool integral = true;
                std::vector<uint64_t> half(num.coeffs().size());
                for (size_t i = 0; i < half.size(); ++i) {
                    integral = integral && num.coeffs()[i] % 2 == 0;
                    half[i] = num.coeffs()[i] / 2;
                }
                row.correlation = integral && IntPolynomial(std::move(half)) == row.tilde;
            } else {
                row.status = TableRow::Status::Violation;
                row.offending = pr.normalized;
            }
        } catch (const BudgetExceeded&) {
            row.status = TableRow::Status::Skipped;
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace coxkl
