#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "coxkl/permutation.hpp"
#include "coxkl/polynomial.hpp"

namespace coxkl {

// Raised when a computation would exceed the configured memory budget,
// interval-length cap, or deadline. Callers that can degrade (table rows,
// sweeps) catch it and mark work as skipped.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Persistent store: canonical pair -> glossary index, the deduplicated
// glossary of distinct polynomials, and the sparse mu table.
struct KLStore {
    int degree = 0;  // largest degree that contributed pairs
    int level = -1;  // highest fully filled length (fill_level bookkeeping)
    std::vector<IntPolynomial> glossary;
    std::unordered_map<PairKey, uint32_t, PairKeyHash> table;
    std::unordered_map<PairKey, uint64_t, PairKeyHash> mu_table;

    uint32_t intern(const IntPolynomial& p);
    const IntPolynomial& poly(uint32_t idx) const { return glossary[idx]; }
    void rebuild_intern_index();

    // Index-independent comparison (same pairs mapping to equal polynomials).
    bool semantically_equal(const KLStore& other) const;

private:
    std::unordered_map<IntPolynomial, uint32_t, IntPolynomialHash> intern_index_;
};

// Memoised Kazhdan-Lusztig recursion over lower Bruhat intervals.
//
// P_{x,w} = q^c P_{x,ws} + q^{1-c} P_{xs,ws}
//           - sum_{z : zs<z<ws, mu(z,ws)>0, x<=z} mu(z,ws) q^{(l(w)-l(z))/2} P_{x,z}
// with s the first right descent of w and c = [xs < x].
//
// Work is organised in rows: for a top element, the polynomials of all
// extremal x <= top (x descends wherever top does, on both sides); other x
// reach their extremal representative by P-preserving raises. Rows live in
// an evictable cache; the persistent store keeps canonical pairs only.
class KLEngine {
public:
    struct Options {
        bool canonicalize = true;  // canonical pair keys + orbit sharing of rows
        int workers = 1;
        uint64_t memory_budget = 8ull << 30;
        int max_interval_length = 64;
        std::optional<std::chrono::steady_clock::time_point> deadline;
    };

    explicit KLEngine(Options opt = Options{});
    KLEngine(KLStore store, Options opt = Options{});
    ~KLEngine();

    KLEngine(const KLEngine&) = delete;
    KLEngine& operator=(const KLEngine&) = delete;

    // P_{x,w}; the zero polynomial when x is not below w.
    IntPolynomial kl_poly(const Permutation& x, const Permutation& w);

    // Coefficient of q^{(l(w)-l(x)-1)/2} in P_{x,w}; 0 for even length gaps.
    uint64_t mu(const Permutation& x, const Permutation& w);

    // Interns every canonical pair with l(w) == target_length, w in S_n.
    // Levels must be filled in order.
    void fill_level(int n, int target_length);
    void fill_all(int n, int max_length = -1);

    // P_{x,top} for every x <= top.
    std::map<Permutation, IntPolynomial> interval_table(const Permutation& top);

    KLStore& store() { return store_; }
    const KLStore& store() const { return store_; }
    const Options& options() const { return opts_; }

    struct Stats {
        uint64_t rows_built = 0;
        uint64_t row_entries = 0;
        uint64_t evictions = 0;
        uint64_t cache_bytes = 0;
    };
    Stats stats() const;

private:
    struct Impl;
    KLStore store_;
    Options opts_;
    std::unique_ptr<Impl> impl_;
};

}  // namespace coxkl
