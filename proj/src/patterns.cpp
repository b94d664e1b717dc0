#include "coxkl/patterns.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>

namespace coxkl {

const std::vector<Permutation>& forbidden_patterns(PatternClass c) {
    static const std::vector<Permutation> avoiding321 = {Permutation::parse("321")};
    static const std::vector<Permutation> smooth = {Permutation::parse("4231"),
                                                    Permutation::parse("3412")};
    static const std::vector<Permutation> boolean = {Permutation::parse("321"),
                                                     Permutation::parse("3412")};
    static const std::vector<Permutation> tight = {
        Permutation::parse("321"), Permutation::parse("46718235"), Permutation::parse("46781235"),
        Permutation::parse("56718234"), Permutation::parse("56781234")};
    switch (c) {
        case PatternClass::Avoiding321: return avoiding321;
        case PatternClass::Smooth: return smooth;
        case PatternClass::Boolean: return boolean;
        case PatternClass::Tight: return tight;
    }
    throw std::logic_error("unknown pattern class");
}

std::string class_name(PatternClass c) {
    switch (c) {
        case PatternClass::Avoiding321: return "321-avoiding";
        case PatternClass::Smooth: return "smooth";
        case PatternClass::Boolean: return "boolean";
        case PatternClass::Tight: return "tight";
    }
    throw std::logic_error("unknown pattern class");
}

PatternClass class_from_name(const std::string& name) {
    for (PatternClass c : all_pattern_classes())
        if (class_name(c) == name) return c;
    throw std::invalid_argument("unknown pattern class: " + name);
}

const std::vector<PatternClass>& all_pattern_classes() {
    static const std::vector<PatternClass> all = {PatternClass::Avoiding321, PatternClass::Smooth,
                                                  PatternClass::Boolean, PatternClass::Tight};
    return all;
}

namespace {

// Depth-first choice of positions; a partial choice survives only while it is
// order-isomorphic to the matching prefix of p, so dead branches die early.
bool match_from(const Permutation& w, const Permutation& p, int depth, int start,
                std::vector<int>& chosen) {
    const int m = p.degree();
    if (depth == m) return true;
    const int n = w.degree();
    for (int i = start; i <= n - (m - depth); ++i) {
        bool ok = true;
        for (int t = 0; t < depth && ok; ++t) {
            bool wlt = w.image0(chosen[t]) < w.image0(i);
            bool plt = p.image0(t) < p.image0(depth);
            ok = (wlt == plt);
        }
        if (!ok) continue;
        chosen[depth] = i;
        if (match_from(w, p, depth + 1, i + 1, chosen)) return true;
    }
    return false;
}

}  // namespace

bool contains_pattern(const Permutation& w, const Permutation& p) {
    if (p.degree() > w.degree()) return false;
    if (p.degree() == 0) return true;
    std::vector<int> chosen(p.degree());
    return match_from(w, p, 0, 0, chosen);
}

bool avoids_all(const Permutation& w, const std::vector<Permutation>& patterns) {
    for (const auto& p : patterns)
        if (contains_pattern(w, p)) return false;
    return true;
}

bool is_in_class(const Permutation& w, PatternClass c) {
    return avoids_all(w, forbidden_patterns(c));
}

std::vector<PatternClass> classify(const Permutation& w) {
    std::vector<PatternClass> out;
    for (PatternClass c : all_pattern_classes())
        if (is_in_class(w, c)) out.push_back(c);
    return out;
}

namespace {

// Counts completions of the prefix. A prefix already containing a pattern is
// pruned; only extensions that create a new containment need a fresh check,
// and it always involves the appended entry.
uint64_t count_avoiding(std::vector<int>& prefix, uint32_t used, int n,
                        const std::vector<Permutation>& patterns) {
    const int k = (int)prefix.size();
    if (k == n) return 1;
    uint64_t total = 0;
    for (int v = 1; v <= n; ++v) {
        if (used & (1u << (v - 1))) continue;
        prefix.push_back(v);
        bool ok = true;
        for (const auto& p : patterns) {
            if ((int)prefix.size() < p.degree()) continue;
            // pattern check on the prefix as a word (order-isomorphism only
            // needs relative order, so non-bijective prefixes are fine)
            const int m = p.degree();
            std::vector<int> idx(m);
            // small fixed-depth DFS, last index pinned to the new entry
            struct S {
                const std::vector<int>& w;
                const Permutation& p;
                std::vector<int>& idx;
                bool run(int depth, int start, int last) {
                    const int m = p.degree();
                    if (depth == m - 1) {
                        idx[depth] = last;
                        for (int t = 0; t < depth; ++t) {
                            bool wlt = w[idx[t]] < w[last];
                            bool plt = p.image0(t) < p.image0(depth);
                            if (wlt != plt) return false;
                        }
                        return true;
                    }
                    for (int i = start; i < last - (m - 2 - depth); ++i) {
                        bool good = true;
                        for (int t = 0; t < depth && good; ++t) {
                            bool wlt = w[idx[t]] < w[i];
                            bool plt = p.image0(t) < p.image0(depth);
                            good = (wlt == plt);
                        }
                        if (!good) continue;
                        idx[depth] = i;
                        if (run(depth + 1, i + 1, last)) return true;
                    }
                    return false;
                }
            } s{prefix, p, idx};
            if (s.run(0, 0, (int)prefix.size() - 1)) {
                ok = false;
                break;
            }
        }
        if (ok) total += count_avoiding(prefix, used | (1u << (v - 1)), n, patterns);
        prefix.pop_back();
    }
    return total;
}

}  // namespace

uint64_t count_class(int n, PatternClass c, int workers) {
    if (n < 0 || n > 10) throw std::invalid_argument("count_class: n must be in 0..10");
    if (n == 0) return 1;
    const auto& patterns = forbidden_patterns(c);
    if (workers <= 1 || n < 4) {
        std::vector<int> prefix;
        return count_avoiding(prefix, 0, n, patterns);
    }
    // split on the first entry; counts merge by addition
    std::atomic<uint64_t> total{0};
    std::atomic<int> next{1};
    auto work = [&]() {
        for (;;) {
            int v = next.fetch_add(1);
            if (v > n) break;
            std::vector<int> prefix{v};
            total += count_avoiding(prefix, 1u << (v - 1), n, patterns);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    return total.load();
}

}  // namespace coxkl
