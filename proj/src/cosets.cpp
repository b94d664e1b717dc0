#include "coxkl/cosets.hpp"

#include <stdexcept>

namespace coxkl {

namespace {

constexpr int kBit = 1;

inline bool in_set(uint32_t set, int i) { return (set >> (i - 1)) & kBit; }

// position of each letter value; 0 when the letter does not occur
std::array<int, 2 * Permutation::kMaxDegree> letter_positions(const ReducedWord& word) {
    std::array<int, 2 * Permutation::kMaxDegree> pos{};
    pos.fill(0);
    for (int i = 1; i <= word.size(); ++i) pos[word.letter(i)] = i;
    return pos;
}

}  // namespace

NeighborData neighbor_data(const ReducedWord& word, uint32_t A, uint32_t B) {
    if (!word.distinct_letters) throw std::invalid_argument("neighbor_data: letters must be distinct");
    if ((A & ~B) != 0) throw std::invalid_argument("neighbor_data: A must be contained in B");
    const auto pos_of = letter_positions(word);
    NeighborData nd;
    for (uint32_t rest = B & ~A; rest; rest &= rest - 1) {
        const int i = __builtin_ctz(rest) + 1;
        const int base = word.letter(i);
        // rightward chain: positions increasing, letters base+1, base+2, ...
        int prev = i;
        for (int k = 1;; ++k) {
            const int p = (base + k < (int)pos_of.size()) ? pos_of[base + k] : 0;
            if (p == 0 || p < prev) break;
            if (!in_set(B, p)) break;
            if (!in_set(A, p)) {
                nd.right_set |= 1u << (i - 1);
                nd.nu[i - 1] = (uint8_t)p;
                break;
            }
            prev = p;
        }
        if (nd.in_right(i)) continue;
        // leftward chain: positions decreasing, same letters
        prev = i;
        for (int k = 1;; ++k) {
            const int p = (base + k < (int)pos_of.size()) ? pos_of[base + k] : 0;
            if (p == 0 || p > prev) break;
            if (!in_set(B, p)) break;
            if (!in_set(A, p)) {
                nd.left_set |= 1u << (i - 1);
                nd.nu[i - 1] = (uint8_t)p;
                break;
            }
            prev = p;
        }
    }
    return nd;
}

bool triplet_valid(const ReducedWord& word, const CosetTriplet& q) {
    const uint32_t all = word.size() ? (1u << word.size()) - 1 : 0;
    if ((q.Ie & ~all) || (q.I & ~all) || (q.If & ~all)) return false;
    if (q.If & ~q.Ie) return false;
    const NeighborData nd = neighbor_data(word, q.If, q.Ie);
    return (q.I & ~nd.set()) == 0;
}

std::vector<CosetTriplet> all_triplets(const ReducedWord& word) {
    const int l = word.size();
    std::vector<CosetTriplet> out;
    const uint32_t all = l ? (1u << l) - 1 : 0;
    for (uint32_t ie = 0;; ++ie) {
        // subsets of ie: classic submask walk
        uint32_t f = ie;
        for (;;) {
            const NeighborData nd = neighbor_data(word, f, ie);
            const uint32_t n = nd.set();
            uint32_t i = n;
            for (;;) {
                out.push_back(CosetTriplet{ie, i, f});
                if (i == 0) break;
                i = (i - 1) & n;
            }
            if (f == 0) break;
            f = (f - 1) & ie;
        }
        if (ie == all) break;
    }
    return out;
}

uint32_t ix_set(const ReducedWord& word, const Permutation& x) {
    uint32_t out = 0;
    for (int i = 1; i <= word.size(); ++i)
        if (simple_leq(word.letter(i), x)) out |= 1u << (i - 1);
    return out;
}

Permutation x_of_ix(const ReducedWord& word, uint32_t ix) {
    return subword_eval(word, Mask(ix, word.size()));
}

bool is_reduced_rep(const Permutation& u) {
    const int n2 = u.degree();
    if (n2 % 2) throw std::invalid_argument("is_reduced_rep: degree must be even");
    const Permutation inv = u.inverse();
    for (int i = 1; 2 * i <= n2; ++i) {
        if (u(2 * i) < u(2 * i - 1)) return false;
        if (inv(2 * i) < inv(2 * i - 1)) return false;
    }
    return true;
}

namespace {

// s_{2a} s_{2a+1} D(s_{a+1}) ... D(s_{b-1}) s_{2b}  (rightward chain element)
// and its leftward mirror, as permutations of degree 2n.
Permutation chain_element(int n2, int a, int b, bool rightward) {
    Permutation p = Permutation::identity(n2);
    auto mul = [&](int s) { p.swap_positions(s); };
    if (rightward) {
        mul(2 * a);
        mul(2 * a + 1);
        for (int v = a + 1; v < b; ++v) {
            mul(2 * v);
            mul(2 * v - 1);
            mul(2 * v + 1);
            mul(2 * v);
        }
        mul(2 * b);
    } else {
        mul(2 * b);
        for (int v = b - 1; v > a; --v) {
            mul(2 * v);
            mul(2 * v - 1);
            mul(2 * v + 1);
            mul(2 * v);
        }
        mul(2 * a + 1);
        mul(2 * a);
    }
    return p;
}

}  // namespace

CosetTriplet coset_triplet_of(const ReducedWord& word, const Permutation& u) {
    if (!word.distinct_letters) throw std::invalid_argument("coset_triplet_of: letters must be distinct");
    const int n2 = 2 * word.target.degree();
    if (u.degree() != n2) throw std::invalid_argument("coset_triplet_of: degree mismatch");
    if (!bruhat_leq(u, doubled(2, word.target)))
        throw std::invalid_argument("coset_triplet_of: element not below the doubled target");

    CosetTriplet q;
    for (int i = 1; i <= word.size(); ++i) {
        const int j = word.letter(i);
        if (simple_leq(2 * j, u)) q.Ie |= 1u << (i - 1);
        Permutation ds = doubled(2, Permutation::simple(word.target.degree(), j));
        if (bruhat_leq(ds, u)) q.If |= 1u << (i - 1);
    }
    const uint32_t all = word.size() ? (1u << word.size()) - 1 : 0;
    const NeighborData nd = neighbor_data(word, q.If, all);
    for (uint32_t m = nd.right_set; m; m &= m - 1) {
        const int i = __builtin_ctz(m) + 1;
        if (bruhat_leq(chain_element(n2, word.letter(i), word.letter(nd.nu_of(i)), true), u))
            q.I |= 1u << (i - 1);
    }
    for (uint32_t m = nd.left_set; m; m &= m - 1) {
        const int i = __builtin_ctz(m) + 1;
        if (bruhat_leq(chain_element(n2, word.letter(i), word.letter(nd.nu_of(i)), false), u))
            q.I |= 1u << (i - 1);
    }
    return q;
}

Permutation triplet_representative(const ReducedWord& word, const CosetTriplet& q) {
    if (!triplet_valid(word, q)) throw std::invalid_argument("triplet_representative: invalid triplet");
    const int n2 = 2 * word.target.degree();
    const uint32_t all = word.size() ? (1u << word.size()) - 1 : 0;
    const NeighborData nd = neighbor_data(word, q.If, all);
    Permutation p = Permutation::identity(n2);
    for (int i = 1; i <= word.size(); ++i) {
        const int j = word.letter(i);
        if (!in_set(q.Ie, i)) continue;
        if (in_set(q.If, i)) {
            p.swap_positions(2 * j);
            p.swap_positions(2 * j - 1);
            p.swap_positions(2 * j + 1);
            p.swap_positions(2 * j);
        } else if (in_set(q.I, i) && nd.in_right(i)) {
            p.swap_positions(2 * j);
            p.swap_positions(2 * j + 1);
        } else if (in_set(q.I, i) && nd.in_left(i)) {
            p.swap_positions(2 * j + 1);
            p.swap_positions(2 * j);
        } else {
            p.swap_positions(2 * j);
        }
    }
    return p;
}

CosetTriplet triplet_of_mask(const ReducedWord& word, QuadMask qm) {
    if (!word.distinct_letters) throw std::invalid_argument("triplet_of_mask: letters must be distinct");
    const int l = word.size();
    CosetTriplet q;
    for (int i = 1; i <= l; ++i) {
        const int v = qm.quad(i);
        const bool edge = !((v & 0x9) == 0 || v == 0x9);  // not (0,*,*,0) and not (1,0,0,1)
        if (edge) q.Ie |= 1u << (i - 1);
        if (v == 0xf) q.If |= 1u << (i - 1);
    }
    const NeighborData nd = neighbor_data(word, q.If, q.Ie);
    for (uint32_t m = nd.right_set; m; m &= m - 1) {
        const int i = __builtin_ctz(m) + 1;
        const int t = nd.nu_of(i);
        if ((qm.at(i, 1) && qm.at(i, 3)) != (qm.at(t, 2) && qm.at(t, 4))) q.I |= 1u << (i - 1);
    }
    for (uint32_t m = nd.left_set; m; m &= m - 1) {
        const int i = __builtin_ctz(m) + 1;
        const int t = nd.nu_of(i);
        if ((qm.at(i, 3) && qm.at(i, 4)) != (qm.at(t, 1) && qm.at(t, 2))) q.I |= 1u << (i - 1);
    }
    return q;
}

namespace {

struct SignedCounts {
    std::vector<int64_t> by_defect;
    uint64_t masks = 0;
};

void fiber_walk(const ReducedWord& dw, Permutation& p, int pos, int defects, int sign,
                std::unordered_map<uint64_t, SignedCounts>& acc) {
    if (pos > dw.size()) {
        auto& e = acc[p.packed()];
        if ((int)e.by_defect.size() <= defects) e.by_defect.resize(defects + 1, 0);
        e.by_defect[defects] += sign;
        ++e.masks;
        return;
    }
    const int j = dw.letter(pos);
    const bool dft = p.image0(j - 1) > p.image0(j);
    fiber_walk(dw, p, pos + 1, defects + dft, sign, acc);
    p.swap_positions(j);
    fiber_walk(dw, p, pos + 1, defects + dft, -sign, acc);
    p.swap_positions(j);
}

}  // namespace

FiberTable compute_fibers(const ReducedWord& word) {
    if (word.size() > 6) throw std::invalid_argument("compute_fibers: word length cap is 6");
    const ReducedWord dw = doubled_word(word);
    std::unordered_map<uint64_t, SignedCounts> by_element;
    Permutation p = Permutation::identity(dw.target.degree());
    fiber_walk(dw, p, 1, 0, +1, by_element);

    FiberTable ft;
    for (const auto& [packed, counts] : by_element) {
        const Permutation u = Permutation::unpack(dw.target.degree(), packed);
        const uint64_t key = coset_triplet_of(word, u).key();
        ft.sums[key].add(LaurentPolynomial(0, counts.by_defect));
        ft.mask_counts[key] += counts.masks;
    }
    return ft;
}

LaurentPolynomial coset_sum_brute(const ReducedWord& word, const CosetTriplet& q) {
    const FiberTable ft = compute_fibers(word);
    auto it = ft.sums.find(q.key());
    return it == ft.sums.end() ? LaurentPolynomial() : it->second;
}

LaurentPolynomial coset_sum_closed(const ReducedWord& word, const CosetTriplet& q) {
    if (!triplet_valid(word, q)) throw std::invalid_argument("coset_sum_closed: invalid triplet");
    const int l = word.size();
    const NeighborData nd = neighbor_data(word, q.If, q.Ie);
    const uint32_t n = nd.set();
    const int sign_exp = __builtin_popcount(q.Ie & ~q.If);
    const int q_exp = (l - __builtin_popcount(q.Ie)) + __builtin_popcount(n & ~q.I);
    const int binom_exp = __builtin_popcount(q.Ie & ~(q.If | n));

    IntPolynomial qp1 = IntPolynomial::one();
    const IntPolynomial factor({1, 1});
    for (int k = 0; k < binom_exp; ++k) qp1 = qp1 * factor;

    LaurentPolynomial out;
    out.add_scaled(qp1, (sign_exp % 2) ? -1 : 1, q_exp);
    return out;
}

bool in_k(const Permutation& u) {
    for (int k = 1; k < u.degree(); k += 2)
        if (u.image0(k) % 2 == 0) return false;
    return true;
}

std::pair<Permutation, Permutation> k_decompose(const Permutation& u) {
    if (u.degree() % 2) throw std::invalid_argument("k_decompose: degree must be even");
    if (!in_k(u)) throw std::invalid_argument("k_decompose: element does not preserve parity classes");
    const int n = u.degree() / 2;
    std::vector<int> odd(n), even(n);
    for (int i = 1; i <= n; ++i) {
        odd[i - 1] = (u(2 * i - 1) + 1) / 2;
        even[i - 1] = u(2 * i) / 2;
    }
    return {Permutation::from_images(odd), Permutation::from_images(even)};
}

Permutation k_build(const Permutation& u_odd, const Permutation& u_even) {
    if (u_odd.degree() != u_even.degree()) throw std::invalid_argument("k_build: degree mismatch");
    const int n = u_odd.degree();
    std::vector<int> img(2 * n);
    for (int i = 1; i <= n; ++i) {
        img[2 * i - 2] = 2 * u_odd(i) - 1;
        img[2 * i - 1] = 2 * u_even(i);
    }
    return Permutation::from_images(img);
}

std::pair<uint64_t, int> k_fiber_count(const ReducedWord& word, const CosetTriplet& q) {
    if (!triplet_valid(word, q)) throw std::invalid_argument("k_fiber_count: invalid triplet");
    const NeighborData nd = neighbor_data(word, q.If, q.Ie);
    const int free = __builtin_popcount(q.Ie & ~(q.If | nd.set()));
    const int sign = (__builtin_popcount(q.Ie & ~q.If) % 2) ? -1 : 1;
    return {1ull << free, sign};
}

int nontrivial_cycles(const Permutation& p) {
    uint32_t seen = 0;
    int count = 0;
    for (int i = 0; i < p.degree(); ++i) {
        if (seen & (1u << i)) continue;
        int len = 0;
        for (int k = i; !(seen & (1u << k)); k = p.image0(k)) {
            seen |= 1u << k;
            ++len;
        }
        if (len > 1) ++count;
    }
    return count;
}

bool cycle_count_matches(const ReducedWord& word, const Permutation& x1, const Permutation& x2) {
    const uint32_t i1 = ix_set(word, x1), i2 = ix_set(word, x2);
    const uint32_t ie = i1 | i2, iff = i1 & i2;
    const NeighborData nd = neighbor_data(word, iff, ie);
    const int expected = __builtin_popcount(ie & ~(iff | nd.set()));
    return nontrivial_cycles(compose(x2.inverse(), x1)) == expected;
}

bool triplet_leq_experimental(const ReducedWord& word, const CosetTriplet& a, const CosetTriplet& b) {
    if ((a.Ie & ~b.Ie) || (a.If & ~b.If)) return false;
    const uint32_t all = word.size() ? (1u << word.size()) - 1 : 0;
    const NeighborData nd = neighbor_data(word, a.If, all);
    uint32_t nu_preimage_bf = 0;
    for (uint32_t m = nd.set(); m; m &= m - 1) {
        const int i = __builtin_ctz(m) + 1;
        if (in_set(b.If, nd.nu_of(i))) nu_preimage_bf |= 1u << (i - 1);
    }
    return (a.I & ~(b.I | b.If | nu_preimage_bf)) == 0;
}

}  // namespace coxkl
