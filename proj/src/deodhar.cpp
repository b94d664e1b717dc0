#include "coxkl/deodhar.hpp"

#include <stdexcept>

#include "coxkl/cosets.hpp"

namespace coxkl {

ReducedWord reduced_word(const Permutation& w) {
    ReducedWord rw;
    rw.target = w;
    Permutation u = w;
    while (!u.is_identity()) {
        uint32_t ld = left_descent_mask(u);
        int s = __builtin_ctz(ld) + 1;
        rw.letters.push_back((uint8_t)s);
        u.swap_values(s);
    }
    uint32_t seen = 0;
    rw.distinct_letters = true;
    for (uint8_t j : rw.letters) {
        if (seen & (1u << j)) rw.distinct_letters = false;
        seen |= 1u << j;
    }
    return rw;
}

ReducedWord word_from_letters(int degree, const std::vector<int>& letters) {
    Permutation t = Permutation::identity(degree);
    for (int j : letters) {
        if (j < 1 || j >= degree) throw std::invalid_argument("letter out of range");
        t.swap_positions(j);
    }
    if (length(t) != (int)letters.size()) throw std::invalid_argument("word is not reduced");
    ReducedWord rw;
    rw.target = t;
    rw.letters.assign(letters.begin(), letters.end());
    uint32_t seen = 0;
    rw.distinct_letters = true;
    for (uint8_t j : rw.letters) {
        if (seen & (1u << j)) rw.distinct_letters = false;
        seen |= 1u << j;
    }
    return rw;
}

ReducedWord reversed(const ReducedWord& word) {
    std::vector<int> rev(word.letters.rbegin(), word.letters.rend());
    return word_from_letters(word.target.degree(), rev);
}

std::string Mask::to_string(int group) const {
    std::string s;
    for (int pos = 1; pos <= len; ++pos) {
        if (group && pos > 1 && (pos - 1) % group == 0) s.push_back(' ');
        s.push_back(at(pos) ? '1' : '0');
    }
    return s;
}

Permutation subword_eval(const ReducedWord& word, Mask mask, int upto) {
    if (upto < 0 || upto > word.size()) throw std::out_of_range("subword_eval: position out of range");
    Permutation p = Permutation::identity(word.target.degree());
    for (int i = 1; i <= upto; ++i)
        if (mask.at(i)) p.swap_positions(word.letter(i));
    return p;
}

Permutation subword_eval(const ReducedWord& word, Mask mask) {
    return subword_eval(word, mask, word.size());
}

DefectReport defect(const ReducedWord& word, Mask mask) {
    DefectReport rep;
    Permutation p = Permutation::identity(word.target.degree());
    for (int i = 1; i <= word.size(); ++i) {
        const int j = word.letter(i);
        const bool dft = p.image0(j - 1) > p.image0(j);
        if (dft) {
            rep.defect_set |= 1ull << (i - 1);
            ++rep.defect_count;
        }
        if (mask.at(i))
            p.swap_positions(j);
        else
            (dft ? rep.zero_defects : rep.zero_nondefects) |= 1ull << (i - 1);
    }
    return rep;
}

namespace {

struct MaskWalk {
    const ReducedWord& word;
    Permutation p;

    template <typename Leaf>
    void run(int pos, int defects, int zeros, Leaf&& leaf) {
        if (pos > word.size()) {
            leaf(p, defects, zeros);
            return;
        }
        const int j = word.letter(pos);
        const bool dft = p.image0(j - 1) > p.image0(j);
        run(pos + 1, defects + dft, zeros + 1, leaf);  // bit 0
        p.swap_positions(j);
        run(pos + 1, defects + dft, zeros, leaf);      // bit 1
        p.swap_positions(j);
    }
};

}  // namespace

std::unordered_map<Permutation, IntPolynomial, PermHash> deodhar_all(const ReducedWord& word) {
    if (word.size() > 24) throw std::invalid_argument("deodhar_all: word length cap is 24");
    std::unordered_map<Permutation, std::vector<uint64_t>, PermHash> acc;
    MaskWalk walk{word, Permutation::identity(word.target.degree())};
    walk.run(1, 0, 0, [&](const Permutation& u, int defects, int) {
        auto& c = acc[u];
        if ((int)c.size() <= defects) c.resize(defects + 1, 0);
        ++c[defects];
    });
    std::unordered_map<Permutation, IntPolynomial, PermHash> out;
    out.reserve(acc.size());
    for (auto& [u, c] : acc) out.emplace(u, IntPolynomial(std::move(c)));
    return out;
}

IntPolynomial deodhar_poly(const ReducedWord& word, const Permutation& u) {
    if (u.degree() != word.target.degree()) throw std::invalid_argument("deodhar_poly: degree mismatch");
    if (word.size() > 24) throw std::invalid_argument("deodhar_poly: word length cap is 24");
    std::vector<uint64_t> c;
    MaskWalk walk{word, Permutation::identity(word.target.degree())};
    walk.run(1, 0, 0, [&](const Permutation& v, int defects, int) {
        if (v != u) return;
        if ((int)c.size() <= defects) c.resize(defects + 1, 0);
        ++c[defects];
    });
    return IntPolynomial(std::move(c));
}

namespace {

// false as soon as one non-full mask fails |E^0| > |D^0|
bool tight_walk(const ReducedWord& word, Permutation& p, int pos, int d0, int e0, int zeros) {
    if (pos > word.size()) return zeros == 0 || e0 > d0;
    const int j = word.letter(pos);
    const bool dft = p.image0(j - 1) > p.image0(j);
    if (!tight_walk(word, p, pos + 1, d0 + dft, e0 + !dft, zeros + 1)) return false;
    p.swap_positions(j);
    bool ok = tight_walk(word, p, pos + 1, d0, e0, zeros);
    p.swap_positions(j);
    return ok;
}

}  // namespace

bool is_tight_word(const ReducedWord& word) {
    if (word.size() > 24) throw std::invalid_argument("is_tight_word: word length cap is 24");
    Permutation p = Permutation::identity(word.target.degree());
    return tight_walk(word, p, 1, 0, 0, 0);
}

ReducedWord doubled_word(const ReducedWord& word) {
    if (!word.distinct_letters) throw std::invalid_argument("doubled_word: letters must be distinct");
    std::vector<int> letters;
    letters.reserve(4 * word.size());
    for (int i = 1; i <= word.size(); ++i) {
        const int j = word.letter(i);
        letters.push_back(2 * j);
        letters.push_back(2 * j - 1);
        letters.push_back(2 * j + 1);
        letters.push_back(2 * j);
    }
    ReducedWord dw = word_from_letters(2 * word.target.degree(), letters);
    if (dw.target != doubled(2, word.target)) throw std::logic_error("doubled_word: evaluation mismatch");
    return dw;
}

DefectReport defect_closed_form(const ReducedWord& word, QuadMask qm) {
    if (!word.distinct_letters) throw std::invalid_argument("defect_closed_form: letters must be distinct");
    const int l = word.size();
    if (qm.blocks != l) throw std::invalid_argument("defect_closed_form: block count mismatch");

    uint32_t i_full = 0;
    for (int i = 1; i <= l; ++i)
        if (qm.quad(i) == 0xf) i_full |= 1u << (i - 1);
    const uint32_t all = l ? (1u << l) - 1 : 0;
    const NeighborData nb = neighbor_data(word, i_full, all);

    // nu^{-1} restricted to images of the right neighbor set
    std::array<int, Permutation::kMaxDegree> right_preimage{};
    right_preimage.fill(0);
    for (uint32_t m = nb.right_set; m; m &= m - 1) {
        int r = __builtin_ctz(m) + 1;
        right_preimage[nb.nu_of(r) - 1] = r;
    }

    auto cond_c = [&](int i) {
        if (!(nb.left_set & (1u << (i - 1)))) return false;
        const int t = nb.nu_of(i);
        return qm.quad(t) == 0b1011 || (qm.at(t, 2) && !qm.at(t, 4));
    };
    auto cond_left_c = [&](int i) {
        const int r = right_preimage[i - 1];
        if (!r) return false;
        return qm.quad(r) == 0b1101 || (qm.at(r, 3) && !qm.at(r, 4));
    };

    DefectReport rep;
    const Mask flat = qm.flatten();
    auto mark = [&](int pos, bool dft) {
        if (dft) {
            rep.defect_set |= 1ull << (pos - 1);
            ++rep.defect_count;
        }
        if (!flat.at(pos)) (dft ? rep.zero_defects : rep.zero_nondefects) |= 1ull << (pos - 1);
    };

    for (int i = 1; i <= l; ++i) {
        const bool b1 = qm.at(i, 1), b2 = qm.at(i, 2), b3 = qm.at(i, 3);
        mark(4 * i - 3, false);
        mark(4 * i - 2, !b1 && cond_left_c(i));
        mark(4 * i - 1, !b1 && cond_c(i));
        const bool d4 = b1 && ((!b2 && !b3) || (!b2 && b3 && cond_c(i)) || (b2 && !b3 && cond_left_c(i)));
        mark(4 * i, d4);
    }
    return rep;
}

}  // namespace coxkl
