#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "coxkl/permutation.hpp"
#include "coxkl/polynomial.hpp"

namespace coxkl {

// A reduced decomposition s_{j_1} ... s_{j_l} of its target permutation.
// Construction validates reducedness (letter count == length(target)).
struct ReducedWord {
    std::vector<uint8_t> letters;  // 1-based simple-reflection indices
    Permutation target;
    bool distinct_letters = false;  // true iff all letters pairwise distinct (Boolean target)

    int size() const { return (int)letters.size(); }
    int letter(int pos) const { return letters[pos - 1]; }  // 1-based position
};

// Deterministic reduced word: repeatedly strip the smallest left descent.
ReducedWord reduced_word(const Permutation& w);

// Builds and validates a word from explicit letters.
ReducedWord word_from_letters(int degree, const std::vector<int>& letters);

ReducedWord reversed(const ReducedWord& word);

// A 0/1 subword selector for a fixed word; bit (pos-1) selects position pos.
struct Mask {
    uint64_t bits = 0;
    int len = 0;

    Mask() = default;
    Mask(uint64_t b, int l) : bits(b), len(l) {}
    bool at(int pos) const { return (bits >> (pos - 1)) & 1; }
    bool is_full() const { return bits == (len == 64 ? ~0ull : (1ull << len) - 1); }
    int sign() const { return __builtin_popcountll(bits) % 2 ? -1 : 1; }
    std::string to_string(int group = 0) const;  // "0110", group=4 -> "0110 1000 ..."
};

// View of a mask on a doubled word as l quadruples; quad(i) packs the four
// coordinates of block i with coordinate k in bit k-1.
struct QuadMask {
    uint64_t bits = 0;
    int blocks = 0;

    QuadMask() = default;
    QuadMask(uint64_t b, int l) : bits(b), blocks(l) {}
    int quad(int i) const { return (int)((bits >> (4 * (i - 1))) & 0xf); }
    bool at(int i, int k) const { return (quad(i) >> (k - 1)) & 1; }
    Mask flatten() const { return Mask(bits, 4 * blocks); }
    int sign() const { return __builtin_popcountll(bits) % 2 ? -1 : 1; }
};

// Defect data of a mask: position sets are bitmasks (bit pos-1).
// zero_defects / zero_nondefects split the unselected positions (D^0, E^0).
struct DefectReport {
    uint64_t defect_set = 0;
    uint64_t zero_defects = 0;
    uint64_t zero_nondefects = 0;
    int defect_count = 0;
};

// Product of the selected letters among positions 1..upto.
Permutation subword_eval(const ReducedWord& word, Mask mask, int upto);
Permutation subword_eval(const ReducedWord& word, Mask mask);

// Position i is a defect iff the selected prefix p before i has
// p(j_i) > p(j_i + 1), i.e. p sends alpha_{j_i} negative.
DefectReport defect(const ReducedWord& word, Mask mask);

// P^w_u = sum of q^{defect(x)} over masks x with pi(w[x]) = u.
IntPolynomial deodhar_poly(const ReducedWord& word, const Permutation& u);

// All of them at once (one DFS over the 2^l masks).
std::unordered_map<Permutation, IntPolynomial, PermHash> deodhar_all(const ReducedWord& word);

// Deodhar's mask criterion: every non-full mask has |E^0| > |D^0|.
// Streams the 2^l masks; l is capped at 24.
bool is_tight_word(const ReducedWord& word);

// For a distinct-letter word, the length-4l reduced word
// s_{2j_1} s_{2j_1-1} s_{2j_1+1} s_{2j_1} ... evaluating to doubled(2, target).
ReducedWord doubled_word(const ReducedWord& word);

// Defect set of the flattened mask on doubled_word(word), from the
// quadruple-local case analysis (no prefix evaluation). Distinct letters only.
DefectReport defect_closed_form(const ReducedWord& word, QuadMask qm);

}  // namespace coxkl
