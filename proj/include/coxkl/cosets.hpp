#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "coxkl/deodhar.hpp"
#include "coxkl/permutation.hpp"
#include "coxkl/polynomial.hpp"

namespace coxkl {

// Position sets over {1..l} are bitmasks with bit (i-1) for position i.

// Right/left neighbor sets of A inside B for a distinct-letter word, and the
// injective successor map nu: a position i in B\A reaches nu(i) in B\A along
// the unique chain of positions with letters j_i+1, j_i+2, ... running
// through A, rightwards (positions increasing) or leftwards (decreasing).
struct NeighborData {
    uint32_t right_set = 0;
    uint32_t left_set = 0;
    std::array<uint8_t, Permutation::kMaxDegree> nu{};  // nu[i-1], 0 if i not in the set

    uint32_t set() const { return right_set | left_set; }
    bool in_right(int i) const { return (right_set >> (i - 1)) & 1; }
    bool in_left(int i) const { return (left_set >> (i - 1)) & 1; }
    int nu_of(int i) const { return nu[i - 1]; }
};

NeighborData neighbor_data(const ReducedWord& word, uint32_t A, uint32_t B);

// (I_e, I, I_f) with I_f ⊆ I_e and I ⊆ N_{I_f}^{I_e}; the coordinates of an
// H-double coset below doubled(2, target) for a distinct-letter word.
struct CosetTriplet {
    uint32_t Ie = 0;
    uint32_t I = 0;
    uint32_t If = 0;

    uint64_t key() const { return (uint64_t)Ie | ((uint64_t)I << 20) | ((uint64_t)If << 40); }
    friend bool operator==(const CosetTriplet&, const CosetTriplet&) = default;
};

bool triplet_valid(const ReducedWord& word, const CosetTriplet& q);
std::vector<CosetTriplet> all_triplets(const ReducedWord& word);

// I_x = {i : s_{j_i} <= x}; x -> I_x bijects {x <= target} with subsets.
uint32_t ix_set(const ReducedWord& word, const Permutation& x);
Permutation x_of_ix(const ReducedWord& word, uint32_t ix);

// Bi-H-reduced: u(2i) > u(2i-1) and u^{-1}(2i) > u^{-1}(2i-1) for all i.
bool is_reduced_rep(const Permutation& u);

// The triplet of u's H-double coset, for u <= doubled(2, target).
CosetTriplet coset_triplet_of(const ReducedWord& word, const Permutation& u);

// The bi-H-reduced representative of the coset with coordinates q.
Permutation triplet_representative(const ReducedWord& word, const CosetTriplet& q);

// Triplet of the coset of pi(doubled_word[mask]), read off the quadruples
// without evaluating the subword.
CosetTriplet triplet_of_mask(const ReducedWord& word, QuadMask qm);

// All signed defect-weighted mask sums of one word, grouped by coset:
// fiber(Q) = sum over masks x with triplet(pi(Dw[x])) = Q of sgn(x) q^{defect(x)}.
// Built in one sweep over the 16^l masks; grouping goes through subword
// evaluation and coset_triplet_of, independent of the closed forms.
struct FiberTable {
    std::unordered_map<uint64_t, LaurentPolynomial> sums;
    std::unordered_map<uint64_t, uint64_t> mask_counts;
};

FiberTable compute_fibers(const ReducedWord& word);

LaurentPolynomial coset_sum_brute(const ReducedWord& word, const CosetTriplet& q);

// (-1)^{|Ie\If|} q^{|Ie^c| + |N\I|} (q+1)^{|Ie\(If ∪ N)|} with N = N_{If}^{Ie}.
LaurentPolynomial coset_sum_closed(const ReducedWord& word, const CosetTriplet& q);

// K is the subgroup of S_{2n} preserving the even values; u -> (u_odd, u_even)
// with u(2i-1) = 2 u_odd(i) - 1 and u(2i) = 2 u_even(i) is an isomorphism
// K ~ S_n x S_n.
bool in_k(const Permutation& u);
std::pair<Permutation, Permutation> k_decompose(const Permutation& u);
Permutation k_build(const Permutation& u_odd, const Permutation& u_even);

// |{u in K : u_odd, u_even <= target, triplet(u) = q}| and the common sign.
std::pair<uint64_t, int> k_fiber_count(const ReducedWord& word, const CosetTriplet& q);

int nontrivial_cycles(const Permutation& p);

// Direct cycle count of x2^{-1} x1 against |Ie \ (If ∪ N_{If}^{Ie})| for
// Ie = I_{x1} ∪ I_{x2}, If = I_{x1} ∩ I_{x2}.
bool cycle_count_matches(const ReducedWord& word, const Permutation& x1, const Permutation& x2);

// Componentwise-order predicate on triplets; experimental (cross-checked
// against Bruhat order of representatives in tests, not used elsewhere).
bool triplet_leq_experimental(const ReducedWord& word, const CosetTriplet& a, const CosetTriplet& b);

}  // namespace coxkl
