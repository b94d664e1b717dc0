#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace coxkl {

// A permutation of {1..n} in one-line notation, n <= 16.
// Stored 0-based in packed bytes; the public interface is 1-based.
// Degree 0 (the empty permutation) is legal and acts as the identity of S_0;
// it shows up as the fully cancelled pair key.
class Permutation {
public:
    static constexpr int kMaxDegree = 16;

    Permutation() : n_(0) { img_.fill(0); }

    static Permutation identity(int n);
    static Permutation simple(int n, int i);   // s_i, 1 <= i <= n-1
    static Permutation longest(int n);         // w0 = (n, n-1, ..., 1)

    // Accepts a contiguous digit/hex string ("3412", "35608ab12794") or a
    // comma-separated 1-based list ("3,4,1,2", "[3,4,1,2]"). A digit string
    // containing '0' is read as 0-based values, otherwise as 1-based.
    static Permutation parse(const std::string& text);
    static Permutation from_images(const std::vector<int>& one_based);

    int degree() const { return n_; }
    bool is_identity() const;

    int operator()(int i) const { return img_[i - 1] + 1; }  // 1-based
    int image0(int i) const { return img_[i]; }              // 0-based

    Permutation inverse() const;

    // 4 bits per image, 0-based; degree 16 fills all 64 bits.
    uint64_t packed() const;
    static Permutation unpack(int n, uint64_t bits);

    // Right multiplication by s_i swaps the entries at positions i, i+1;
    // left multiplication swaps the values i, i+1 wherever they sit.
    void swap_positions(int i);
    void swap_values(int i);

    std::string to_string() const;       // contiguous; 1-based digits for n <= 9, else 0-based hex
    std::string to_hex() const;          // contiguous 0-based hex, any degree
    std::vector<int> to_list() const;    // 1-based

    friend bool operator==(const Permutation& a, const Permutation& b) {
        return a.n_ == b.n_ && a.img_ == b.img_;
    }
    friend std::strong_ordering operator<=>(const Permutation& a, const Permutation& b);

private:
    uint8_t n_;
    std::array<uint8_t, kMaxDegree> img_;
};

struct PermHash {
    size_t operator()(const Permutation& p) const {
        uint64_t h = p.packed() * 0x9e3779b97f4a7c15ull;
        h ^= (uint64_t)p.degree() << 58;
        h ^= h >> 29;
        return (size_t)(h * 0xbf58476d1ce4e5b9ull);
    }
};

// result(i) = a(b(i)); degrees must match.
Permutation compose(const Permutation& a, const Permutation& b);

// Coxeter length = inversion count.
int length(const Permutation& w);

// Bruhat order via the dominance criterion:
// x <= w  iff  #{k<=i : x(k) >= j} <= #{k<=i : w(k) >= j} for all i, j.
bool bruhat_leq(const Permutation& x, const Permutation& w);

// s_j <= x, i.e. x does not stabilise {1..j}.
bool simple_leq(int j, const Permutation& x);

// Block-diagonal embedding S_n -> S_{mn}: result(m*i - j) = m*w(i) - j
// for i = 1..n, j = 0..m-1. m = 1 is the identity map.
Permutation doubled(int m, const Permutation& w);

// Right descent set {i : w(i) > w(i+1)} as a bitmask (bit i-1) and as a list.
uint32_t right_descent_mask(const Permutation& w);
uint32_t left_descent_mask(const Permutation& w);
std::vector<int> right_descents(const Permutation& w);
std::vector<int> left_descents(const Permutation& w);
bool has_right_descent(const Permutation& w, int i);
bool has_left_descent(const Permutation& w, int i);

// a on {1..deg(a)}, b shifted onto the second block.
Permutation direct_sum(const Permutation& a, const Permutation& b);

Permutation w0_conjugate(const Permutation& w);  // w0 * w * w0

// An ordered pair of same-degree permutations, used as a table key.
struct PairKey {
    Permutation w, x;

    friend bool operator==(const PairKey&, const PairKey&) = default;
    friend std::strong_ordering operator<=>(const PairKey& a, const PairKey& b) {
        if (auto c = a.w <=> b.w; c != 0) return c;
        return a.x <=> b.x;
    }
};

struct PairKeyHash {
    size_t operator()(const PairKey& k) const {
        size_t h = PermHash{}(k.w);
        h ^= PermHash{}(k.x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        return h;
    }
};

// Index i is cancelable for (w,x) when w(i) = x(i) and
// #{j<i : x(j) < x(i)} = #{j<i : w(j) < w(i)}; removing it (monotone
// rebijection on both coordinates) preserves the KL polynomial.
// Smallest cancelable index (1-based), or -1 when none exists.
int find_cancelable_index(const Permutation& w, const Permutation& x);

// Removes cancelable indices, smallest first, until none remain.
PairKey cancelable_reduce(const Permutation& w, const Permutation& x);

// Canonical key for the pair (w,x), x <= w: cancelable reduction, then the
// descent-based raise of x (x -> xs when ws < w, xs > x; likewise on the
// left), then the lexicographic minimum over the symmetry orbit
// {(w,x), (w^-1,x^-1), (w0ww0, w0xw0), (w0w^-1w0, w0x^-1w0)},
// iterated to a fixed point. All moves preserve P_{x,w}.
PairKey canonicalize(const Permutation& w, const Permutation& x);

// One raise pass relative to a fixed top (no cancelable reduction):
// repeatedly replace x by xs (first right descent s of top with xs > x),
// then by sx (left), until x descends wherever top does.
Permutation raise_to_extremal(const Permutation& top, Permutation x);

}  // namespace coxkl
