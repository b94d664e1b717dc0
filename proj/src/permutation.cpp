#include "coxkl/permutation.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace coxkl {

Permutation Permutation::identity(int n) {
    if (n < 0 || n > kMaxDegree) throw std::invalid_argument("degree out of range");
    Permutation p;
    p.n_ = (uint8_t)n;
    for (int i = 0; i < n; ++i) p.img_[i] = (uint8_t)i;
    return p;
}

Permutation Permutation::simple(int n, int i) {
    if (i < 1 || i >= n) throw std::invalid_argument("simple reflection index out of range");
    Permutation p = identity(n);
    std::swap(p.img_[i - 1], p.img_[i]);
    return p;
}

Permutation Permutation::longest(int n) {
    Permutation p = identity(n);
    std::reverse(p.img_.begin(), p.img_.begin() + n);
    return p;
}

Permutation Permutation::from_images(const std::vector<int>& one_based) {
    const int n = (int)one_based.size();
    if (n > kMaxDegree) throw std::invalid_argument("degree out of range");
    Permutation p;
    p.n_ = (uint8_t)n;
    uint32_t seen = 0;
    for (int i = 0; i < n; ++i) {
        int v = one_based[i];
        if (v < 1 || v > n) throw std::invalid_argument("image out of range");
        if (seen & (1u << (v - 1))) throw std::invalid_argument("not a bijection");
        seen |= 1u << (v - 1);
        p.img_[i] = (uint8_t)(v - 1);
    }
    return p;
}

static int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

Permutation Permutation::parse(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace((unsigned char)c)) s.push_back(c);
    if (!s.empty() && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
    if (s.empty()) return Permutation();

    if (s.find(',') != std::string::npos) {
        std::vector<int> vals;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) throw std::invalid_argument("empty list entry in permutation");
            vals.push_back(std::stoi(item));
        }
        return from_images(vals);
    }

    std::vector<int> vals;
    bool has_zero = false;
    for (char c : s) {
        int v = hex_value(c);
        if (v < 0) throw std::invalid_argument("bad character in permutation string");
        has_zero |= (v == 0);
        vals.push_back(v);
    }
    if (!has_zero) return from_images(vals);
    for (int& v : vals) ++v;  // 0-based digits
    return from_images(vals);
}

bool Permutation::is_identity() const {
    for (int i = 0; i < n_; ++i)
        if (img_[i] != i) return false;
    return true;
}

Permutation Permutation::inverse() const {
    Permutation r;
    r.n_ = n_;
    for (int i = 0; i < n_; ++i) r.img_[img_[i]] = (uint8_t)i;
    return r;
}

uint64_t Permutation::packed() const {
    uint64_t bits = 0;
    for (int i = 0; i < n_; ++i) bits |= (uint64_t)img_[i] << (4 * i);
    return bits;
}

Permutation Permutation::unpack(int n, uint64_t bits) {
    if (n < 0 || n > kMaxDegree) throw std::invalid_argument("degree out of range");
    Permutation p;
    p.n_ = (uint8_t)n;
    for (int i = 0; i < n; ++i) p.img_[i] = (uint8_t)((bits >> (4 * i)) & 0xf);
    return p;
}

void Permutation::swap_positions(int i) { std::swap(img_[i - 1], img_[i]); }

void Permutation::swap_values(int i) {
    for (int k = 0; k < n_; ++k) {
        if (img_[k] == i - 1)
            img_[k] = (uint8_t)i;
        else if (img_[k] == i)
            img_[k] = (uint8_t)(i - 1);
    }
}

std::string Permutation::to_string() const {
    if (n_ <= 9) {
        std::string s;
        for (int i = 0; i < n_; ++i) s.push_back((char)('1' + img_[i]));
        return s;
    }
    return to_hex();
}

std::string Permutation::to_hex() const {
    static const char* digits = "0123456789abcdef";
    std::string s;
    for (int i = 0; i < n_; ++i) s.push_back(digits[img_[i]]);
    return s;
}

std::vector<int> Permutation::to_list() const {
    std::vector<int> v(n_);
    for (int i = 0; i < n_; ++i) v[i] = img_[i] + 1;
    return v;
}

std::strong_ordering operator<=>(const Permutation& a, const Permutation& b) {
    if (a.n_ != b.n_) return a.n_ <=> b.n_;
    for (int i = 0; i < a.n_; ++i)
        if (a.img_[i] != b.img_[i]) return a.img_[i] <=> b.img_[i];
    return std::strong_ordering::equal;
}

Permutation compose(const Permutation& a, const Permutation& b) {
    if (a.degree() != b.degree()) throw std::invalid_argument("compose: degree mismatch");
    const int n = a.degree();
    std::vector<int> img(n);
    for (int i = 0; i < n; ++i) img[i] = a.image0(b.image0(i)) + 1;
    return Permutation::from_images(img);
}

int length(const Permutation& w) {
    const int n = w.degree();
    int inv = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (w.image0(i) > w.image0(j)) ++inv;
    return inv;
}

bool bruhat_leq(const Permutation& x, const Permutation& w) {
    if (x.degree() != w.degree()) throw std::invalid_argument("bruhat_leq: degree mismatch");
    const int n = x.degree();
    if (x == w) return true;
    // cx[j], cw[j] accumulate #{k <= i : ·(k) >= j+1} (0-based j) as i advances.
    int cx[Permutation::kMaxDegree] = {0};
    int cw[Permutation::kMaxDegree] = {0};
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= x.image0(i); ++j) ++cx[j];
        for (int j = 0; j <= w.image0(i); ++j) ++cw[j];
        for (int j = 1; j < n; ++j)
            if (cx[j] > cw[j]) return false;
    }
    return true;
}

bool simple_leq(int j, const Permutation& x) {
    // s_j <= x  iff  some k <= j has x(k) > j.
    for (int k = 0; k < j; ++k)
        if (x.image0(k) >= j) return true;
    return false;
}

Permutation doubled(int m, const Permutation& w) {
    if (m < 1) throw std::invalid_argument("doubled: m must be positive");
    const int n = w.degree();
    if (m * n > Permutation::kMaxDegree) throw std::invalid_argument("doubled: degree out of range");
    std::vector<int> img(m * n);
    for (int i = 1; i <= n; ++i)
        for (int j = 0; j < m; ++j) img[m * i - j - 1] = m * w(i) - j;
    return Permutation::from_images(img);
}

uint32_t right_descent_mask(const Permutation& w) {
    uint32_t mask = 0;
    for (int i = 1; i < w.degree(); ++i)
        if (w.image0(i - 1) > w.image0(i)) mask |= 1u << (i - 1);
    return mask;
}

uint32_t left_descent_mask(const Permutation& w) { return right_descent_mask(w.inverse()); }

static std::vector<int> mask_to_list(uint32_t mask) {
    std::vector<int> v;
    for (int i = 1; mask; ++i, mask >>= 1)
        if (mask & 1u) v.push_back(i);
    return v;
}

std::vector<int> right_descents(const Permutation& w) { return mask_to_list(right_descent_mask(w)); }
std::vector<int> left_descents(const Permutation& w) { return mask_to_list(left_descent_mask(w)); }

bool has_right_descent(const Permutation& w, int i) { return w.image0(i - 1) > w.image0(i); }

bool has_left_descent(const Permutation& w, int i) {
    // value i+1 appears before value i
    int pos_i = -1, pos_i1 = -1;
    for (int k = 0; k < w.degree(); ++k) {
        if (w.image0(k) == i - 1) pos_i = k;
        if (w.image0(k) == i) pos_i1 = k;
    }
    return pos_i1 < pos_i;
}

Permutation direct_sum(const Permutation& a, const Permutation& b) {
    const int na = a.degree(), nb = b.degree();
    if (na + nb > Permutation::kMaxDegree) throw std::invalid_argument("direct_sum: degree out of range");
    std::vector<int> img(na + nb);
    for (int i = 0; i < na; ++i) img[i] = a.image0(i) + 1;
    for (int i = 0; i < nb; ++i) img[na + i] = na + b.image0(i) + 1;
    return Permutation::from_images(img);
}

Permutation w0_conjugate(const Permutation& w) {
    const int n = w.degree();
    std::vector<int> img(n);
    for (int i = 0; i < n; ++i) img[i] = n - w.image0(n - 1 - i);
    return Permutation::from_images(img);
}

namespace {

// Removal of index i via the monotone rebijections: drop position i and
// value v from the one-line word, renumbering what remains.
Permutation drop_index(const Permutation& p, int i0, int v0) {
    const int n = p.degree();
    std::vector<int> img;
    img.reserve(n - 1);
    for (int k = 0; k < n; ++k) {
        if (k == i0) continue;
        int v = p.image0(k);
        img.push_back(v > v0 ? v : v + 1);  // re-shift to 1-based with v0 removed
    }
    return Permutation::from_images(img);
}

int find_cancelable(const Permutation& w, const Permutation& x) {
    const int n = w.degree();
    for (int i = 0; i < n; ++i) {
        if (w.image0(i) != x.image0(i)) continue;
        int cx = 0, cw = 0;
        for (int j = 0; j < i; ++j) {
            if (x.image0(j) < x.image0(i)) ++cx;
            if (w.image0(j) < w.image0(i)) ++cw;
        }
        if (cx == cw) return i;
    }
    return -1;
}

}  // namespace

PairKey cancelable_reduce(const Permutation& w0, const Permutation& x0) {
    if (w0.degree() != x0.degree()) throw std::invalid_argument("cancelable_reduce: degree mismatch");
    Permutation w = w0, x = x0;
    for (;;) {
        int i = find_cancelable(w, x);
        if (i < 0) break;
        int v = w.image0(i);
        w = drop_index(w, i, v);
        x = drop_index(x, i, v);
    }
    return PairKey{w, x};
}

Permutation raise_to_extremal(const Permutation& top, Permutation x) {
    const uint32_t rd = right_descent_mask(top);
    const uint32_t ld = left_descent_mask(top);
    bool changed = true;
    while (changed) {
        changed = false;
        for (uint32_t m = rd; m; m &= m - 1) {
            int s = __builtin_ctz(m) + 1;
            if (x.image0(s - 1) < x.image0(s)) {  // xs > x
                x.swap_positions(s);
                changed = true;
            }
        }
        for (uint32_t m = ld; m; m &= m - 1) {
            int s = __builtin_ctz(m) + 1;
            if (!has_left_descent(x, s)) {  // sx > x
                x.swap_values(s);
                changed = true;
            }
        }
    }
    return x;
}

namespace {

PairKey orbit_min(const PairKey& k) {
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

PairKey canonicalize(const Permutation& w, const Permutation& x) {
    PairKey k{w, x};
    for (;;) {
        PairKey before = k;
        k = cancelable_reduce(k.w, k.x);
        k.x = raise_to_extremal(k.w, k.x);
        k = orbit_min(k);
        if (k == before) break;
    }
    return k;
}

}  // namespace coxkl
