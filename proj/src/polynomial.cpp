#include "coxkl/polynomial.hpp"

#include <sstream>
#include <stdexcept>

namespace coxkl {

namespace {

uint64_t checked_add(uint64_t a, uint64_t b) {
    uint64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("polynomial coefficient overflow");
    return r;
}

uint64_t checked_mul(uint64_t a, uint64_t b) {
    uint64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("polynomial coefficient overflow");
    return r;
}

void append_term(std::ostringstream& out, bool first, uint64_t c, int k, bool negative) {
    if (!first) out << (negative ? "-" : "+");
    else if (negative) out << "-";
    if (c != 1 || k == 0) out << c;
    if (k != 0) {
        out << "q";
        if (k != 1) out << "^" << k;
    }
}

}  // namespace

IntPolynomial::IntPolynomial(std::vector<uint64_t> coeffs) : c_(std::move(coeffs)) { trim(); }

void IntPolynomial::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

IntPolynomial IntPolynomial::q_power(int k) {
    if (k < 0) throw std::invalid_argument("q_power: negative exponent");
    std::vector<uint64_t> c(k + 1, 0);
    c[k] = 1;
    return IntPolynomial(std::move(c));
}

void IntPolynomial::add_scaled(const IntPolynomial& p, uint64_t scale, int shift) {
    if (p.is_zero() || scale == 0) return;
    if (shift < 0) throw std::invalid_argument("add_scaled: negative shift");
    const size_t need = p.c_.size() + shift;
    if (c_.size() < need) c_.resize(need, 0);
    for (size_t i = 0; i < p.c_.size(); ++i)
        c_[i + shift] = checked_add(c_[i + shift], checked_mul(p.c_[i], scale));
}

IntPolynomial IntPolynomial::operator+(const IntPolynomial& o) const {
    IntPolynomial r = *this;
    r.add_scaled(o, 1, 0);
    return r;
}

IntPolynomial IntPolynomial::operator*(const IntPolynomial& o) const {
    if (is_zero() || o.is_zero()) return {};
    std::vector<uint64_t> r(c_.size() + o.c_.size() - 1, 0);
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j)
            r[i + j] = checked_add(r[i + j], checked_mul(c_[i], o.c_[j]));
    return IntPolynomial(std::move(r));
}

IntPolynomial IntPolynomial::substitute_power(int k) const {
    if (k < 1) throw std::invalid_argument("substitute_power: exponent must be positive");
    if (is_zero()) return {};
    std::vector<uint64_t> r((c_.size() - 1) * k + 1, 0);
    for (size_t i = 0; i < c_.size(); ++i) r[i * k] = c_[i];
    return IntPolynomial(std::move(r));
}

uint64_t IntPolynomial::evaluate_at_one() const {
    uint64_t s = 0;
    for (uint64_t c : c_) s = checked_add(s, c);
    return s;
}

std::string IntPolynomial::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (int k = 0; k < (int)c_.size(); ++k) {
        if (c_[k] == 0) continue;
        append_term(out, first, c_[k], k, false);
        first = false;
    }
    return out.str();
}

size_t IntPolynomialHash::operator()(const IntPolynomial& p) const {
    uint64_t h = 0xcbf29ce484222325ull;
    for (uint64_t c : p.coeffs()) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return (size_t)h;
}

LaurentPolynomial::LaurentPolynomial(int min_exponent, std::vector<int64_t> coeffs)
    : min_(min_exponent), c_(std::move(coeffs)) {
    trim();
}

void LaurentPolynomial::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
    size_t lead = 0;
    while (lead < c_.size() && c_[lead] == 0) ++lead;
    if (lead) {
        c_.erase(c_.begin(), c_.begin() + lead);
        min_ += (int)lead;
    }
    if (c_.empty()) min_ = 0;
}

LaurentPolynomial LaurentPolynomial::from_poly(const IntPolynomial& p) {
    std::vector<int64_t> c;
    c.reserve(p.coeffs().size());
    for (uint64_t v : p.coeffs()) {
        if (v > (uint64_t)INT64_MAX) throw std::overflow_error("coefficient exceeds signed range");
        c.push_back((int64_t)v);
    }
    return LaurentPolynomial(0, std::move(c));
}

LaurentPolynomial LaurentPolynomial::monomial(int64_t c, int exp) {
    if (c == 0) return {};
    return LaurentPolynomial(exp, {c});
}

void LaurentPolynomial::add_scaled(const IntPolynomial& p, int64_t sign, int shift) {
    if (p.is_zero() || sign == 0) return;
    const int lo = shift, hi = shift + p.degree();
    if (c_.empty()) {
        min_ = lo;
        c_.assign(hi - lo + 1, 0);
    } else {
        if (lo < min_) {
            c_.insert(c_.begin(), min_ - lo, 0);
            min_ = lo;
        }
        if (hi > max_exponent()) c_.resize(hi - min_ + 1, 0);
    }
    for (int k = 0; k <= p.degree(); ++k) {
        uint64_t v = p.coeff(k);
        if (v > (uint64_t)INT64_MAX) throw std::overflow_error("coefficient exceeds signed range");
        int64_t r;
        if (__builtin_add_overflow(c_[lo + k - min_], sign * (int64_t)v, &r))
            throw std::overflow_error("polynomial coefficient overflow");
        c_[lo + k - min_] = r;
    }
    trim();
}

void LaurentPolynomial::add(const LaurentPolynomial& o) {
    if (o.is_zero()) return;
    const int lo = o.min_, hi = o.max_exponent();
    if (c_.empty()) {
        min_ = lo;
        c_.assign(hi - lo + 1, 0);
    } else {
        if (lo < min_) {
            c_.insert(c_.begin(), min_ - lo, 0);
            min_ = lo;
        }
        if (hi > max_exponent()) c_.resize(hi - min_ + 1, 0);
    }
    for (int k = lo; k <= hi; ++k) {
        int64_t r;
        if (__builtin_add_overflow(c_[k - min_], o.coeff(k), &r))
            throw std::overflow_error("polynomial coefficient overflow");
        c_[k - min_] = r;
    }
    trim();
}

LaurentPolynomial LaurentPolynomial::shifted(int k) const {
    if (is_zero()) return {};
    return LaurentPolynomial(min_ + k, c_);
}

bool LaurentPolynomial::has_negative_coeff() const {
    for (int64_t c : c_)
        if (c < 0) return true;
    return false;
}

bool LaurentPolynomial::to_poly(IntPolynomial& out) const {
    if (has_negative_exponent() || has_negative_coeff()) return false;
    std::vector<uint64_t> c(max_exponent() + 1, 0);
    for (int k = std::max(min_, 0); k <= max_exponent(); ++k) c[k] = (uint64_t)coeff(k);
    if (is_zero()) c.clear();
    out = IntPolynomial(std::move(c));
    return true;
}

int64_t LaurentPolynomial::evaluate_at_one() const {
    int64_t s = 0;
    for (int64_t c : c_) {
        if (__builtin_add_overflow(s, c, &s)) throw std::overflow_error("overflow at q=1");
    }
    return s;
}

std::string LaurentPolynomial::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (int k = min_; k <= max_exponent(); ++k) {
        int64_t c = coeff(k);
        if (c == 0) continue;
        uint64_t mag = c < 0 ? (uint64_t)(-c) : (uint64_t)c;
        append_term(out, first, mag, k, c < 0);
        first = false;
    }
    return out.str();
}

}  // namespace coxkl
