#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace coxkl {

// Dense polynomial in q with unsigned 64-bit coefficients and no trailing
// zeros. Arithmetic is overflow-checked: wrapping is an error, never silent.
class IntPolynomial {
public:
    IntPolynomial() = default;  // zero
    explicit IntPolynomial(std::vector<uint64_t> coeffs);

    static IntPolynomial one() { return q_power(0); }
    static IntPolynomial q_power(int k);

    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
    int degree() const { return (int)c_.size() - 1; }  // -1 for zero
    uint64_t coeff(int k) const { return (k >= 0 && k < (int)c_.size()) ? c_[k] : 0; }
    const std::vector<uint64_t>& coeffs() const { return c_; }

    // this += p * q^shift, checked.
    void add_scaled(const IntPolynomial& p, uint64_t scale, int shift);

    IntPolynomial operator+(const IntPolynomial& o) const;
    IntPolynomial operator*(const IntPolynomial& o) const;

    // p(q^k)
    IntPolynomial substitute_power(int k) const;
    uint64_t evaluate_at_one() const;

    std::string to_string() const;  // "1+2q+3q^2"; "0" for zero

    friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;
    friend bool operator<(const IntPolynomial& a, const IntPolynomial& b) {
        if (a.c_.size() != b.c_.size()) return a.c_.size() < b.c_.size();
        return a.c_ < b.c_;
    }

private:
    void trim();
    std::vector<uint64_t> c_;
};

struct IntPolynomialHash {
    size_t operator()(const IntPolynomial& p) const;
};

// Integer Laurent polynomial: coefficients from min_exponent upward, both
// stored endpoints nonzero; the zero polynomial is the empty sequence.
class LaurentPolynomial {
public:
    LaurentPolynomial() = default;  // zero
    LaurentPolynomial(int min_exponent, std::vector<int64_t> coeffs);

    static LaurentPolynomial from_poly(const IntPolynomial& p);
    static LaurentPolynomial monomial(int64_t c, int exp);

    bool is_zero() const { return c_.empty(); }
    int min_exponent() const { return min_; }
    int max_exponent() const { return min_ + (int)c_.size() - 1; }
    int64_t coeff(int k) const {
        return (k >= min_ && k <= max_exponent()) ? c_[k - min_] : 0;
    }

    // this += sign * p * q^shift
    void add_scaled(const IntPolynomial& p, int64_t sign, int shift);
    void add(const LaurentPolynomial& o);

    LaurentPolynomial shifted(int k) const;  // * q^k

    bool has_negative_exponent() const { return !c_.empty() && min_ < 0; }
    bool has_negative_coeff() const;

    // Conversion when purely polynomial with nonnegative coefficients.
    bool to_poly(IntPolynomial& out) const;

    int64_t evaluate_at_one() const;

    std::string to_string() const;

    friend bool operator==(const LaurentPolynomial&, const LaurentPolynomial&) = default;

private:
    void trim();
    int min_ = 0;
    std::vector<int64_t> c_;
};

}  // namespace coxkl
