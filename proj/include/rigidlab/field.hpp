#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <variant>

#include "rigidlab/errors.hpp"

namespace rigidlab {

enum class FieldKind { PrimeField, Rationals };

class Scalar;

// Descriptor of the coefficient field: F_p (p prime, p < 2^61) or Q.
// Carries the arithmetic; scalars are plain values interpreted in a field.
struct FieldSpec {
    FieldKind kind = FieldKind::Rationals;
    std::uint64_t p = 0;  // modulus when kind == PrimeField

    static FieldSpec prime(std::uint64_t p);
    static FieldSpec rationals() { return FieldSpec{FieldKind::Rationals, 0}; }
    // Accepts "Q" or "F<p>", e.g. "F3".
    static FieldSpec parse(const std::string& name);

    bool is_prime() const { return kind == FieldKind::PrimeField; }
    bool has_char_two() const { return is_prime() && p == 2; }
    std::string name() const;

    bool operator==(const FieldSpec&) const = default;

    Scalar zero() const;
    Scalar one() const;
    Scalar minus_one() const;
    Scalar from_int(long long v) const;
    Scalar from_mpz(const mpz_class& v) const;
    // For Q this is the identity; for F_p the denominator must be invertible.
    Scalar from_mpq(const mpq_class& v) const;
    Scalar parse_scalar(const std::string& s) const;

    Scalar add(const Scalar& a, const Scalar& b) const;
    Scalar sub(const Scalar& a, const Scalar& b) const;
    Scalar mul(const Scalar& a, const Scalar& b) const;
    Scalar neg(const Scalar& a) const;
    Scalar inv(const Scalar& a) const;
    bool is_zero(const Scalar& a) const;

    // Raw residue arithmetic, used by hot loops over F_p.
    std::uint64_t radd(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t rsub(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t rmul(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t rneg(std::uint64_t a) const;
    std::uint64_t rinv(std::uint64_t a) const;
};

// One exact field element: a residue mod p or an exact rational.
// No floating point anywhere.
class Scalar {
  public:
    Scalar() : v_(std::uint64_t{0}) {}
    explicit Scalar(std::uint64_t residue) : v_(residue) {}
    explicit Scalar(mpq_class q) : v_(std::move(q)) {}

    bool is_residue() const { return std::holds_alternative<std::uint64_t>(v_); }
    std::uint64_t residue() const { return std::get<std::uint64_t>(v_); }
    const mpq_class& rational() const { return std::get<mpq_class>(v_); }

    bool operator==(const Scalar& o) const { return v_ == o.v_; }
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    // Decimal residue, or "num/den" ("num" when the denominator is 1).
    std::string str() const;

  private:
    std::variant<std::uint64_t, mpq_class> v_;
};

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
bool is_prime_u64(std::uint64_t n);

// Exact rational from "a/b", "0.25", or "3". Decimals become exact fractions.
mpq_class parse_rational(const std::string& s);

}  // namespace rigidlab
