#include "rigidlab/field.hpp"

#include <sstream>

namespace rigidlab {

namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((u128(a) * u128(b)) % p);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // This base set is a proven witness set for all n < 2^64.
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod(a % n, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

FieldSpec FieldSpec::prime(std::uint64_t p) {
    if (p >= (std::uint64_t{1} << 61))
        throw InvalidArgument("prime-field modulus must be < 2^61, got " + std::to_string(p));
    if (!is_prime_u64(p))
        throw InvalidArgument("prime-field modulus must be prime, got " + std::to_string(p));
    return FieldSpec{FieldKind::PrimeField, p};
}

FieldSpec FieldSpec::parse(const std::string& name) {
    if (name == "Q" || name == "q") return rationals();
    if ((name.size() > 1) && (name[0] == 'F' || name[0] == 'f')) {
        try {
            std::size_t pos = 0;
            unsigned long long p = std::stoull(name.substr(1), &pos);
            if (pos == name.size() - 1) return prime(p);
        } catch (const std::logic_error&) {
            // falls through to the error below
        }
    }
    throw InvalidArgument("unknown field '" + name + "' (expected \"Q\" or \"F<p>\", e.g. \"F3\")");
}

std::string FieldSpec::name() const {
    return is_prime() ? "F" + std::to_string(p) : "Q";
}

Scalar FieldSpec::zero() const {
    return is_prime() ? Scalar(std::uint64_t{0}) : Scalar(mpq_class(0));
}

Scalar FieldSpec::one() const {
    return is_prime() ? Scalar(std::uint64_t{1} % p) : Scalar(mpq_class(1));
}

Scalar FieldSpec::minus_one() const {
    return is_prime() ? Scalar(p - 1) : Scalar(mpq_class(-1));
}

Scalar FieldSpec::from_int(long long v) const {
    if (!is_prime()) return Scalar(mpq_class(static_cast<long>(v)));
    long long m = v % static_cast<long long>(p);
    if (m < 0) m += static_cast<long long>(p);
    return Scalar(static_cast<std::uint64_t>(m));
}

Scalar FieldSpec::from_mpz(const mpz_class& v) const {
    if (!is_prime()) return Scalar(mpq_class(v));
    mpz_class m = v % mpz_class(static_cast<unsigned long>(p));
    if (m < 0) m += mpz_class(static_cast<unsigned long>(p));
    return Scalar(static_cast<std::uint64_t>(m.get_ui()));
}

Scalar FieldSpec::from_mpq(const mpq_class& v) const {
    if (!is_prime()) {
        mpq_class q = v;
        q.canonicalize();
        return Scalar(q);
    }
    Scalar num = from_mpz(mpz_class(v.get_num()));
    Scalar den = from_mpz(mpz_class(v.get_den()));
    return mul(num, inv(den));
}

Scalar FieldSpec::parse_scalar(const std::string& s) const {
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw InvalidArgument("cannot parse scalar '" + s + "'");
    q.canonicalize();
    return from_mpq(q);
}

Scalar FieldSpec::add(const Scalar& a, const Scalar& b) const {
    if (is_prime()) return Scalar(radd(a.residue(), b.residue()));
    return Scalar(mpq_class(a.rational() + b.rational()));
}

Scalar FieldSpec::sub(const Scalar& a, const Scalar& b) const {
    if (is_prime()) return Scalar(rsub(a.residue(), b.residue()));
    return Scalar(mpq_class(a.rational() - b.rational()));
}

Scalar FieldSpec::mul(const Scalar& a, const Scalar& b) const {
    if (is_prime()) return Scalar(rmul(a.residue(), b.residue()));
    return Scalar(mpq_class(a.rational() * b.rational()));
}

Scalar FieldSpec::neg(const Scalar& a) const {
    if (is_prime()) return Scalar(rneg(a.residue()));
    return Scalar(mpq_class(-a.rational()));
}

Scalar FieldSpec::inv(const Scalar& a) const {
    if (is_prime()) return Scalar(rinv(a.residue()));
    if (a.rational() == 0) throw InvalidArgument("division by zero");
    return Scalar(mpq_class(1 / a.rational()));
}

bool FieldSpec::is_zero(const Scalar& a) const {
    return is_prime() ? a.residue() == 0 : a.rational() == 0;
}

std::uint64_t FieldSpec::radd(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t s = a + b;  // p < 2^61, no overflow
    return s >= p ? s - p : s;
}

std::uint64_t FieldSpec::rsub(std::uint64_t a, std::uint64_t b) const {
    return a >= b ? a - b : a + p - b;
}

std::uint64_t FieldSpec::rmul(std::uint64_t a, std::uint64_t b) const {
    return mulmod(a, b, p);
}

std::uint64_t FieldSpec::rneg(std::uint64_t a) const {
    return a == 0 ? 0 : p - a;
}

std::uint64_t FieldSpec::rinv(std::uint64_t a) const {
    if (a == 0) throw InvalidArgument("division by zero in F" + std::to_string(p));
    return powmod(a, p - 2, p);
}

std::string Scalar::str() const {
    if (is_residue()) return std::to_string(residue());
    return rational().get_str();
}

mpq_class parse_rational(const std::string& s) {
    if (s.empty()) throw InvalidArgument("empty rational");
    const auto dot = s.find('.');
    mpq_class q;
    if (dot != std::string::npos) {
        const std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        const std::size_t frac_digits = s.size() - dot - 1;
        mpz_class num;
        if (num.set_str(digits, 10) != 0) throw InvalidArgument("cannot parse rational '" + s + "'");
        mpz_class den = 1;
        for (std::size_t i = 0; i < frac_digits; ++i) den *= 10;
        q = mpq_class(num, den);
    } else if (q.set_str(s, 10) != 0) {
        throw InvalidArgument("cannot parse rational '" + s + "'");
    }
    q.canonicalize();
    return q;
}

}  // namespace rigidlab
