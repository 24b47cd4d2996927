#include "rigidlab/binomial.hpp"

namespace rigidlab {

mpz_class binomial(long long n, long long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

mpz_class binomial_sum(long long n, long long d) {
    mpz_class s = 0;
    for (long long j = 0; j <= d && j <= n; ++j) s += binomial(n, j);
    return s;
}

}  // namespace rigidlab
