#pragma once

#include <gmpxx.h>

namespace rigidlab {

// C(n, k) as an exact integer; zero outside 0 <= k <= n.
mpz_class binomial(long long n, long long k);

// sum_{j=0}^{d} C(n, j)
mpz_class binomial_sum(long long n, long long d);

}  // namespace rigidlab
