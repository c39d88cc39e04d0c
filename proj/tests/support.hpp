#pragma once

#include <halfdisk/series.hpp>

#include <random>
#include <vector>

namespace hdtest {

using namespace halfdisk;

/// Scalar exact series from integer coefficients.
inline exact_series scalar(std::vector<long> c, int order = 32)
{
    exact_series s(1, order);
    for (std::size_t k = 0; k < c.size(); ++k) s.at(int(k)) = exact_complex(c[k]);
    return s;
}

/// C^2 exact series from integer coefficient pairs.
inline exact_series vec(std::vector<std::array<long, 2>> c, int order = 32)
{
    return real_vector_series<exact_complex>(c, order);
}

inline rational q(long p, long d = 1)
{
    rational r(p, d);
    r.canonicalize();
    return r;
}

/// Random real rational in [-bound, bound] with small denominator.
inline rational random_rational(std::mt19937_64& rng, long bound = 3, long den = 4)
{
    const long d = std::uniform_int_distribution<long>(1, den)(rng);
    return q(std::uniform_int_distribution<long>(-bound * d, bound * d)(rng), d);
}

/// Random real C^2 series (ζ v0 + higher terms) with entries of size ~ `scale^k`.
inline exact_series random_curve(std::mt19937_64& rng, std::array<rational, 2> v0, int degree, int order, rational scale = q(1, 2))
{
    exact_series s(2, order);
    s.at(1, 0) = exact_complex(v0[0]);
    s.at(1, 1) = exact_complex(v0[1]);
    rational f = scale;
    for (int k = 2; k <= degree && k <= order; ++k) {
        s.at(k, 0) = exact_complex(rational(random_rational(rng) * f));
        s.at(k, 1) = exact_complex(rational(random_rational(rng) * f));
        f *= scale;
    }
    return s;
}

}  // namespace hdtest
