#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace spm {

// All arithmetic in this library is exact: arbitrary-precision integers and
// rationals. No floating point anywhere.
using Int = mpz_class;
using Rat = mpq_class;

using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

// Thrown when a documented precondition is violated. CLI maps this to exit 2.
class PreconditionError : public std::runtime_error {
public:
    explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a construction step fails; carries the stage that failed.
class ConstructionError : public std::runtime_error {
public:
    explicit ConstructionError(const std::string& what) : std::runtime_error(what) {}
};

inline std::string to_string(const Int& v) { return v.get_str(); }
inline std::string to_string(const Rat& v) { return v.get_str(); }

inline Int int_from_string(const std::string& s)
{
    if (s.empty())
        throw std::invalid_argument("empty integer literal");
    return Int(s);
}

inline Rat rat_from_string(const std::string& s)
{
    if (s.empty())
        throw std::invalid_argument("empty rational literal");
    Rat r(s);
    r.canonicalize();
    return r;
}

// Floor division quotient, so the remainder a - q*b lies in [0, |b|).
inline Int fdiv(const Int& a, const Int& b)
{
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Int gcd(const Int& a, const Int& b)
{
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

// g = p*a + q*b
inline Int gcdext(const Int& a, const Int& b, Int& p, Int& q)
{
    Int g;
    mpz_gcdext(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int abs(const Int& v) { return ::abs(v); }

}  // namespace spm
