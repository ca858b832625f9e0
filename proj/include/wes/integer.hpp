#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace wes {

/// Arbitrary-precision signed integer used for every matrix entry.
using Integer = boost::multiprecision::cpp_int;

/// Remainder in [0, |m|). m must be nonzero.
inline Integer mod_floor(const Integer& a, const Integer& m)
{
    Integer r = a % m;
    if (r < 0)
        r += (m < 0 ? Integer(-m) : m);
    return r;
}

inline Integer abs_value(const Integer& a) { return a < 0 ? Integer(-a) : a; }

inline Integer gcd(const Integer& a, const Integer& b)
{
    return boost::multiprecision::gcd(abs_value(a), abs_value(b));
}

inline Integer lcm(const Integer& a, const Integer& b)
{
    if (a == 0 || b == 0)
        return 0;
    return abs_value(a / gcd(a, b) * b);
}

inline std::string to_string(const Integer& a) { return a.str(); }

inline std::int64_t to_int64(const Integer& a) { return a.convert_to<std::int64_t>(); }

} // namespace wes
