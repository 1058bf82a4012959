#pragma once

#include <cstdint>
#include <vector>

namespace stackheight {

/// All primes p <= limit, ascending.
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

/// Smallest prime factor for every n <= limit (0 and 1 map to themselves).
std::vector<std::uint32_t> smallest_prime_factors(std::uint32_t limit);

}  // namespace stackheight
