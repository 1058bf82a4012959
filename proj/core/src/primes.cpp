#include "stackheight/primes.hpp"

namespace stackheight {

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

std::vector<std::uint32_t> smallest_prime_factors(std::uint32_t limit) {
  std::vector<std::uint32_t> spf(static_cast<std::size_t>(limit) + 1, 0);
  for (std::uint32_t i = 0; i <= limit; ++i) spf[i] = i < 2 ? i : 0;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (spf[i]) continue;
    for (std::uint64_t j = i; j <= limit; j += i)
      if (!spf[j]) spf[j] = static_cast<std::uint32_t>(i);
  }
  return spf;
}

}  // namespace stackheight
