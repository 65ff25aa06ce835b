#include "nomalpwa/rng.hpp"

#include <cmath>
#include <limits>

namespace nomalpwa {

std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> path) noexcept
{
    std::uint64_t s = mix64(parent);
    for (auto label : path)
        s = mix64(s ^ mix64(label + 0x632BE59BD9B4E019ULL));
    return s;
}

double Rng::uniform()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::exponential()
{
    // 1 - u lies in (0, 1], so the log is finite.
    return -std::log(1.0 - uniform());
}

std::size_t Rng::index(std::size_t n)
{
    const std::uint64_t range = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % range);
}

} // namespace nomalpwa
