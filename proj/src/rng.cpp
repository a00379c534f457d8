#include "prgd/rng.hpp"

#include <cmath>
#include <numbers>

namespace prgd {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Two rounds of the splitmix finalizer keyed by seed and stream.
constexpr std::uint64_t block(std::uint64_t seed, std::uint64_t stream,
                              std::uint64_t counter) noexcept {
  const std::uint64_t key = mix64(seed + kGolden) ^ mix64(stream * kGolden + 0x632be59bd9b4e019ULL);
  return mix64(mix64(key + counter * kGolden) ^ key);
}

}  // namespace

Draw<std::uint64_t> RngStream::next_u64() const noexcept {
  return {block(seed_, stream_, counter_), RngStream(seed_, stream_, counter_ + 1)};
}

Draw<double> RngStream::uniform() const noexcept {
  auto [bits, next] = next_u64();
  return {static_cast<double>(bits >> 11) * 0x1.0p-53, next};
}

Draw<double> RngStream::gaussian() const noexcept {
  auto [u1, s1] = uniform();
  auto [u2, s2] = s1.uniform();
  // 1 - u1 lies in (0, 1], so the log is finite.
  const double radius = std::sqrt(-2.0 * std::log(1.0 - u1));
  return {radius * std::cos(2.0 * std::numbers::pi * u2), s2};
}

RngStream RngStream::split(std::uint64_t child) const noexcept {
  return RngStream(mix64(seed_ ^ mix64(counter_ + kGolden)), mix64(stream_ + child * kGolden), 0);
}

}  // namespace prgd
