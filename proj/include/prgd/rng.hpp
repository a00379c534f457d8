#pragma once

#include <cstdint>

namespace prgd {

class RngStream;

/// A value drawn from a stream together with the stream state that follows it.
template <class T>
struct Draw;

/// Counter-based random stream.
///
/// The output at position `counter` is a pure function of (seed, stream id,
/// counter), so streams never share hidden state and any trial can be
/// replayed on its own. Drawing does not mutate the stream; every draw
/// returns the successor state.
class RngStream {
 public:
  constexpr RngStream(std::uint64_t seed, std::uint64_t stream_id,
                      std::uint64_t counter = 0) noexcept
      : seed_(seed), stream_(stream_id), counter_(counter) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_; }
  std::uint64_t counter() const noexcept { return counter_; }

  [[nodiscard]] Draw<std::uint64_t> next_u64() const noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  [[nodiscard]] Draw<double> uniform() const noexcept;
  /// Standard normal via Box-Muller; consumes two uniforms.
  [[nodiscard]] Draw<double> gaussian() const noexcept;

  /// Independent child stream, e.g. one per Monte-Carlo shard.
  [[nodiscard]] RngStream split(std::uint64_t child) const noexcept;

  friend bool operator==(const RngStream&, const RngStream&) = default;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_;
};

template <class T>
struct Draw {
  T value;
  RngStream next;
};

}  // namespace prgd
