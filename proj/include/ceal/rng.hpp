#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ceal {

using Rng = std::mt19937_64;

// Independent stream derived from a run seed and a list of tags
// (e.g. {kClientStream, client_id}). Same inputs give the same stream.
Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags);

// Stream tags. Kept stable: changing them changes every artifact.
inline constexpr std::uint64_t kClientStream = 1;
inline constexpr std::uint64_t kServerStream = 2;
inline constexpr std::uint64_t kStartStream = 3;
inline constexpr std::uint64_t kInstanceStream = 4;

}  // namespace ceal
