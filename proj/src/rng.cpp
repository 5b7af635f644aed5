#include "ceal/rng.hpp"

#include <vector>

namespace ceal {

Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
  std::vector<std::uint32_t> words;
  words.reserve(2 * (tags.size() + 1));
  auto push = [&words](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(seed);
  for (auto t : tags) push(t);
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

}  // namespace ceal
