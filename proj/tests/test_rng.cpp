#include <doctest.h>

#include "ceal/rng.hpp"

TEST_CASE("streams with equal seed and tags agree") {
  auto a = ceal::make_stream(7, {1, 2});
  auto b = ceal::make_stream(7, {1, 2});
  auto c = ceal::make_stream(7, {1, 3});
  CHECK(a() == b());
  CHECK(a() != c());
}
