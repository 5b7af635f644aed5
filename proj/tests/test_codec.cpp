#include <doctest.h>

#include <cstdlib>

#include "ceal/codec.hpp"
#include "ceal/errors.hpp"
#include "support.hpp"

using namespace ceal;

namespace {

std::string offset_oracle(const std::vector<std::int64_t>& offsets) {
  std::string s;
  for (auto o : offsets) {
    s += o >= 0 ? '1' : '0';
    s.append(static_cast<std::size_t>(std::llabs(o)), '1');
    s += '0';
  }
  return s;
}

}  // namespace

TEST_CASE("worked encoding examples") {
  CHECK(encode_offsets(std::vector<std::int64_t>{-3}).to_string() == "01110");
  CHECK(encode_offsets(std::vector<std::int64_t>{4}).to_string() == "111110");
  CHECK(encode_offsets(std::vector<std::int64_t>{0}).to_string() == "10");
  CHECK(encode_offsets(std::vector<std::int64_t>{-3, 4, 0}).to_string() == "0111011111010");
}

TEST_CASE("worked decoding examples") {
  CHECK(decode_offsets(Message::from_string("10"), 1) == std::vector<std::int64_t>{0});
  CHECK(decode_offsets(Message::from_string("01110"), 1) == std::vector<std::int64_t>{-3});
}

TEST_CASE("bits are packed most significant first") {
  const Message m = Message::from_string("111110");
  CHECK(m.bit_count() == 6);
  REQUIRE(m.bytes().size() == 1);
  CHECK(m.bytes()[0] == 0xF8);
  const Message two = Message::from_string("101100001");
  REQUIRE(two.bytes().size() == 2);
  CHECK(two.bytes()[0] == 0xB0);
  CHECK(two.bytes()[1] == 0x80);
}

TEST_CASE("roundtrip, size law and size bound on random quantized vectors") {
  Rng rng = make_stream(10, {});
  std::uniform_real_distribution<double> u;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t d = 1 + static_cast<std::size_t>(u(rng) * 16);
    const double r = 0.2 + 3 * u(rng);
    const double eps = r * (0.01 + u(rng));
    Vector y = testing::random_vector(d, 1.0, rng);
    const double scale = r * u(rng) / norm2(y);
    for (double& v : y) v *= scale;
    const QuantizedVector q = quantize(y, eps, r, rng);
    const Message m = encode(q);
    const auto offsets = signed_offsets(q);
    CHECK(m.to_string() == offset_oracle(offsets));
    std::uint64_t expected = 2 * d;
    for (auto o : offsets) expected += static_cast<std::uint64_t>(std::llabs(o));
    CHECK(m.bit_count() == expected);
    CHECK(encoded_size(q) == expected);
    CHECK(static_cast<double>(m.bit_count()) <= d * (3.0 + 2.0 * (r / eps + 1.0)));
    CHECK(decode(m, d, eps, r, q.num_intervals) == q);
  }
}

TEST_CASE("capacity check is inclusive") {
  const Message ten = Message::from_string("1111111110");
  CHECK(check_capacity(ten, 10));
  CHECK_FALSE(check_capacity(Message::from_string("11111111110"), 10));
}

TEST_CASE("malformed messages are rejected") {
  CHECK_THROWS_AS(decode_offsets(Message::from_string("0111"), 1), DecodeError);    // truncated
  CHECK_THROWS_AS(decode_offsets(Message::from_string("1"), 1), DecodeError);       // no terminator
  CHECK_THROWS_AS(decode_offsets(Message::from_string("10" "1"), 1), DecodeError);  // trailing
  CHECK_THROWS_AS(decode_offsets(Message::from_string("00"), 1), DecodeError);      // negative zero
  CHECK_THROWS_AS(decode_offsets(Message::from_string("10"), 2), DecodeError);      // too short
  CHECK_THROWS_AS(Message::from_string("10x"), InputError);
  // 5 ones exceeds the midpoint offset of a p = 4 grid.
  CHECK_THROWS_AS(decode(Message::from_string("1111110"), 1, 0.5, 1.0, 4), CorruptionError);
}

TEST_CASE("raw payload roundtrip") {
  const Vector v{1.5, -0.0, 3.14159, -2e-300};
  const Message m = encode_raw(v);
  CHECK(m.bit_count() == 64 * v.size());
  const Vector back = decode_raw(m, v.size());
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::signbit(back[i]) == std::signbit(v[i]));
  CHECK(back == v);
  CHECK_THROWS_AS(decode_raw(m, 3), DecodeError);
}
