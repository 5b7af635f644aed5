#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ceal/quantizer.hpp"

namespace ceal {

// Ordered bit string, packed most-significant-bit first; bit i lives in
// byte i / 8 at mask 0x80 >> (i % 8). Pad bits in the last byte are zero.
class Message {
 public:
  Message() = default;

  void push_bit(bool bit);
  void push_ones(std::uint64_t count);
  bool bit(std::size_t index) const;
  std::size_t bit_count() const { return bit_count_; }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }

  // "0"/"1" characters, one per bit.
  std::string to_string() const;
  static Message from_string(std::string_view bits);

  bool operator==(const Message&) const = default;

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t bit_count_ = 0;
};

// Per coordinate: sign bit (0 negative, 1 non-negative), |offset| ones, one 0.
Message encode_offsets(std::span<const std::int64_t> offsets);
std::vector<std::int64_t> decode_offsets(const Message& m, std::size_t dim);

Message encode(const QuantizedVector& q);
QuantizedVector decode(const Message& m, std::size_t dim, double precision, double radius,
                       std::int64_t num_intervals);

// Exact size of encode(q) computed from the levels alone: 2d + sum |offset_i|.
std::uint64_t encoded_size(const QuantizedVector& q);

// Worst-case size for any ||y|| <= r quantized at precision eps:
// d (3 + 2 (r / eps + 1)). This is the unary message bound plus d terminators.
double message_size_bound(std::size_t dim, double radius, double precision);

bool check_capacity(const Message& m, std::uint64_t capacity);

// Full-precision payload: IEEE-754 binary64, big-endian, 64 bits per coordinate.
Message encode_raw(std::span<const double> values);
std::vector<double> decode_raw(const Message& m, std::size_t dim);

}  // namespace ceal
