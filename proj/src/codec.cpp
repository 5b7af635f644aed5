#include "ceal/codec.hpp"

#include <bit>
#include <cstdlib>
#include <sstream>

#include "ceal/errors.hpp"

namespace ceal {

void Message::push_bit(bool bit) {
  if (bit_count_ % 8 == 0) bytes_.push_back(0);
  if (bit) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (bit_count_ % 8));
  ++bit_count_;
}

void Message::push_ones(std::uint64_t count) {
  // Fill the partial byte, then whole bytes, then the tail.
  while (count > 0 && bit_count_ % 8 != 0) {
    push_bit(true);
    --count;
  }
  while (count >= 8) {
    bytes_.push_back(0xff);
    bit_count_ += 8;
    count -= 8;
  }
  while (count > 0) {
    push_bit(true);
    --count;
  }
}

bool Message::bit(std::size_t index) const {
  return (bytes_[index / 8] >> (7 - index % 8)) & 1u;
}

std::string Message::to_string() const {
  std::string s(bit_count_, '0');
  for (std::size_t i = 0; i < bit_count_; ++i) {
    if (bit(i)) s[i] = '1';
  }
  return s;
}

Message Message::from_string(std::string_view bits) {
  Message m;
  for (char c : bits) {
    if (c != '0' && c != '1') throw InputError("bit string may only contain '0' and '1'");
    m.push_bit(c == '1');
  }
  return m;
}

Message encode_offsets(std::span<const std::int64_t> offsets) {
  Message m;
  for (std::int64_t v : offsets) {
    m.push_bit(v >= 0);
    m.push_ones(static_cast<std::uint64_t>(v < 0 ? -v : v));
    m.push_bit(false);
  }
  return m;
}

std::vector<std::int64_t> decode_offsets(const Message& m, std::size_t dim) {
  std::vector<std::int64_t> out;
  out.reserve(dim);
  std::size_t pos = 0;
  const std::size_t n = m.bit_count();
  for (std::size_t i = 0; i < dim; ++i) {
    if (pos >= n) {
      std::ostringstream os;
      os << "truncated message: missing sign bit for coordinate " << i;
      throw DecodeError(os.str());
    }
    const bool non_negative = m.bit(pos++);
    std::int64_t magnitude = 0;
    while (true) {
      if (pos >= n) {
        std::ostringstream os;
        os << "truncated message: unterminated run at coordinate " << i;
        throw DecodeError(os.str());
      }
      if (!m.bit(pos++)) break;
      ++magnitude;
    }
    if (!non_negative && magnitude == 0) {
      // Zero is always sent with a positive sign; "00" never comes out of encode.
      throw DecodeError("malformed message: negative zero");
    }
    out.push_back(non_negative ? magnitude : -magnitude);
  }
  if (pos != n) {
    std::ostringstream os;
    os << "malformed message: " << (n - pos) << " trailing bits after " << dim << " coordinates";
    throw DecodeError(os.str());
  }
  return out;
}

Message encode(const QuantizedVector& q) { return encode_offsets(signed_offsets(q)); }

QuantizedVector decode(const Message& m, std::size_t dim, double precision, double radius,
                       std::int64_t num_intervals) {
  const auto offsets = decode_offsets(m, dim);
  return from_signed_offsets(offsets, precision, radius, num_intervals);
}

std::uint64_t encoded_size(const QuantizedVector& q) {
  const std::int64_t mid = midpoint_level(q.num_intervals);
  std::uint64_t bits = 2 * q.levels.size();
  for (std::int64_t level : q.levels) bits += static_cast<std::uint64_t>(std::llabs(level - mid));
  return bits;
}

double message_size_bound(std::size_t dim, double radius, double precision) {
  return static_cast<double>(dim) * (3.0 + 2.0 * (radius / precision + 1.0));
}

bool check_capacity(const Message& m, std::uint64_t capacity) { return m.bit_count() <= capacity; }

Message encode_raw(std::span<const double> values) {
  Message m;
  for (double v : values) {
    const auto word = std::bit_cast<std::uint64_t>(v);
    for (int b = 63; b >= 0; --b) m.push_bit((word >> b) & 1u);
  }
  return m;
}

std::vector<double> decode_raw(const Message& m, std::size_t dim) {
  if (m.bit_count() != 64 * dim) throw DecodeError("raw message length does not match 64 * dim");
  std::vector<double> out(dim);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < dim; ++i) {
    std::uint64_t word = 0;
    for (int b = 0; b < 64; ++b) word = (word << 1) | static_cast<std::uint64_t>(m.bit(pos++));
    out[i] = std::bit_cast<double>(word);
  }
  return out;
}

}  // namespace ceal
