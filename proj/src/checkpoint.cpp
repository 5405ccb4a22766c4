// SPDX-License-Identifier: Apache-2.0
#include "soccerdqn/checkpoint.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "soccerdqn/error.hpp"

namespace sdqn {

namespace {

constexpr char kMagic[8] = {'D', 'Q', 'N', 'S', 'O', 'C', '1', '\0'};

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out_.insert(out_.end(), b, b + n);
  }
  template <class U>
  void uint(U v) {
    for (std::size_t i = 0; i < sizeof(U); ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f32(float v) { uint(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) { uint(std::bit_cast<std::uint64_t>(v)); }
  std::vector<std::uint8_t>& data() { return out_; }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  template <class U>
  U uint() {
    need(sizeof(U));
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(static_cast<U>(in_[pos_ + i]) << (8 * i));
    pos_ += sizeof(U);
    return v;
  }
  float f32() { return std::bit_cast<float>(uint<std::uint32_t>()); }
  double f64() { return std::bit_cast<double>(uint<std::uint64_t>()); }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw_error(ErrorCode::kTruncated, "checkpoint: unexpected end of data");
  }
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; checkpoints stay far below 4 GiB.
  crc = crc32(crc, bytes.data(), static_cast<uInt>(bytes.size()));
  return static_cast<std::uint32_t>(crc);
}

}  // namespace

Checkpoint make_checkpoint(const Mlp& net, std::uint64_t step, std::uint64_t updates, double epsilon) {
  Checkpoint c;
  c.dims.assign(net.dims().begin(), net.dims().end());
  c.step = step;
  c.updates = updates;
  c.epsilon = epsilon;
  c.params.assign(net.params().begin(), net.params().end());
  return c;
}

Mlp network_from(const Checkpoint& ckpt) {
  Mlp net(ckpt.dims);
  require(net.params().size() == ckpt.params.size(), "checkpoint: parameter count does not match dims");
  std::copy(ckpt.params.begin(), ckpt.params.end(), net.params().begin());
  return net;
}

std::vector<std::uint8_t> serialize_checkpoint(const Checkpoint& ckpt, std::uint32_t version) {
  require(Mlp::param_count(ckpt.dims) == ckpt.params.size(),
          "checkpoint: parameter count does not match dims");
  Writer w;
  w.bytes(kMagic, sizeof kMagic);
  w.uint<std::uint32_t>(version);
  w.uint<std::uint32_t>(static_cast<std::uint32_t>(ckpt.dims.size()));
  for (int d : ckpt.dims) w.uint<std::uint32_t>(static_cast<std::uint32_t>(d));
  w.uint<std::uint64_t>(ckpt.step);
  w.uint<std::uint64_t>(ckpt.updates);
  w.f64(ckpt.epsilon);
  w.uint<std::uint64_t>(ckpt.params.size());
  for (float p : ckpt.params) w.f32(p);
  w.uint<std::uint32_t>(crc32_of(w.data()));
  return std::move(w.data());
}

Checkpoint parse_checkpoint(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < sizeof kMagic || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    throw_error(ErrorCode::kBadMagic, "checkpoint: bad magic, not a DQNSOC1 file");
  }
  if (bytes.size() < sizeof kMagic + 8) throw_error(ErrorCode::kTruncated, "checkpoint: header truncated");
  const auto body = bytes.first(bytes.size() - 4);
  Reader tail(bytes.last(4));
  if (crc32_of(body) != tail.uint<std::uint32_t>()) {
    throw_error(ErrorCode::kCrcMismatch, "checkpoint: CRC-32 mismatch");
  }

  Reader r(body.subspan(sizeof kMagic));
  const auto version = r.uint<std::uint32_t>();
  if (version != kCheckpointVersion) {
    throw_error(ErrorCode::kVersionMismatch, "checkpoint: format version " + std::to_string(version) +
                                                 ", reader supports " +
                                                 std::to_string(kCheckpointVersion));
  }
  Checkpoint c;
  const auto n_dims = r.uint<std::uint32_t>();
  if (n_dims < 2 || n_dims > 64) throw_error(ErrorCode::kParse, "checkpoint: implausible layer count");
  for (std::uint32_t i = 0; i < n_dims; ++i) {
    const auto d = r.uint<std::uint32_t>();
    if (d == 0 || d > (1u << 20)) throw_error(ErrorCode::kParse, "checkpoint: implausible layer size");
    c.dims.push_back(static_cast<int>(d));
  }
  c.step = r.uint<std::uint64_t>();
  c.updates = r.uint<std::uint64_t>();
  c.epsilon = r.f64();
  const auto n = r.uint<std::uint64_t>();
  if (n != Mlp::param_count(c.dims)) {
    throw_error(ErrorCode::kParse, "checkpoint: parameter count does not match layer sizes");
  }
  if (r.remaining() != 4 * n) throw_error(ErrorCode::kTruncated, "checkpoint: parameter block size mismatch");
  c.params.resize(n);
  for (auto& p : c.params) p = r.f32();
  return c;
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  const auto bytes = serialize_checkpoint(ckpt);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_error(ErrorCode::kIo, "cannot write checkpoint '" + path + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw_error(ErrorCode::kIo, "short write to checkpoint '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_error(ErrorCode::kIo, "cannot open checkpoint '" + path + "'");
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  return parse_checkpoint(bytes);
}

}  // namespace sdqn
