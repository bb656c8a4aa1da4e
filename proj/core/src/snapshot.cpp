#include "spiky/snapshot.hpp"

#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <unordered_set>

#include "spiky/errors.hpp"

namespace spiky {

namespace {

constexpr char kMagic[4] = {'S', 'P', 'K', 'E'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint64_t kMaxCells = 1ULL << 31;
constexpr std::uint32_t kMaxIdLength = 1U << 20;

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void bytes(const void* data, std::size_t len) {
    out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(len));
    if (!out_) throw Error("failed writing snapshot");
  }
  void u32(std::uint32_t v) {
    std::array<unsigned char, 4> b;
    for (int i = 0; i < 4; ++i) b[static_cast<std::size_t>(i)] = (v >> (8 * i)) & 0xff;
    bytes(b.data(), b.size());
  }
  void u64(std::uint64_t v) {
    std::array<unsigned char, 8> b;
    for (int i = 0; i < 8; ++i) b[static_cast<std::size_t>(i)] = (v >> (8 * i)) & 0xff;
    bytes(b.data(), b.size());
  }
  void f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    u64(bits);
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::uint64_t offset() const noexcept { return offset_; }

  void bytes(void* data, std::size_t len) {
    in_.read(static_cast<char*>(data), static_cast<std::streamsize>(len));
    if (static_cast<std::size_t>(in_.gcount()) != len) {
      throw FormatError("unexpected end of snapshot", offset_);
    }
    offset_ += len;
  }
  std::uint32_t u32() {
    std::array<unsigned char, 4> b;
    bytes(b.data(), b.size());
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[static_cast<std::size_t>(i)];
    return v;
  }
  std::uint64_t u64() {
    std::array<unsigned char, 8> b;
    bytes(b.data(), b.size());
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[static_cast<std::size_t>(i)];
    return v;
  }
  double f64() {
    std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
  }
  bool at_eof() {
    return in_.peek() == std::char_traits<char>::eof();
  }

 private:
  std::istream& in_;
  std::uint64_t offset_ = 0;
};

}  // namespace

void write_snapshot(const Embeddings& e, std::ostream& out) {
  const std::int64_t n = e.n();
  const std::int64_t f = e.f();
  if (n < 1 || f < 1) throw InvalidArgument("refusing to write an empty snapshot");
  if (static_cast<std::int64_t>(e.row_ids.size()) != n) {
    throw InvalidArgument("snapshot row_ids size does not match row count");
  }
  if (!(e.p >= 0.0 && e.p <= 1.0)) throw InvalidArgument("snapshot exponent outside [0, 1]");
  if (!e.e.allFinite()) throw NumericError("snapshot contains non-finite values");

  Writer w(out);
  w.bytes(kMagic, sizeof(kMagic));
  w.u32(kVersion);
  w.u64(static_cast<std::uint64_t>(n));
  w.u64(static_cast<std::uint64_t>(f));
  w.f64(e.p);
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = 0; j < f; ++j) w.f64(e.e(i, j));
  }
  for (const auto& id : e.row_ids) {
    w.u32(static_cast<std::uint32_t>(id.size()));
    w.bytes(id.data(), id.size());
  }
  if (!e.snapshot_label.empty()) {
    w.u32(static_cast<std::uint32_t>(e.snapshot_label.size()));
    w.bytes(e.snapshot_label.data(), e.snapshot_label.size());
  }
}

Embeddings read_snapshot(std::istream& in) {
  Reader r(in);

  char magic[4];
  r.bytes(magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw FormatError("bad snapshot magic", 0);
  }
  std::uint32_t version = r.u32();
  if (version != kVersion) {
    throw FormatError("unsupported snapshot version " + std::to_string(version), 4);
  }
  std::uint64_t n = r.u64();
  std::uint64_t f = r.u64();
  if (n == 0 || f == 0 || n * f > kMaxCells) {
    throw FormatError("implausible snapshot dimensions", 8);
  }
  double p = r.f64();
  if (!(p >= 0.0 && p <= 1.0)) throw FormatError("snapshot exponent outside [0, 1]", 24);

  Embeddings e;
  e.p = p;
  e.e.resize(static_cast<std::int64_t>(n), static_cast<std::int64_t>(f));
  for (std::uint64_t i = 0; i < n; ++i) {
    for (std::uint64_t j = 0; j < f; ++j) {
      std::uint64_t at = r.offset();
      double v = r.f64();
      if (!std::isfinite(v)) throw FormatError("non-finite embedding value", at);
      e.e(static_cast<std::int64_t>(i), static_cast<std::int64_t>(j)) = v;
    }
  }

  e.row_ids.reserve(n);
  std::unordered_set<std::string> seen;
  for (std::uint64_t i = 0; i < n; ++i) {
    std::uint64_t at = r.offset();
    std::uint32_t len = r.u32();
    if (len > kMaxIdLength) throw FormatError("implausible id length", at);
    std::string id(len, '\0');
    r.bytes(id.data(), len);
    if (!seen.insert(id).second) throw FormatError("duplicate row id '" + id + "'", at);
    e.row_ids.push_back(std::move(id));
  }

  if (!r.at_eof()) {
    std::uint64_t at = r.offset();
    std::uint32_t len = r.u32();
    if (len > kMaxIdLength) throw FormatError("implausible label length", at);
    std::string label(len, '\0');
    r.bytes(label.data(), len);
    e.snapshot_label = std::move(label);
    if (!r.at_eof()) throw FormatError("trailing bytes after snapshot label", r.offset());
  }
  return e;
}

void write_snapshot(const Embeddings& e, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  write_snapshot(e, out);
}

Embeddings read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  return read_snapshot(in);
}

}  // namespace spiky
