#include "mreg/layer_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "mreg/error.hpp"

namespace mreg {
namespace {

constexpr char kMagic[4] = {'M', 'R', 'E', 'G'};

class Writer {
 public:
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    out_.insert(out_.end(), p, p + n);
  }
  template <class T>
  void uint(T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { uint(std::bit_cast<std::uint64_t>(v)); }
  std::vector<std::uint8_t>& buffer() { return out_; }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}

  std::span<const std::uint8_t> take(std::size_t n) {
    if (remaining() < n) throw LayerFormatError("truncated layer file");
    const auto s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  template <class T>
  T uint() {
    const auto s = take(sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(static_cast<T>(s[i]) << (8 * i));
    return v;
  }
  double f64() { return std::bit_cast<double>(uint<std::uint64_t>()); }
  std::size_t remaining() const { return data_.size() - pos_; }
  std::size_t position() const { return pos_; }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

}  // namespace

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  std::size_t offset = 0;
  while (offset < bytes.size()) {
    const auto chunk = static_cast<uInt>(
        std::min<std::size_t>(bytes.size() - offset, std::numeric_limits<uInt>::max()));
    crc = crc32(crc, bytes.data() + offset, chunk);
    offset += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

std::vector<std::uint8_t> serialize_layer(const ExpressionLayer& layer) {
  Writer w;
  w.bytes(kMagic, sizeof(kMagic));
  w.uint<std::uint16_t>(kLayerFormatVersion);
  const std::string& task = layer.task_name();
  w.uint<std::uint32_t>(static_cast<std::uint32_t>(task.size()));
  w.bytes(task.data(), task.size());
  w.uint<std::uint32_t>(static_cast<std::uint32_t>(layer.geometry().height));
  w.uint<std::uint32_t>(static_cast<std::uint32_t>(layer.geometry().width));
  w.uint<std::uint32_t>(static_cast<std::uint32_t>(layer.geometry().channels));
  w.uint<std::uint16_t>(static_cast<std::uint16_t>(layer.r()));
  w.f64(layer.lambda_reg());
  for (double v : layer.coefficients()) w.f64(v);
  w.uint<std::uint32_t>(crc32_of(w.buffer()));
  return std::move(w.buffer());
}

ExpressionLayer deserialize_layer(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < sizeof(kMagic) || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
    throw LayerFormatError("not a layer file (bad magic bytes)");
  Reader in(bytes);
  in.take(sizeof(kMagic));
  const auto version = in.uint<std::uint16_t>();
  if (version != kLayerFormatVersion)
    throw LayerFormatError("unsupported layer format version " + std::to_string(version) +
                           " (expected " + std::to_string(kLayerFormatVersion) + ")");
  const auto task_len = in.uint<std::uint32_t>();
  const auto task_bytes = in.take(task_len);
  std::string task(task_bytes.begin(), task_bytes.end());
  const auto height = in.uint<std::uint32_t>();
  const auto width = in.uint<std::uint32_t>();
  const auto channels = in.uint<std::uint32_t>();
  const auto r = in.uint<std::uint16_t>();
  const double lambda_reg = in.f64();

  constexpr std::uint64_t kMaxDim = std::numeric_limits<int>::max();
  if (height == 0 || width == 0 || height > kMaxDim || width > kMaxDim ||
      (channels != 1 && channels != 3) || r == 0 || r % 2 == 0)
    throw LayerFormatError("invalid layer header: geometry " + std::to_string(height) + "x" +
                           std::to_string(width) + "x" + std::to_string(channels) +
                           ", r=" + std::to_string(r));
  const unsigned __int128 count = static_cast<unsigned __int128>(height) * width * channels *
                                  (static_cast<std::uint64_t>(r) * r + 1);
  const unsigned __int128 needed = count * 8 + 4;
  if (needed > in.remaining()) throw LayerFormatError("truncated layer file");
  if (needed < in.remaining())
    throw LayerFormatError("trailing bytes after layer payload (" +
                           std::to_string(static_cast<std::uint64_t>(in.remaining() - needed)) +
                           " extra)");

  std::vector<double> coefficients(static_cast<std::size_t>(count));
  for (double& v : coefficients) v = in.f64();
  const std::size_t crc_offset = in.position();
  const auto stored_crc = in.uint<std::uint32_t>();
  if (stored_crc != crc32_of(bytes.first(crc_offset)))
    throw LayerFormatError("layer checksum mismatch");

  try {
    return ExpressionLayer(std::move(task),
                           Geometry{static_cast<int>(height), static_cast<int>(width),
                                    static_cast<int>(channels)},
                           r, lambda_reg, std::move(coefficients));
  } catch (const Error& e) {
    throw LayerFormatError(std::string("invalid layer contents: ") + e.what());
  }
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>());
}

void save_layer(const ExpressionLayer& layer, const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = serialize_layer(layer);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to " + path.string());
}

ExpressionLayer load_layer(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = read_file_bytes(path);
  try {
    return deserialize_layer(bytes);
  } catch (const LayerFormatError& e) {
    throw LayerFormatError(path.string() + ": " + e.what());
  }
}

}  // namespace mreg
