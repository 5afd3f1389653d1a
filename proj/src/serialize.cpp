#include "pntk/serialize.hpp"

#include <array>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "pntk/errors.hpp"

namespace pntk {
namespace {

// Compact SHA-256 (FIPS 180-4), enough for output digests in manifests.
class Sha256 {
 public:
  Sha256() { state_ = kInit; }

  void update(const std::uint8_t* data, size_t len) {
    total_ += len;
    while (len > 0) {
      const size_t take = std::min(len, size_t{64} - fill_);
      std::memcpy(buffer_.data() + fill_, data, take);
      fill_ += take;
      data += take;
      len -= take;
      if (fill_ == 64) {
        process(buffer_.data());
        fill_ = 0;
      }
    }
  }

  std::array<std::uint8_t, 32> finish() {
    const std::uint64_t bits = total_ * 8;
    const std::uint8_t pad = 0x80;
    update(&pad, 1);
    const std::uint8_t zero = 0x00;
    while (fill_ != 56) update(&zero, 1);
    std::array<std::uint8_t, 8> len_bytes;
    for (int i = 0; i < 8; ++i)
      len_bytes[static_cast<size_t>(i)] =
          static_cast<std::uint8_t>(bits >> (56 - 8 * i));
    update(len_bytes.data(), 8);
    std::array<std::uint8_t, 32> out;
    for (int i = 0; i < 8; ++i)
      for (int b = 0; b < 4; ++b)
        out[static_cast<size_t>(4 * i + b)] =
            static_cast<std::uint8_t>(state_[static_cast<size_t>(i)] >>
                                      (24 - 8 * b));
    return out;
  }

 private:
  static constexpr std::array<std::uint32_t, 8> kInit = {
      0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
      0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};

  static constexpr std::array<std::uint32_t, 64> kRound = {
      0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1,
      0x923f82a4, 0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3,
      0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786,
      0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
      0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147,
      0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13,
      0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
      0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
      0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a,
      0x5b9cca4f, 0x682e6ff3, 0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208,
      0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};

  static std::uint32_t rotr(std::uint32_t v, int n) {
    return (v >> n) | (v << (32 - n));
  }

  void process(const std::uint8_t* p) {
    std::array<std::uint32_t, 64> w;
    for (int i = 0; i < 16; ++i)
      w[static_cast<size_t>(i)] =
          (std::uint32_t{p[4 * i]} << 24) | (std::uint32_t{p[4 * i + 1]} << 16) |
          (std::uint32_t{p[4 * i + 2]} << 8) | std::uint32_t{p[4 * i + 3]};
    for (int i = 16; i < 64; ++i) {
      const std::uint32_t s0 = rotr(w[static_cast<size_t>(i - 15)], 7) ^
                               rotr(w[static_cast<size_t>(i - 15)], 18) ^
                               (w[static_cast<size_t>(i - 15)] >> 3);
      const std::uint32_t s1 = rotr(w[static_cast<size_t>(i - 2)], 17) ^
                               rotr(w[static_cast<size_t>(i - 2)], 19) ^
                               (w[static_cast<size_t>(i - 2)] >> 10);
      w[static_cast<size_t>(i)] = w[static_cast<size_t>(i - 16)] + s0 +
                                  w[static_cast<size_t>(i - 7)] + s1;
    }
    auto s = state_;
    for (int i = 0; i < 64; ++i) {
      const std::uint32_t S1 = rotr(s[4], 6) ^ rotr(s[4], 11) ^ rotr(s[4], 25);
      const std::uint32_t ch = (s[4] & s[5]) ^ (~s[4] & s[6]);
      const std::uint32_t t1 =
          s[7] + S1 + ch + kRound[static_cast<size_t>(i)] + w[static_cast<size_t>(i)];
      const std::uint32_t S0 = rotr(s[0], 2) ^ rotr(s[0], 13) ^ rotr(s[0], 22);
      const std::uint32_t maj = (s[0] & s[1]) ^ (s[0] & s[2]) ^ (s[1] & s[2]);
      const std::uint32_t t2 = S0 + maj;
      s[7] = s[6];
      s[6] = s[5];
      s[5] = s[4];
      s[4] = s[3] + t1;
      s[3] = s[2];
      s[2] = s[1];
      s[1] = s[0];
      s[0] = t1 + t2;
    }
    for (int i = 0; i < 8; ++i)
      state_[static_cast<size_t>(i)] += s[static_cast<size_t>(i)];
  }

  std::array<std::uint32_t, 8> state_;
  std::array<std::uint8_t, 64> buffer_;
  size_t fill_ = 0;
  std::uint64_t total_ = 0;
};

}  // namespace

std::string format_double(double value) {
  std::array<char, 64> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    const char* begin = token.data();
    const char* end = begin + token.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end > begin && (end[-1] == ' ' || end[-1] == '\t' || end[-1] == '\r'))
      --end;
    if (begin == end) continue;
    double v = 0.0;
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr != end)
      throw ConfigError("could not parse decimal value: '" + token + "'");
    values.push_back(v);
  }
  return values;
}

std::string sweep_to_csv(const SweepResult& result) {
  std::string out = "sweep_var,width,mean,std,mad,limit,n_samples\n";
  for (const auto& row : result.rows) {
    out += format_double(row.sweep_var);
    out += ',';
    out += std::to_string(row.width);
    out += ',';
    out += format_double(row.mean);
    out += ',';
    out += format_double(row.std_dev);
    out += ',';
    out += format_double(row.mad);
    out += ',';
    out += format_double(row.limit);
    out += ',';
    out += std::to_string(row.n_samples);
    out += '\n';
  }
  return out;
}

std::string sha256_hex(const std::string& bytes) {
  Sha256 hash;
  hash.update(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size());
  const auto digest = hash.finish();
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(64);
  for (std::uint8_t b : digest) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0x0f]);
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("could not open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failure: " + path);
  return buf.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("could not open for writing: " + path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("write failure: " + path);
}

std::vector<std::vector<double>> read_numeric_csv(const std::string& path) {
  const std::string text = read_file(path);
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    try {
      rows.push_back(parse_double_list(line));
    } catch (const ConfigError&) {
      if (first) {
        first = false;
        continue;  // header row
      }
      throw;
    }
    first = false;
  }
  return rows;
}

}  // namespace pntk
