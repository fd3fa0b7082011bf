#include "collapse/rng.hpp"

#include <openssl/sha.h>

#include <array>
#include <cmath>

namespace collapse {

double RandomStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double RandomStream::normal() { return normal_(engine_); }

double RandomStream::exponential(double rate) { return -std::log(1.0 - uniform()) / rate; }

std::uint64_t derive_trajectory_seed(std::uint64_t master_seed, std::uint64_t index) {
  std::array<unsigned char, 16> message{};
  for (int b = 0; b < 8; ++b) {
    message[b] = static_cast<unsigned char>(master_seed >> (8 * b));
    message[8 + b] = static_cast<unsigned char>(index >> (8 * b));
  }
  std::array<unsigned char, SHA256_DIGEST_LENGTH> digest{};
  SHA256(message.data(), message.size(), digest.data());
  std::uint64_t seed = 0;
  for (int b = 0; b < 8; ++b) seed |= static_cast<std::uint64_t>(digest[b]) << (8 * b);
  return seed;
}

}  // namespace collapse
