#include "csiaug/digest.hpp"

#include <array>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "csiaug/error.hpp"
#include "csiaug/spectrogram_file.hpp"

namespace csiaug {

std::string sha256_digest(std::span<const std::uint8_t> bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    fail(ErrorKind::runtime, "SHA-256 computation failed");
  }
  std::string out = "sha256:";
  for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", md[i]);
  return out;
}

std::string sha256_file_digest(const std::filesystem::path& path) {
  return sha256_digest(read_file_bytes(path));
}

}  // namespace csiaug
