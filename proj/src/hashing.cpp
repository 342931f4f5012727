#include "opilex/hashing.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>
#include <vector>

#include "opilex/errors.hpp"

namespace opilex {

namespace {

std::string hex_encode(const unsigned char* bytes, size_t n) {
  static const char* digits = "0123456789abcdef";
  std::string out(n * 2, '0');
  for (size_t i = 0; i < n; ++i) {
    out[2 * i] = digits[bytes[i] >> 4];
    out[2 * i + 1] = digits[bytes[i] & 0xf];
  }
  return out;
}

using MdCtx = std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)>;

MdCtx new_sha256_ctx() {
  MdCtx ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
    throw Error("sha256 init failed");
  return ctx;
}

std::string finish_hex(MdCtx& ctx, size_t truncate_bytes = 0) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1)
    throw Error("sha256 final failed");
  size_t n = truncate_bytes ? truncate_bytes : len;
  return hex_encode(digest.data(), n);
}

}  // namespace

std::string anonymize_author(std::string_view name, std::string_view salt) {
  if (name.empty() || name == "[deleted]") return std::string(kDeletedAuthor);
  auto ctx = new_sha256_ctx();
  const unsigned char sep = 0;  // keyed as H(salt || 0x00 || name)
  EVP_DigestUpdate(ctx.get(), salt.data(), salt.size());
  EVP_DigestUpdate(ctx.get(), &sep, 1);
  EVP_DigestUpdate(ctx.get(), name.data(), name.size());
  return finish_hex(ctx, 8);
}

std::string sha256_hex(std::string_view bytes) {
  auto ctx = new_sha256_ctx();
  EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size());
  return finish_hex(ctx);
}

std::string sha256_file_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file for hashing: " + path);
  auto ctx = new_sha256_ctx();
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<size_t>(in.gcount()));
  }
  return finish_hex(ctx);
}

}  // namespace opilex
