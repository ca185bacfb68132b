#include "ors_lab/manifest.hpp"

#include <array>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

namespace ors::lab {

namespace {

class Digest {
 public:
  Digest() : ctx_(EVP_MD_CTX_new()) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
  }
  ~Digest() { EVP_MD_CTX_free(ctx_); }
  Digest(const Digest&) = delete;
  Digest& operator=(const Digest&) = delete;

  void update(const void* data, std::size_t n) {
    if (EVP_DigestUpdate(ctx_, data, n) != 1) throw std::runtime_error("sha256 update failed");
  }
  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_, md.data(), &len) != 1) throw std::runtime_error("sha256 final failed");
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return out.str();
  }

 private:
  EVP_MD_CTX* ctx_;
};

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  Digest d;
  d.update(bytes.data(), bytes.size());
  return d.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  Digest d;
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    d.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return d.hex();
}

Manifest::Manifest(std::filesystem::path out_dir) : out_dir_(std::move(out_dir)) {
  const auto path = out_dir_ / "manifest.json";
  if (std::filesystem::exists(path)) {
    std::ifstream in(path);
    doc_ = nlohmann::json::parse(in, nullptr, false);
    if (doc_.is_discarded() || !doc_.is_object()) doc_ = nlohmann::json::object();
  } else {
    doc_ = nlohmann::json::object();
  }
  if (!doc_.contains("artifacts")) doc_["artifacts"] = nlohmann::json::object();
}

void Manifest::record(const std::filesystem::path& file, const std::string& command) {
  const auto rel = std::filesystem::relative(file, out_dir_).generic_string();
  doc_["artifacts"][rel] = {{"sha256", sha256_file(file)},
                            {"bytes", std::filesystem::file_size(file)},
                            {"command", command}};
}

void Manifest::save() const {
  const auto path = out_dir_ / "manifest.json";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc_.dump(2) << "\n";
}

}  // namespace ors::lab
