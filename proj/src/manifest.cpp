#include "ghosttrack/manifest.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <memory>

#include <openssl/evp.h>

#include "ghosttrack/errors.hpp"

namespace ghosttrack {

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file for hashing", path);

    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
        throw IoError("cannot initialise SHA-256", path);

    std::array<char, 1 << 16> buf;
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    if (in.bad()) throw IoError("failed reading file for hashing", path);

    std::array<unsigned char, EVP_MAX_MD_SIZE> digest;
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);

    std::string hex;
    hex.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        char b[3];
        std::snprintf(b, sizeof b, "%02x", digest[i]);
        hex += b;
    }
    return hex;
}

Manifest write_manifest(const std::filesystem::path& dir, const std::vector<std::string>& files) {
    Manifest m;
    m.directory = dir;
    for (const auto& f : files) m.entries.push_back({f, sha256_file(dir / f)});

    const auto path = dir / "manifest.txt";
    std::ofstream out(path);
    if (!out) throw IoError("cannot open manifest for writing", path);
    for (const auto& e : m.entries) out << e.sha256 << "  " << e.file << '\n';
    if (!out) throw IoError("failed writing manifest", path);
    return m;
}

}  // namespace ghosttrack
