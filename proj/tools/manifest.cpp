#include "manifest.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace vncs::cli {

namespace fs = std::filesystem;

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
    std::array<char, 1 << 16> buf;
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest, &len);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

namespace {

std::vector<std::string> listed_files(const fs::path& directory) {
    std::vector<std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(directory)) {
        if (!entry.is_regular_file()) continue;
        const std::string rel = fs::relative(entry.path(), directory).generic_string();
        if (rel != kManifestName) files.push_back(rel);
    }
    std::sort(files.begin(), files.end());
    return files;
}

}  // namespace

void write_manifest(const fs::path& directory) {
    std::ostringstream body;
    body << "path\tsha256\tbytes\n";
    for (const auto& rel : listed_files(directory))
        body << rel << '\t' << sha256_file(directory / rel) << '\t' << fs::file_size(directory / rel) << '\n';
    std::ofstream out(directory / kManifestName, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write manifest in " + directory.string());
    out << body.str();
}

bool verify_manifest(const fs::path& directory, std::string* problem) {
    auto report = [&](const std::string& what) {
        if (problem) *problem = what;
        return false;
    };
    std::ifstream in(directory / kManifestName);
    if (!in) return report("manifest missing");
    std::map<std::string, std::string> recorded;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string path, digest, bytes;
        std::getline(row, path, '\t');
        std::getline(row, digest, '\t');
        recorded[path] = digest;
    }
    const auto present = listed_files(directory);
    if (present.size() != recorded.size()) return report("manifest lists " + std::to_string(recorded.size()) +
                                                         " files, directory holds " + std::to_string(present.size()));
    for (const auto& rel : present) {
        auto it = recorded.find(rel);
        if (it == recorded.end()) return report(rel + " not listed");
        if (it->second != sha256_file(directory / rel)) return report(rel + " digest mismatch");
    }
    return true;
}

}  // namespace vncs::cli
