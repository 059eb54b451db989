#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "unitk/errors.hpp"
#include "unitk/formats.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <mutex>
#include <regex>
#include <sstream>

namespace unitk::formats {

namespace {

std::mutex& writer_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path.string());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    std::lock_guard lock(writer_mutex());
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out)
            throw Error("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr))
        throw Error("SHA-256 failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 15]);
    }
    return out;
}

CachedFile fetch_to_cache(const std::string& url, const std::filesystem::path& cache_dir) {
    static const std::regex url_re(R"(^(https?://[^/]+)(/.*)?$)", std::regex::icase);
    std::smatch m;
    if (!std::regex_match(url, m, url_re))
        throw ConfigError("not an http(s) URL: " + url);

    CachedFile f;
    f.path = cache_dir / (sha256_hex(url).substr(0, 32) + ".dat");
    auto digest_path = f.path;
    digest_path += ".sha256";
    if (std::filesystem::exists(f.path) && std::filesystem::exists(digest_path)) {
        auto content = read_file(f.path);
        auto recorded = read_file(digest_path);
        while (!recorded.empty() && (recorded.back() == '\n' || recorded.back() == ' '))
            recorded.pop_back();
        if (sha256_hex(content) == recorded) {
            f.sha256 = recorded;
            return f;
        }
    }

    httplib::Client client(m[1].str());
    client.set_follow_location(true);
    client.set_connection_timeout(30);
    client.set_read_timeout(120);
    std::string path = m[2].matched ? m[2].str() : "/";
    auto res = client.Get(path);
    if (!res)
        throw Error("download failed for " + url + ": " + httplib::to_string(res.error()));
    if (res->status != 200)
        throw Error("download failed for " + url + ": HTTP " + std::to_string(res->status));
    f.sha256 = sha256_hex(res->body);
    write_file_atomic(f.path, res->body);
    write_file_atomic(digest_path, f.sha256 + "\n");
    f.downloaded = true;
    return f;
}

std::string read_source(const std::string& path_or_url, const std::filesystem::path& cache_dir, std::string* origin) {
    if (path_or_url.rfind("http://", 0) == 0 || path_or_url.rfind("https://", 0) == 0) {
        auto f = fetch_to_cache(path_or_url, cache_dir);
        if (origin)
            *origin = path_or_url + " (sha256 " + f.sha256 + ")";
        return read_file(f.path);
    }
    if (origin)
        *origin = path_or_url;
    return read_file(path_or_url);
}

}  // namespace unitk::formats
