#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "phi4/cli.hpp"

namespace phi4::cli {

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "' for checksumming");
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw IoError("sha256 initialisation failed");
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest, &len);
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    return os.str();
}

std::string Manifest::json() const {
    nlohmann::json j;
    j["subcommand"] = subcommand;
    j["version"] = version;
    auto& p = j["parameters"] = nlohmann::json::object();
    auto& s = j["sources"] = nlohmann::json::object();
    for (const auto& [k, r] : params.all()) {
        p[k] = r.value;
        s[k] = r.source;
    }
    auto& o = j["outputs"] = nlohmann::json::array();
    for (const auto& [file, sum] : outputs) o.push_back({{"file", file}, {"sha256", sum}});
    return j.dump(2) + "\n";
}

}  // namespace phi4::cli
