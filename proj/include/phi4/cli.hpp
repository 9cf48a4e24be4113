#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace phi4::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kConfig = 3, kRefused = 4, kRuntime = 5, kIo = 6 };

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Flat key -> value map. Keys are bare parameter names ("n", "dt", ...); a
// file may also scope them by subcommand ("simulate.n" or an INI section).
struct Layer {
    std::string source;
    std::map<std::string, std::string> values;
};

// INI (sections allowed) or JSON (objects flattened with '.'). A run
// manifest is accepted too; its "parameters" object is used.
Layer load_config(const std::string& path);

struct Resolved {
    std::string value;
    std::string source;  // "default", "flag" or a file path
};

// Typed view on the resolved parameters of one subcommand.
class Params {
public:
    void set(const std::string& key, Resolved r) { values_[key] = std::move(r); }
    const std::map<std::string, Resolved>& all() const { return values_; }

    std::string str(const std::string& key) const;
    double real(const std::string& key) const;
    long integer(const std::string& key) const;
    unsigned long long unsigned_integer(const std::string& key) const;
    bool boolean(const std::string& key) const;
    std::vector<double> reals(const std::string& key) const;  // comma-separated

private:
    std::map<std::string, Resolved> values_;
};

// Parameter precedence: flag, then "<subcommand>.<key>" from the file, then
// the bare key from the file, then the default.
Params resolve(const std::string& subcommand, const std::vector<std::pair<std::string, std::string>>& defaults,
               const std::map<std::string, std::string>& flags, const std::vector<Layer>& files);

std::string sha256_file(const std::string& path);

struct Manifest {
    std::string subcommand;
    std::string version;
    Params params;
    std::vector<std::pair<std::string, std::string>> outputs;  // file name, sha256
    std::string json() const;
};

// Parses argv and runs one subcommand; returns an ExitCode.
int run(int argc, char** argv);

}  // namespace phi4::cli
