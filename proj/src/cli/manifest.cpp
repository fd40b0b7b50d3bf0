#include "tricausal/cli.hpp"
#include "tricausal/distribution_io.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <filesystem>
#include <stdexcept>

namespace tricausal::cli {

std::string tool_version() { return "0.1.0"; }

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 15]);
    }
    return out;
}

Manifest::Manifest(std::string command, const Common& c) : command_(std::move(command)), common_(c) {
    std::filesystem::create_directories(common_.out_dir);
}

void Manifest::add_input(const std::string& path) { inputs_.emplace_back(path, sha256_hex(read_file(path))); }

void Manifest::write_output(const std::string& name, const std::string& contents) {
    write_file((std::filesystem::path(common_.out_dir) / name).string(), contents);
    outputs_.emplace_back(name, sha256_hex(contents));
}

void Manifest::finish(double wall_clock_seconds) {
    nlohmann::ordered_json j;
    j["command"] = command_;
    j["arguments"] = common_.argv;
    j["tool_version"] = tool_version();
    j["rng_seed"] = common_.rng_seed;
    j["workers"] = common_.workers;
    auto list = [](const std::vector<std::pair<std::string, std::string>>& files) {
        nlohmann::ordered_json a = nlohmann::ordered_json::array();
        for (const auto& [path, digest] : files) a.push_back({{"path", path}, {"sha256", digest}});
        return a;
    };
    j["inputs"] = list(inputs_);
    j["outputs"] = list(outputs_);
    j["wall_clock_seconds"] = wall_clock_seconds;
    write_file((std::filesystem::path(common_.out_dir) / "manifest.json").string(), j.dump(2) + "\n");
}

}  // namespace tricausal::cli
