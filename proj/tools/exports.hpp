#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cuspforge/cusp_generator.hpp"

namespace cuspforge::cli {

namespace fs = std::filesystem;

inline constexpr const char* kArtifactVersion = "0.1.0";

// Flat key=value text, insertion ordered. Re-setting a key keeps its slot.
class Manifest {
public:
    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, double value);
    void set(const std::string& key, int value);
    std::optional<std::string> get(const std::string& key) const;
    std::string require(const std::string& key) const;
    double number(const std::string& key) const;
    std::string render() const;
    static Manifest parse(const std::string& text);
    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

Manifest read_manifest(const fs::path& dir);

// key=value lines, '#' comments, surrounding blanks trimmed.
std::map<std::string, std::string> read_config(const fs::path& path);

void write_boundary(const fs::path& path, const FreeBoundaryCurve& curve);
FreeBoundaryCurve read_boundary(const fs::path& path);
void write_eta(const fs::path& path, const EtaMap& eta);
EtaMap read_eta(const fs::path& path);
void write_points(const fs::path& path, const std::string& header, const std::vector<double>& xs);

}  // namespace cuspforge::cli
