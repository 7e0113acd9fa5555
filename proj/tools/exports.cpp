#include "exports.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "cuspforge/error.hpp"
#include "cuspforge/field_io.hpp"

namespace cuspforge::cli {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& s, const std::string& where) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw ParseError("bad number '" + s + "' in " + where);
    return v;
}

std::vector<std::vector<std::string>> csv_rows(const fs::path& path, const std::string& header) {
    std::istringstream in(read_text(path));
    std::string line;
    if (!std::getline(in, line) || trim(line) != header)
        throw ParseError(path.string() + ": expected header '" + header + "'");
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string c;
        while (std::getline(ls, c, ',')) cells.push_back(trim(c));
        rows.push_back(std::move(cells));
    }
    return rows;
}

}  // namespace

void Manifest::set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : entries_)
        if (k == key) {
            v = value;
            return;
        }
    entries_.emplace_back(key, value);
}

void Manifest::set(const std::string& key, double value) { set(key, format_real(value)); }
void Manifest::set(const std::string& key, int value) { set(key, std::to_string(value)); }

std::optional<std::string> Manifest::get(const std::string& key) const {
    for (const auto& [k, v] : entries_)
        if (k == key) return v;
    return std::nullopt;
}

std::string Manifest::require(const std::string& key) const {
    auto v = get(key);
    if (!v) throw ParseError("manifest has no key '" + key + "'");
    return *v;
}

double Manifest::number(const std::string& key) const {
    return to_double(require(key), "manifest key " + key);
}

std::string Manifest::render() const {
    std::string out;
    for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
    return out;
}

Manifest Manifest::parse(const std::string& text) {
    Manifest m;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        m.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return m;
}

Manifest read_manifest(const fs::path& dir) {
    const fs::path p = dir / "manifest.txt";
    if (!fs::exists(p)) throw IoError("no manifest in " + dir.string());
    return Manifest::parse(read_text(p));
}

std::map<std::string, std::string> read_config(const fs::path& path) {
    std::map<std::string, std::string> out;
    std::istringstream in(read_text(path));
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(path.string() + ":" + std::to_string(n) + ": expected key=value");
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

void write_boundary(const fs::path& path, const FreeBoundaryCurve& c) {
    std::string s = "x,f,contact\n";
    for (std::size_t k = 0; k < c.xs.size(); ++k) {
        const bool contact = k < c.contact.size() && c.contact[k];
        s += format_real(c.xs[k]) + "," + format_real(c.fs[k]) + "," + (contact ? "1" : "0") + "\n";
    }
    atomic_write(path, s);
}

FreeBoundaryCurve read_boundary(const fs::path& path) {
    FreeBoundaryCurve c;
    for (const auto& row : csv_rows(path, "x,f,contact")) {
        if (row.size() != 3) throw ParseError(path.string() + ": expected 3 columns");
        c.xs.push_back(to_double(row[0], path.string()));
        c.fs.push_back(to_double(row[1], path.string()));
        c.contact.push_back(row[2] == "1");
    }
    return c;
}

void write_eta(const fs::path& path, const EtaMap& eta) {
    std::string s = "x,eta\n";
    for (std::size_t k = 0; k < eta.xs.size(); ++k)
        s += format_real(eta.xs[k]) + "," + format_real(eta.etas[k]) + "\n";
    atomic_write(path, s);
}

EtaMap read_eta(const fs::path& path) {
    EtaMap e;
    for (const auto& row : csv_rows(path, "x,eta")) {
        if (row.size() != 2) throw ParseError(path.string() + ": expected 2 columns");
        e.xs.push_back(to_double(row[0], path.string()));
        e.etas.push_back(to_double(row[1], path.string()));
    }
    return e;
}

void write_points(const fs::path& path, const std::string& header, const std::vector<double>& xs) {
    std::string s = header + "\n";
    for (double x : xs) s += format_real(x) + "\n";
    atomic_write(path, s);
}

}  // namespace cuspforge::cli
