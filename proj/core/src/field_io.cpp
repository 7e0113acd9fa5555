#include "cuspforge/field_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cuspforge/error.hpp"

namespace cuspforge {

namespace fs = std::filesystem;

void atomic_write(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out.flush()) throw IoError("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string format_real(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

fs::path grid_sidecar(const fs::path& csv) {
    fs::path p = csv;
    p.replace_extension(".grid.json");
    return p;
}

std::string grid_to_json(const Grid& g) {
    // Keys are written in a fixed order so the file is byte-stable.
    std::string s = "{\n";
    s += "  \"x_min\": " + format_real(g.x_min()) + ",\n";
    s += "  \"x_max\": " + format_real(g.x_max()) + ",\n";
    s += "  \"y_min\": " + format_real(g.y_min()) + ",\n";
    s += "  \"y_max\": " + format_real(g.y_max()) + ",\n";
    s += "  \"nx\": " + std::to_string(g.nx()) + ",\n";
    s += "  \"ny\": " + std::to_string(g.ny()) + ",\n";
    s += "  \"half_plane_side\": \"" + to_string(g.side()) + "\"\n}\n";
    return s;
}

Grid grid_from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        return Grid(j.at("x_min").get<double>(), j.at("x_max").get<double>(),
                    j.at("y_min").get<double>(), j.at("y_max").get<double>(),
                    j.at("nx").get<int>(), j.at("ny").get<int>(),
                    half_plane_from_string(j.at("half_plane_side").get<std::string>()));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad grid metadata: ") + e.what());
    }
}

namespace {

template <class T>
void write_impl(const fs::path& csv, const Field<T>& f) {
    std::string out;
    out.reserve(f.values.size() * 64);
    constexpr bool is_complex = !std::is_same_v<T, double>;
    out += is_complex ? "x,y,re,im\n" : "x,y,value\n";
    const Grid& g = f.grid;
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            out += format_real(g.x(i));
            out += ',';
            out += format_real(g.y(j));
            out += ',';
            if constexpr (is_complex) {
                out += format_real(f.at(i, j).real());
                out += ',';
                out += format_real(f.at(i, j).imag());
            } else {
                out += format_real(f.at(i, j));
            }
            out += '\n';
        }
    }
    atomic_write(grid_sidecar(csv), grid_to_json(g));
    atomic_write(csv, out);
}

template <class T>
Field<T> read_impl(const fs::path& csv) {
    const Grid g = grid_from_json(read_text(grid_sidecar(csv)));
    std::istringstream in(read_text(csv));
    std::string line;
    std::getline(in, line);
    constexpr bool is_complex = !std::is_same_v<T, double>;
    const std::string expected = is_complex ? "x,y,re,im" : "x,y,value";
    if (line != expected) throw ParseError(csv.string() + ": expected header " + expected);
    Field<T> f(g);
    std::size_t k = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (k >= f.values.size()) throw ParseError(csv.string() + ": too many rows");
        const char* p = line.c_str();
        char* end = nullptr;
        double cols[4];
        const int want = is_complex ? 4 : 3;
        for (int c = 0; c < want; ++c) {
            cols[c] = std::strtod(p, &end);
            if (end == p) throw ParseError(csv.string() + ": malformed row");
            p = (*end == ',') ? end + 1 : end;
        }
        if constexpr (is_complex)
            f.values[k] = cplx(cols[2], cols[3]);
        else
            f.values[k] = cols[2];
        ++k;
    }
    if (k != f.values.size()) throw ParseError(csv.string() + ": row count does not match grid");
    return f;
}

}  // namespace

void write_field(const fs::path& csv, const ScalarField& f) { write_impl(csv, f); }
void write_field(const fs::path& csv, const ComplexField& f) { write_impl(csv, f); }
ScalarField read_scalar_field(const fs::path& csv) { return read_impl<double>(csv); }
ComplexField read_complex_field(const fs::path& csv) { return read_impl<cplx>(csv); }

}  // namespace cuspforge
