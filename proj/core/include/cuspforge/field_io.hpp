#pragma once

#include <filesystem>
#include <string>

#include "cuspforge/grid.hpp"

namespace cuspforge {

// Writes content to a temporary sibling and renames it over path.
void atomic_write(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

// Shortest round-trip-safe rendering with 17 significant digits.
std::string format_real(double value);

// CSV with header x,y,value (or x,y,re,im), one row per node in row-major
// order, plus a sidecar "<stem>.grid.json" holding the grid metadata.
void write_field(const std::filesystem::path& csv, const ScalarField& field);
void write_field(const std::filesystem::path& csv, const ComplexField& field);
ScalarField read_scalar_field(const std::filesystem::path& csv);
ComplexField read_complex_field(const std::filesystem::path& csv);

std::filesystem::path grid_sidecar(const std::filesystem::path& csv);
std::string grid_to_json(const Grid& g);
Grid grid_from_json(const std::string& text);

}  // namespace cuspforge
