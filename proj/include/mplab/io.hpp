#pragma once

#include <filesystem>
#include <string>

#include "mplab/grid.hpp"
#include "mplab/measure.hpp"

namespace mplab {

/// Deterministic float formatting used by every writer ("%.12g").
std::string format_number(double v);

/// CSV matrix, row-major: row i holds the n comma-separated values u(i, .).
std::string grid_function_csv(const GridFunction& u);
/// JSON header {bounds, n, h} accompanying a CSV field.
std::string grid_header_json(const Grid& g);

GridFunction read_grid_function_csv(const std::filesystem::path& csv, const Grid& g);

/// Measure file form: {"density": {"kind": ...}, "atoms": [{x, y, mass}]}.
std::string measure_json(const Measure& m);

/// Write-temp-then-rename; parent directories are created.
void atomic_write(const std::filesystem::path& path, const std::string& content);

}  // namespace mplab
