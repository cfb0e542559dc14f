#pragma once

// Text formats for grid functions and solver traces.
//
// Grid function file:
//
//   # besselpot grid function v1
//   dim 1
//   half_width 16
//   points_per_dim 1024
//   alpha 2          (optional)
//   beta 3           (optional)
//   values 1024
//   <one value per line, %.17g>
//
// Values are written with 17 significant digits so a write/read round trip
// is exact.

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "besselpot/grid.hpp"
#include "besselpot/solver.hpp"

namespace besselpot {

struct StoredFunction {
    GridFunction function;
    std::optional<double> alpha;
    std::optional<double> beta;
};

void write_grid_function(std::ostream& out, const GridFunction& f, std::optional<double> alpha = std::nullopt,
                         std::optional<double> beta = std::nullopt);

/// Throws SchemaError on a malformed header, missing or extra values.
StoredFunction read_grid_function(std::istream& in);

void save_grid_function(const std::filesystem::path& path, const GridFunction& f,
                        std::optional<double> alpha = std::nullopt, std::optional<double> beta = std::nullopt);
StoredFunction load_grid_function(const std::filesystem::path& path);

/// CSV with header iter,sup,lambda,delta,residual.
void write_trace_csv(std::ostream& out, const SolverTrace& trace);

/// %.17g
std::string format_double(double v);

}  // namespace besselpot
