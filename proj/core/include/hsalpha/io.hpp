#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hsalpha/analysis.hpp"
#include "hsalpha/eulerian.hpp"
#include "hsalpha/lagrangian.hpp"
#include "hsalpha/projection.hpp"

namespace hsalpha {

/// InitialData from JSON text. Malformed input throws ParameterError or
/// StructuralError.
InitialData initial_data_from_json(const std::string& text);
InitialData load_initial_data(const std::filesystem::path& file);

AlphaFunction alpha_from_json(const std::string& text);
AlphaFunction load_alpha(const std::filesystem::path& file);

std::string projected_json(const ProjectedData& proj);
/// xi, y, U, V, H, per-cell derivatives and breaking times.
std::string lagrangian_json(const LagrangianGrid& grid);
std::string eulerian_json(const EulerianSolution& sol);
std::string analysis_json(const std::vector<CellLengths>& cells, const CoincidenceSummary& summary);

/// x,u,F at every breakpoint of u and F; F is the left limit.
std::string solution_csv(const EulerianSolution& sol);
void write_solution_csv(const EulerianSolution& sol, const std::filesystem::path& file);

std::string read_file(const std::filesystem::path& file);
void write_file(const std::filesystem::path& file, const std::string& text);

}  // namespace hsalpha
