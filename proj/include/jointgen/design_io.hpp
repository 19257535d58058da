#pragma once

#include <optional>
#include <string>

#include "jointgen/design.hpp"
#include "jointgen/optimize.hpp"
#include "jointgen/simulate.hpp"
#include "jointgen/stability.hpp"

namespace jointgen {

// Parse errors carry the JSON path of the offending value.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DesignFile {
  JointDesign design;
  std::optional<ErrorModel> errors;
};

DesignFile parse_design_file(const std::string& text);
std::string serialize_design(const JointDesign& d,
                             const ErrorModel* errors = nullptr);

std::string report_json(const InsertionReport& r);
std::string stability_json(const StabilitySummary& s);
std::string trace_json(const OptimizationTrace& t);
std::string sim_json(const SimResult& r);
std::string sweep_json(const std::vector<SweepCell>& cells);
std::string validation_json(const ValidationReport& v);

std::string read_file(const std::string& path);
// Writes via a temp file in the same directory, then renames.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace jointgen
