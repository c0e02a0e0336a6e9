#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "twistkit/loopspace.hpp"
#include "twistkit/twistcheck.hpp"

namespace twistkit {

using ordered_json = nlohmann::ordered_json;

/// Parses a spec document. Throws Error with kind SchemaError or
/// ExpressionError.
ManifoldSpec parse_spec(const nlohmann::json& doc);
/// Reads and parses a spec file. Throws Error(IoError) on unreadable or
/// non-JSON input.
ManifoldSpec load_spec(const std::filesystem::path& path);

/// Canonical serialization: increasing 1-based index keys, expressions in
/// the input grammar.
ordered_json spec_to_json(const ManifoldSpec& spec);

/// "1,2,3" for zero-based {0,1,2}.
std::string index_key(const IndexTuple& indices);

enum class OutputFormat { Text, Json, Csv };
OutputFormat parse_format(std::string_view name);

ordered_json report_to_json(const ManifoldSpec& spec, const Report& report);
std::string render_report(const ManifoldSpec& spec, const Report& report, OutputFormat format);
std::string render_structure(const ManifoldSpec& spec, const StructureFunctions& sf, OutputFormat format);
std::string render_closure(const ClosureStudy& study, OutputFormat format);
std::string render_flow(const FlowResult& result, OutputFormat format);

}  // namespace twistkit
