#pragma once

#include <string>

#include <json.hpp>

namespace joycekit {

// The sign and ordering conventions every numeric claim depends on.  The
// same block is embedded in every report so results from different runs and
// subcommands can be compared without guessing.
nlohmann::ordered_json conventions_block();

// {"subcommand": ..., "conventions": {...}} with insertion order preserved.
// No timestamps or environment data: identical inputs give identical bytes.
nlohmann::ordered_json report_skeleton(const std::string& subcommand);

// Two-space indented dump with a trailing newline.
std::string render_report(const nlohmann::ordered_json& report);

// render_report to the named file; throws Error when the file cannot be
// opened.
void write_report(const std::string& path, const nlohmann::ordered_json& report);

}  // namespace joycekit
