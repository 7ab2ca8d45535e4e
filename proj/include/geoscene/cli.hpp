#pragma once

#include <iosfwd>
#include <string>

#include "geoscene/pipeline.hpp"

namespace geoscene {

/// Offline pipeline inputs: local files instead of upstream services.
struct CliOptions {
    std::string dem_path;       // .asc or GeoTIFF
    std::string roads_path;     // Overpass JSON or GeoJSON; optional
    std::string power_path;     // optional
    std::string buildings_path; // optional
    std::string heights_path;   // GeoJSON; optional
    std::string out_path;
    PipelineOptions pipeline;
};

/// Load the input files in opts (out_path is ignored) and run the shared
/// pipeline. File problems are rethrown as ParseError prefixed with the
/// offending path; pipeline errors propagate unchanged.
FigureDoc scene_from_files(const CliOptions& opts,
                           std::vector<std::string>* warnings = nullptr);

/// Run the shared pipeline over local files and write the figure JSON to
/// out_path. Prints a one-line summary on success; on failure prints a
/// diagnostic naming the file or stage and returns nonzero.
int cli_generate(const CliOptions& opts, std::ostream& out, std::ostream& err);

/// CLI entry point (generate / serve subcommands).
int run_cli(int argc, char** argv);

} // namespace geoscene
