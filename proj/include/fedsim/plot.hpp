#pragma once

#include <filesystem>
#include <string>

#include "fedsim/experiments.hpp"

namespace fedsim {

enum class PlotFormat { kSvg, kGnuplot };

PlotFormat plot_format_from_name(const std::string& name);  // "svg"|"gnuplot"

// Turns a recipe CSV (per-seed or aggregate; the *_mean columns are picked
// up automatically) into a line chart. kSvg writes a self-contained SVG,
// kGnuplot an index-separated data block with plotting hints in comments.
// A CSV without data rows is an error and no output file is created.
void emit_plotdata(const std::filesystem::path& csv_path, Recipe kind,
                   PlotFormat format, const std::filesystem::path& out_path);

}  // namespace fedsim
