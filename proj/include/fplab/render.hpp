#pragma once

// Markdown + SVG summary of one or more experiment directories.

#include <filesystem>
#include <string>
#include <vector>

namespace fplab {

struct RenderResult {
  std::filesystem::path markdown;
  std::vector<std::filesystem::path> figures;
  /// Experiment directories without a readable manifest, and files a manifest
  /// references that are absent or altered.
  std::vector<std::string> missing;
  /// Rows of the pass/fail matrix (one per theorem id present).
  int matrix_rows = 0;
};

/// `dir` is an experiment directory (holding manifest.json) or a directory of
/// them. Output goes to `out_dir`, by default dir/report.
RenderResult render_report(const std::filesystem::path& dir, const std::filesystem::path& out_dir = {});

}  // namespace fplab
