#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rotostar/stellar_model.hpp"

namespace rotostar {

inline constexpr int kModelFormatVersion = 1;

// Writes <dir>/model.csv: a "# {json}" metadata line, a column header, then one row per (r, zeta) node.
void save_model(const StellarModel& model, const std::string& dir);
// Rebuilds the model from the stored parameters and restores the tables verbatim.
StellarModel load_model(const std::string& dir);

// Largest absolute difference over the tabulated fields; infinity when the grids differ.
double max_field_discrepancy(const StellarModel& a, const StellarModel& b);

struct CsvTable {
    std::string meta;  // text after "# " on the first line, empty if absent
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    int column(const std::string& name) const;
};
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows, const std::string& meta = "");
CsvTable read_csv(const std::string& path);

std::string sha256_file(const std::string& path);

struct ManifestEntry {
    std::string path;  // relative to the artifact directory
    std::string sha256;
    std::uintmax_t bytes = 0;
};
// Lists every regular file under dir except the manifest itself.
std::vector<ManifestEntry> write_manifest(const std::string& dir);
std::vector<ManifestEntry> read_manifest(const std::string& dir);

struct ReportOutput {
    std::vector<std::string> lines;  // text summary
    std::vector<std::string> files;  // files written
};
// Reads summary.json and the plot CSVs in dir; writes report.txt and, when svg is set, one SVG per series.
ReportOutput emit_report(const std::string& dir, bool svg = true);

// Scatter or line chart of y columns against x.
void write_svg_plot(const std::string& path, const std::string& title, const std::vector<double>& x,
                    const std::vector<std::vector<double>>& ys, const std::vector<std::string>& labels,
                    bool scatter);

}  // namespace rotostar
