// Serialization helpers for the command-line front end.
#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vide::cli {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest round-trip is not required; 17 significant digits always is.
std::string format_double(double v);

struct TrajectoryTable {
    std::size_t components = 1;
    std::vector<double> x;
    std::vector<double> values;  // row-major [x.size() x components]
};

void write_trajectory_csv(std::ostream& os, const TrajectoryTable& t);
TrajectoryTable read_trajectory_csv(std::istream& is);

struct RegionCell {
    double z = 0.0;
    double w = 0.0;
    bool stable = true;
    std::size_t first_exceed_index = 0;
};

/// Cells indexed [q * nz + p]; p runs along z, q along w.
struct RegionRaster {
    std::size_t nz = 0;
    std::size_t nw = 0;
    std::size_t i_max = 0;
    double z_min = 0.0, z_max = 0.0, w_min = 0.0, w_max = 0.0;
    std::string method;
    std::vector<RegionCell> cells;

    [[nodiscard]] const RegionCell& at(std::size_t p, std::size_t q) const { return cells[q * nz + p]; }
};

std::string region_comment(const RegionRaster& r);
/// Rows run from w_max (top) down to w_min; 1 marks an unstable cell.
void write_region_pbm(std::ostream& os, const RegionRaster& r);
/// Stable cells are 255; unstable cells darken the earlier they leave the bound.
void write_region_pgm(std::ostream& os, const RegionRaster& r);
void write_region_csv(std::ostream& os, const RegionRaster& r);

struct PbmImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::string comment;
    std::vector<int> bits;
};
PbmImage read_pbm(std::istream& is);

struct ReportRow {
    std::string example;
    double paper_value = 0.0;
    std::optional<double> computed_value;
    std::string note;
};
void write_report_csv(std::ostream& os, const std::vector<ReportRow>& rows);

struct RegistryRow {
    double lambda = 0.0;
    double gamma = 0.0;
    double x0 = 0.0;
    double x_end = 10.0;
};
/// Header "name,lambda,gamma,x0,x_end". An empty stream gives an empty registry.
std::map<std::string, RegistryRow> read_registry_csv(std::istream& is);

/// Parses "NZxNW".
std::pair<std::size_t, std::size_t> parse_grid(const std::string& s);

}  // namespace vide::cli
