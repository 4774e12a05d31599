#include "cli_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace vide::cli {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, sep)) out.push_back(cur);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw FormatError("not a number: '" + s + "'");
    return v;
}

std::size_t parse_size(const std::string& s) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw FormatError("not a non-negative integer: '" + s + "'");
    }
    return v;
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_trajectory_csv(std::ostream& os, const TrajectoryTable& t) {
    os << "i,x";
    if (t.components == 1) {
        os << ",y";
    } else {
        for (std::size_t c = 0; c < t.components; ++c) os << ",y" << c + 1;
    }
    os << '\n';
    for (std::size_t i = 0; i < t.x.size(); ++i) {
        os << i << ',' << format_double(t.x[i]);
        for (std::size_t c = 0; c < t.components; ++c) os << ',' << format_double(t.values[i * t.components + c]);
        os << '\n';
    }
}

TrajectoryTable read_trajectory_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw FormatError("trajectory: missing header");
    strip_cr(line);
    const auto header = split(line, ',');
    if (header.size() < 3 || header[0] != "i" || header[1] != "x") {
        throw FormatError("trajectory: header must start with i,x");
    }
    TrajectoryTable t;
    t.components = header.size() - 2;
    while (std::getline(is, line)) {
        strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != header.size()) throw FormatError("trajectory: ragged row");
        if (parse_size(fields[0]) != t.x.size()) throw FormatError("trajectory: row index out of sequence");
        t.x.push_back(parse_double(fields[1]));
        for (std::size_t c = 0; c < t.components; ++c) t.values.push_back(parse_double(fields[2 + c]));
    }
    return t;
}

std::string region_comment(const RegionRaster& r) {
    std::ostringstream os;
    os << "# method=" << r.method << " z=[" << format_double(r.z_min) << ',' << format_double(r.z_max)
       << "] w=[" << format_double(r.w_min) << ',' << format_double(r.w_max) << "] grid=" << r.nz << 'x'
       << r.nw << " imax=" << r.i_max << " rows=w_max..w_min";
    return os.str();
}

void write_region_pbm(std::ostream& os, const RegionRaster& r) {
    os << "P1\n" << region_comment(r) << '\n' << r.nz << ' ' << r.nw << '\n';
    for (std::size_t row = 0; row < r.nw; ++row) {
        const std::size_t q = r.nw - 1 - row;
        for (std::size_t p = 0; p < r.nz; ++p) {
            if (p) os << ' ';
            os << (r.at(p, q).stable ? '0' : '1');
        }
        os << '\n';
    }
}

void write_region_pgm(std::ostream& os, const RegionRaster& r) {
    os << "P2\n" << region_comment(r) << '\n' << r.nz << ' ' << r.nw << "\n255\n";
    const double scale = std::log(static_cast<double>(std::max<std::size_t>(r.i_max, 2)));
    for (std::size_t row = 0; row < r.nw; ++row) {
        const std::size_t q = r.nw - 1 - row;
        for (std::size_t p = 0; p < r.nz; ++p) {
            const auto& cell = r.at(p, q);
            int level = 255;
            if (!cell.stable) {
                const double frac = std::log(static_cast<double>(std::max<std::size_t>(cell.first_exceed_index, 1))) / scale;
                level = static_cast<int>(std::lround(200.0 * std::clamp(frac, 0.0, 1.0)));
            }
            if (p) os << ' ';
            os << level;
        }
        os << '\n';
    }
}

void write_region_csv(std::ostream& os, const RegionRaster& r) {
    os << "z,w,stable,first_exceed_index\n";
    for (std::size_t q = 0; q < r.nw; ++q) {
        for (std::size_t p = 0; p < r.nz; ++p) {
            const auto& cell = r.at(p, q);
            os << format_double(cell.z) << ',' << format_double(cell.w) << ',' << (cell.stable ? 1 : 0) << ','
               << cell.first_exceed_index << '\n';
        }
    }
}

PbmImage read_pbm(std::istream& is) {
    PbmImage img;
    std::string magic;
    is >> magic;
    if (magic != "P1") throw FormatError("pbm: expected P1");
    is >> std::ws;
    while (is.peek() == '#') {
        std::string line;
        std::getline(is, line);
        if (img.comment.empty()) img.comment = line;
        is >> std::ws;
    }
    if (!(is >> img.width >> img.height)) throw FormatError("pbm: bad dimensions");
    img.bits.reserve(img.width * img.height);
    int bit = 0;
    while (img.bits.size() < img.width * img.height && (is >> bit)) {
        if (bit != 0 && bit != 1) throw FormatError("pbm: pixel is not 0/1");
        img.bits.push_back(bit);
    }
    if (img.bits.size() != img.width * img.height) throw FormatError("pbm: truncated raster");
    return img;
}

void write_report_csv(std::ostream& os, const std::vector<ReportRow>& rows) {
    os << "example,paper_value,computed_value,ratio,note\n";
    for (const auto& row : rows) {
        os << row.example << ',' << format_double(row.paper_value) << ',';
        if (row.computed_value) {
            os << format_double(*row.computed_value) << ',' << format_double(*row.computed_value / row.paper_value);
        } else {
            os << "NA,NA";
        }
        std::string note = row.note;
        std::replace(note.begin(), note.end(), ',', ';');
        std::replace(note.begin(), note.end(), '\n', ' ');
        os << ',' << note << '\n';
    }
}

std::map<std::string, RegistryRow> read_registry_csv(std::istream& is) {
    std::map<std::string, RegistryRow> out;
    std::string line;
    if (!std::getline(is, line)) return out;
    strip_cr(line);
    if (line != "name,lambda,gamma,x0,x_end") {
        throw FormatError("registry: header must be name,lambda,gamma,x0,x_end");
    }
    while (std::getline(is, line)) {
        strip_cr(line);
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 5) throw FormatError("registry: expected 5 fields in '" + line + "'");
        out[f[0]] = {parse_double(f[1]), parse_double(f[2]), parse_double(f[3]), parse_double(f[4])};
    }
    return out;
}

std::pair<std::size_t, std::size_t> parse_grid(const std::string& s) {
    const auto x = s.find('x');
    if (x == std::string::npos) throw FormatError("grid must look like NZxNW");
    return {parse_size(s.substr(0, x)), parse_size(s.substr(x + 1))};
}

}  // namespace vide::cli
