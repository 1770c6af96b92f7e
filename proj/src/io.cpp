#include "qrm/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qrm::io {

namespace {

[[noreturn]] void fail(const std::string& origin, int line, const std::string& message) {
    throw DataError(origin + ":" + std::to_string(line) + ": " + message);
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary); // fixed newlines on every platform
    if (!out) throw DataError("cannot open for writing: " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open for reading: " + path.string());
    return in;
}

// "key=value" tokens of a '#' header line into (key, value) pairs
std::vector<std::pair<std::string, std::string>> header_tokens(const std::string& line) {
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream words(line);
    std::string word;
    while (words >> word) {
        std::size_t eq = word.find('=');
        if (eq != std::string::npos) out.emplace_back(word.substr(0, eq), word.substr(eq + 1));
    }
    return out;
}

std::string grid_header(const SpaceTimeGrid& g) {
    std::ostringstream out;
    out << "# grid a=" << format_double(g.a) << " T=" << format_double(g.T)
        << " x1_min=" << format_double(g.x1_min) << " x1_max=" << format_double(g.x1_max)
        << " x2_min=" << format_double(g.x2_min) << " x2_max=" << format_double(g.x2_max)
        << " h_x1=" << format_double(g.h_x1) << " h_x2=" << format_double(g.h_x2)
        << " h_t=" << format_double(g.h_t) << " n_x=" << g.n_x << " n_y=" << g.n_y
        << " n_t=" << g.n_t;
    return out.str();
}

SpaceTimeGrid parse_grid_header(const std::string& line, const std::string& origin, int lineno) {
    double a = 1.0, T = 0.0, x1_min = 0.0, x1_max = 0.0, x2_min = 0.0, x2_max = 0.0;
    double h_x1 = 0.0, h_x2 = 0.0, h_t = 0.0;
    long n_x = -1, n_y = -1, n_t = -1;
    for (const auto& [key, value] : header_tokens(line)) {
        const std::string where = origin + ":" + std::to_string(lineno);
        if (key == "a") a = parse_double(value, where);
        else if (key == "T") T = parse_double(value, where);
        else if (key == "x1_min") x1_min = parse_double(value, where);
        else if (key == "x1_max") x1_max = parse_double(value, where);
        else if (key == "x2_min") x2_min = parse_double(value, where);
        else if (key == "x2_max") x2_max = parse_double(value, where);
        else if (key == "h_x1") h_x1 = parse_double(value, where);
        else if (key == "h_x2") h_x2 = parse_double(value, where);
        else if (key == "h_t") h_t = parse_double(value, where);
        else if (key == "n_x") n_x = std::stol(value);
        else if (key == "n_y") n_y = std::stol(value);
        else if (key == "n_t") n_t = std::stol(value);
    }
    SpaceTimeGrid g;
    try {
        g = make_grid(Extent{x1_min, x1_max, x2_min, x2_max, T}, Steps{h_x1, h_x2, h_t}, a);
    } catch (const NonCommensurateError& e) {
        fail(origin, lineno, std::string("bad grid header: ") + e.what());
    }
    if (g.n_x != n_x || g.n_y != n_y || g.n_t != n_t) {
        fail(origin, lineno, "grid header counts do not match extents and steps");
    }
    return g;
}

std::vector<double> parse_csv_row(const std::string& line, std::size_t expected,
                                  const std::string& origin, int lineno) {
    std::vector<std::string> cells = split(line, ',');
    if (cells.size() != expected) {
        fail(origin, lineno, "expected " + std::to_string(expected) + " values, got " +
                                 std::to_string(cells.size()));
    }
    std::vector<double> out(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        out[i] = parse_double(trim(cells[i]), origin + ":" + std::to_string(lineno));
    }
    return out;
}

void write_csv_row(std::ofstream& out, const double* row, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
        if (i) out << ',';
        out << format_double(row[i]);
    }
    out << '\n';
}

} // namespace

std::string format_double(double x) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& token, const std::string& where) {
    double value = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc() || res.ptr != end) {
        throw DataError(where + ": not a number: '" + token + "'");
    }
    return value;
}

void write_spatial_field(const std::filesystem::path& path, const SpatialField& field,
                         const SpaceTimeGrid& grid) {
    if (!field.matches(grid)) throw GridMismatchError("field shape does not match grid");
    std::ofstream out = open_out(path);
    out << "# qrm-field v1\n" << grid_header(grid) << "\n";
    out << "# rows=" << field.rows() << " cols=" << field.cols() << "\n";
    for (int m = 0; m < field.rows(); ++m) {
        write_csv_row(out, &field.values()[static_cast<std::size_t>(m) * field.cols()],
                      field.cols());
    }
}

std::pair<SpatialField, SpaceTimeGrid> read_spatial_field(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    const std::string origin = path.filename().string();
    std::string line;
    int lineno = 0;

    if (!std::getline(in, line) || trim(line) != "# qrm-field v1") {
        fail(origin, 1, "not a qrm-field file");
    }
    ++lineno;
    if (!std::getline(in, line)) fail(origin, 2, "missing grid header");
    ++lineno;
    SpaceTimeGrid grid = parse_grid_header(line, origin, lineno);
    if (!std::getline(in, line)) fail(origin, 3, "missing shape header");
    ++lineno;

    SpatialField field(grid);
    for (int m = 0; m < field.rows(); ++m) {
        if (!std::getline(in, line)) fail(origin, lineno + 1, "unexpected end of file");
        ++lineno;
        std::vector<double> row = parse_csv_row(line, field.cols(), origin, lineno);
        for (int n = 0; n < field.cols(); ++n) field(m, n) = row[n];
    }
    return {std::move(field), grid};
}

void write_cauchy(const std::filesystem::path& path, const CauchyData& data) {
    std::ofstream out = open_out(path);
    const SpaceTimeGrid& g = data.grid();
    out << "# qrm-cauchy v1\n" << grid_header(g) << "\n";
    for (Segment s : kSegments) {
        int nodes = data.nodes(s);
        for (const char* func : {"f", "g"}) {
            out << "# segment=" << segment_name(s) << " func=" << func
                << " levels=" << g.levels() << " nodes=" << nodes << "\n";
            const std::vector<double>& values =
                func[0] == 'f' ? data.seg(s).f : data.seg(s).g;
            for (int k = 0; k <= g.n_t; ++k) {
                write_csv_row(out, &values[static_cast<std::size_t>(k) * nodes], nodes);
            }
        }
    }
}

CauchyData read_cauchy(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    const std::string origin = path.filename().string();
    std::string line;
    int lineno = 0;

    if (!std::getline(in, line) || trim(line) != "# qrm-cauchy v1") {
        fail(origin, 1, "not a qrm-cauchy file");
    }
    ++lineno;
    if (!std::getline(in, line)) fail(origin, 2, "missing grid header");
    ++lineno;
    SpaceTimeGrid grid = parse_grid_header(line, origin, lineno);
    CauchyData data(grid);

    for (Segment s : kSegments) {
        int nodes = data.nodes(s);
        for (const char* func : {"f", "g"}) {
            if (!std::getline(in, line)) fail(origin, lineno + 1, "missing segment header");
            ++lineno;
            bool seg_ok = false, func_ok = false;
            for (const auto& [key, value] : header_tokens(line)) {
                if (key == "segment" && value == segment_name(s)) seg_ok = true;
                if (key == "func" && value == func) func_ok = true;
            }
            if (!seg_ok || !func_ok) {
                fail(origin, lineno, "expected segment=" + segment_name(s) +
                                         " func=" + func + " header");
            }
            std::vector<double>& values = func[0] == 'f' ? data.seg(s).f : data.seg(s).g;
            for (int k = 0; k <= grid.n_t; ++k) {
                if (!std::getline(in, line)) fail(origin, lineno + 1, "unexpected end of file");
                ++lineno;
                std::vector<double> row = parse_csv_row(line, nodes, origin, lineno);
                std::copy(row.begin(), row.end(),
                          values.begin() + static_cast<std::size_t>(k) * nodes);
            }
        }
    }
    return data;
}

void write_history_csv(const std::filesystem::path& path, const ConvergenceHistory& history) {
    std::ofstream out = open_out(path);
    out << "iter,J,grad_norm_sq,alpha\n";
    for (const IterationRecord& r : history.entries) {
        out << r.iter << ',' << format_double(r.j_value) << ','
            << format_double(r.grad_norm_sq) << ',' << format_double(r.alpha) << '\n';
    }
}

ConvergenceHistory read_history_csv(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    const std::string origin = path.filename().string();
    std::string line;
    if (!std::getline(in, line) || trim(line) != "iter,J,grad_norm_sq,alpha") {
        fail(origin, 1, "not a history csv");
    }
    ConvergenceHistory history;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::vector<std::string> cells = split(line, ',');
        if (cells.size() != 4) fail(origin, lineno, "expected 4 columns");
        const std::string where = origin + ":" + std::to_string(lineno);
        IterationRecord r;
        r.iter = static_cast<int>(std::stol(cells[0]));
        r.j_value = parse_double(trim(cells[1]), where);
        r.grad_norm_sq = parse_double(trim(cells[2]), where);
        r.alpha = parse_double(trim(cells[3]), where);
        history.entries.push_back(r);
    }
    return history;
}

bool ConfigFile::has(const std::string& key) const {
    for (const ConfigEntry& e : entries) {
        if (e.key == key) return true;
    }
    return false;
}

std::string ConfigFile::get(const std::string& key, const std::string& fallback) const {
    std::string value = fallback;
    for (const ConfigEntry& e : entries) {
        if (e.key == key) value = e.value;
    }
    return value;
}

std::vector<std::string> ConfigFile::get_all(const std::string& key) const {
    std::vector<std::string> out;
    for (const ConfigEntry& e : entries) {
        if (e.key == key) out.push_back(e.value);
    }
    return out;
}

ConfigFile parse_config_text(const std::string& text, const std::string& origin) {
    ConfigFile cfg;
    cfg.origin = origin;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        std::size_t eq = s.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected 'key = value', got '" + s + "'");
        }
        ConfigEntry e;
        e.key = trim(s.substr(0, eq));
        e.value = trim(s.substr(eq + 1));
        e.line = lineno;
        if (e.key.empty()) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        }
        cfg.entries.push_back(std::move(e));
    }
    return cfg;
}

ConfigFile parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path.filename().string());
}

void write_summary(const std::filesystem::path& path,
                   const std::vector<std::pair<std::string, std::string>>& items) {
    std::ofstream out = open_out(path);
    for (const auto& [key, value] : items) out << key << " = " << value << '\n';
}

std::uint64_t checksum_file(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char buf[65536];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 0x100000001b3ULL;
        }
        if (got < static_cast<std::streamsize>(sizeof(buf))) break;
    }
    return hash;
}

namespace {

std::vector<std::string> manifest_candidates(const std::filesystem::path& dir) {
    std::vector<std::string> names;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string name = entry.path().filename().string();
        if (name == "manifest.txt") continue;
        names.push_back(name);
    }
    std::sort(names.begin(), names.end());
    return names;
}

} // namespace

void write_manifest(const std::filesystem::path& dir) {
    std::ofstream out = open_out(dir / "manifest.txt");
    char hex[17];
    for (const std::string& name : manifest_candidates(dir)) {
        std::uint64_t sum = checksum_file(dir / name);
        std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(sum));
        out << hex << "  " << name << '\n';
    }
}

std::vector<std::string> verify_manifest(const std::filesystem::path& dir) {
    std::ifstream in = open_in(dir / "manifest.txt");
    std::vector<std::string> bad;
    std::string line;
    while (std::getline(in, line)) {
        std::string s = trim(line);
        if (s.empty()) continue;
        std::size_t sep = s.find("  ");
        if (sep == std::string::npos || sep != 16) {
            bad.push_back("malformed manifest line: " + s);
            continue;
        }
        std::string name = s.substr(sep + 2);
        std::uint64_t expected = std::stoull(s.substr(0, sep), nullptr, 16);
        std::filesystem::path file = dir / name;
        if (!std::filesystem::exists(file)) {
            bad.push_back(name + " (missing)");
        } else if (checksum_file(file) != expected) {
            bad.push_back(name + " (checksum mismatch)");
        }
    }
    return bad;
}

} // namespace qrm::io
