#include "negtemp/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace negtemp {
namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

template <class Int>
Int parse_int(std::string_view s) {
    Int v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw IoError("malformed integer '" + std::string(s) + "'");
    }
    return v;
}

} // namespace

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc()) throw IoError("could not format a double");
    return std::string(buf.data(), ptr);
}

double parse_double(std::string_view s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw IoError("malformed number '" + std::string(s) + "'");
    }
    return v;
}

std::string format_csv(const std::vector<SweepRow>& rows) {
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& r : rows) {
        out += r.scenario;
        out += ',' + std::to_string(r.k);
        out += ',' + format_double(r.n_bath);
        out += ',' + to_string(r.axis);
        out += ',' + format_double(r.axis_value);
        out += ',';
        out += to_char(r.atom);
        out += ',' + format_double(r.sigma_z);
        out += ',' + format_double(r.entropy_nats);
        out += ',' + format_double(r.kT_over_omega0);
        out += ',' + format_double(r.coherence_abs);
        out += ',' + std::to_string(r.n_max_used);
        out += ',' + format_double(r.residual);
        out += '\n';
    }
    return out;
}

std::vector<SweepRow> parse_csv(std::string_view text) {
    std::vector<SweepRow> rows;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (!text.empty()) {
        const std::size_t eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        ++line_no;
        if (!header_seen) {
            if (line != kCsvHeader) throw IoError("unexpected CSV header");
            header_seen = true;
            continue;
        }
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 12) {
            throw IoError("line " + std::to_string(line_no) + ": expected 12 fields, got " +
                          std::to_string(f.size()));
        }
        SweepRow r;
        r.scenario = std::string(f[0]);
        r.k = parse_int<unsigned>(f[1]);
        r.n_bath = parse_double(f[2]);
        try {
            r.axis = sweep_axis_from_string(std::string(f[3]));
        } catch (const ConfigError& e) {
            throw IoError("line " + std::to_string(line_no) + ": " + e.what());
        }
        r.axis_value = parse_double(f[4]);
        if (f[5] == "A") {
            r.atom = AtomLabel::A;
        } else if (f[5] == "B") {
            r.atom = AtomLabel::B;
        } else {
            throw IoError("line " + std::to_string(line_no) + ": bad atom label");
        }
        r.sigma_z = parse_double(f[6]);
        r.entropy_nats = parse_double(f[7]);
        r.kT_over_omega0 = parse_double(f[8]);
        r.coherence_abs = parse_double(f[9]);
        r.n_max_used = parse_int<Index>(f[10]);
        r.residual = parse_double(f[11]);
        rows.push_back(std::move(r));
    }
    if (!header_seen) throw IoError("empty CSV");
    return rows;
}

void write_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    const std::string text = format_csv(rows);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.close();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<SweepRow> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_csv(ss.str());
}

} // namespace negtemp
