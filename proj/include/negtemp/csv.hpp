#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "negtemp/sweeps.hpp"

namespace negtemp {

inline constexpr std::string_view kCsvHeader =
    "scenario,k,n_bath,axis,axis_value,atom,sigma_z,entropy_nats,kT_over_omega0,coherence_abs,"
    "n_max_used,residual";

/// Shortest decimal that round-trips; infinities as `inf` / `-inf`.
std::string format_double(double v);
double parse_double(std::string_view s);

std::string format_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_csv(std::string_view text);

/// Writes UTF-8 with LF line endings. Throws IoError on failure.
void write_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);
std::vector<SweepRow> read_csv(const std::filesystem::path& path);

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace negtemp
