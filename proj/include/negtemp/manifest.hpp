#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "negtemp/config.hpp"

namespace negtemp {

struct ManifestEntry {
    std::string name;
    ScenarioConfig config;
    std::size_t rows = 0;
    bool succeeded = false;
    std::string error;
};

struct RunManifest {
    std::string config_path;
    std::string output_dir;
    std::vector<ManifestEntry> scenarios;
    double wall_time_s = 0.0;
    SolverOptions solver;
    unsigned jobs = 1;
    std::string tool_version;
};

std::string manifest_json(const RunManifest& m);
void write_manifest(const RunManifest& m, const std::filesystem::path& path);

} // namespace negtemp
