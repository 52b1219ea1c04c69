#include "negtemp/manifest.hpp"

#include <fstream>

#include <json.hpp>

#include "negtemp/csv.hpp"

namespace negtemp {

std::string manifest_json(const RunManifest& m) {
    using nlohmann::json;
    json scenarios = json::array();
    for (const auto& e : m.scenarios) {
        const auto& c = e.config;
        json fixed = json::object();
        if (c.fixed.cooperativity) fixed["cooperativity"] = *c.fixed.cooperativity;
        if (c.fixed.coupling_g) fixed["coupling_g"] = *c.fixed.coupling_g;
        if (c.fixed.lambda) fixed["lambda"] = *c.fixed.lambda;
        if (c.fixed.gamma_B) fixed["gamma_b"] = *c.fixed.gamma_B;
        fixed["kappa"] = c.fixed.kappa;
        scenarios.push_back({
            {"name", e.name},
            {"id", c.scenario_id},
            {"rows", e.rows},
            {"succeeded", e.succeeded},
            {"error", e.error},
            {"k_list", c.k_list},
            {"n_list", c.n_list},
            {"axis", to_string(c.axis)},
            {"axis_points", c.axis_grid.size()},
            {"fixed", fixed},
            {"convention", c.convention == DissipatorConvention::doubled ? "doubled" : "standard"},
            {"truncation",
             {{"n_start", c.truncation.n_start},
              {"n_cap", c.truncation.n_cap},
              {"growth", c.truncation.growth},
              {"tol_sigma_z", c.truncation.tol_sigma_z},
              {"tail_eps", c.truncation.tail_eps}}},
        });
    }
    json j = {
        {"tool_version", m.tool_version},
        {"config_path", m.config_path},
        {"output_dir", m.output_dir},
        {"wall_time_s", m.wall_time_s},
        {"jobs", m.jobs},
        {"solver",
         {{"method", to_string(m.solver.method)},
          {"reduce_blocks", m.solver.reduce_blocks},
          {"iterative_threshold", m.solver.iterative_threshold},
          {"direct_tolerance", m.solver.direct_tolerance},
          {"iterative_tolerance", m.solver.iterative_tolerance}}},
        {"scenarios", scenarios},
    };
    return j.dump(2) + "\n";
}

void write_manifest(const RunManifest& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << manifest_json(m);
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

} // namespace negtemp
