#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "arlab/fokker_planck.hpp"
#include "arlab/spectral_density.hpp"

namespace arlab {

/// Writes `content` to `path`, creating parent directories. Throws
/// std::runtime_error if the file cannot be written.
void write_text(const std::filesystem::path& path, const std::string& content);
void write_json(const std::filesystem::path& path, const nlohmann::json& value);
nlohmann::json read_json(const std::filesystem::path& path);

/// `t,phase_unwrapped,Z_re,Z_im,dist_to_M`
std::string trajectory_csv(const std::vector<TrajectorySample>& samples);
/// `theta,p` on `points` equispaced nodes.
std::string snapshot_csv(const SpectralDensity& state, int points = 512);

/// Run record sufficient to regenerate every output of a CLI command.
struct Manifest {
    std::string command;
    nlohmann::json params = nlohmann::json::object();
    std::vector<std::string> outputs;

    nlohmann::json to_json() const;
    static Manifest from_json(const nlohmann::json& j);
};

}  // namespace arlab
