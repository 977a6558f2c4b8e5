#include "arlab/io.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace arlab {

void write_text(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw std::runtime_error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os << content;
    os.flush();
    if (!os) throw std::runtime_error("failed writing " + path.string());
}

void write_json(const std::filesystem::path& path, const nlohmann::json& value) {
    write_text(path, value.dump(2) + "\n");
}

nlohmann::json read_json(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    try {
        return nlohmann::json::parse(is);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("invalid JSON in " + path.string() + ": " + e.what());
    }
}

std::string trajectory_csv(const std::vector<TrajectorySample>& samples) {
    std::ostringstream os;
    os.precision(17);
    os << "t,phase_unwrapped,Z_re,Z_im,dist_to_M\n";
    for (const auto& s : samples) {
        os << s.t << ',' << s.phase_unwrapped << ',' << s.Z.real() << ',' << s.Z.imag() << ',';
        if (std::isnan(s.dist_to_M)) {
            os << "nan";
        } else {
            os << s.dist_to_M;
        }
        os << '\n';
    }
    return os.str();
}

std::string snapshot_csv(const SpectralDensity& state, int points) {
    const std::vector<double> values = state.sample(points);
    std::ostringstream os;
    os.precision(17);
    os << "theta,p\n";
    for (int i = 0; i < points; ++i) {
        os << 2.0 * std::numbers::pi * i / points << ',' << values[static_cast<std::size_t>(i)] << '\n';
    }
    return os.str();
}

nlohmann::json Manifest::to_json() const {
    return {{"command", command}, {"params", params}, {"outputs", outputs}};
}

Manifest Manifest::from_json(const nlohmann::json& j) {
    Manifest m;
    m.command = j.at("command").get<std::string>();
    m.params = j.value("params", nlohmann::json::object());
    m.outputs = j.value("outputs", std::vector<std::string>{});
    return m;
}

}  // namespace arlab
