#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "adpipe/prompts.hpp"
#include "adpipe/types.hpp"

namespace testsupport {

inline const adpipe::PromptLibrary& prompts() {
    static const adpipe::PromptLibrary lib =
        adpipe::PromptLibrary::load_dir(ADPIPE_TEMPLATE_DIR);
    return lib;
}

inline std::filesystem::path template_dir() { return ADPIPE_TEMPLATE_DIR; }

/// Fresh directory under the system temp root, unique per call.
inline std::filesystem::path make_temp_dir(const std::string& tag) {
    static std::mt19937_64 rng(std::random_device{}());
    const auto base = std::filesystem::temp_directory_path();
    std::filesystem::path dir;
    do {
        std::ostringstream name;
        name << "adpipe_" << tag << "_" << std::hex << rng();
        dir = base / name.str();
    } while (std::filesystem::exists(dir));
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline adpipe::SceneImage random_scene(std::mt19937& rng, int width, int height) {
    adpipe::SceneImage img = adpipe::SceneImage::create(width, height);
    std::uniform_int_distribution<int> byte(0, 255);
    for (auto& p : img.pixels) {
        p = static_cast<std::uint8_t>(byte(rng));
    }
    return img;
}

}  // namespace testsupport
