// Writes the procedural stand-in clips as raw I420 files.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "ltevid/errors.hpp"
#include "ltevid/video/synthetic.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Generate synthetic CIF test sequences (akiyo, harbor, rhino stand-ins)"};
    std::string dir = "videos";
    std::size_t width = 352, height = 288, frames = 10;
    std::uint64_t seed = 1;
    app.add_option("--dir", dir, "output directory");
    app.add_option("--width", width);
    app.add_option("--height", height);
    app.add_option("--frames", frames);
    app.add_option("--seed", seed);
    CLI11_PARSE(app, argc, argv);

    try {
        std::filesystem::create_directories(dir);
        for (const auto& scene : ltevid::video::synthetic_scenes()) {
            const auto seq = ltevid::video::synthesize({scene, width, height, frames, seed});
            const auto path = std::filesystem::path(dir) /
                              (scene + "_" + std::to_string(width) + "x" + std::to_string(height) + ".yuv");
            ltevid::video::write_yuv_file(path, seq);
            std::cout << path.string() << '\n';
        }
    } catch (const ltevid::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
