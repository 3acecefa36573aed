#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ltevid/video/yuv.hpp"

namespace ltevid::video {

/// Procedural stand-ins for the usual CIF test clips: "akiyo" (static studio
/// shot, little motion), "harbor" (fine detail, slow pan) and "rhino" (textured
/// ground, moving subject). Output depends only on the spec.
struct SyntheticSpec {
    std::string scene = "akiyo";
    std::size_t width = 352;
    std::size_t height = 288;
    std::size_t frames = 10;
    std::uint64_t seed = 1;
};

const std::vector<std::string>& synthetic_scenes();

/// ContractError for unknown scenes or bad dimensions.
VideoSequence synthesize(const SyntheticSpec& spec);

}  // namespace ltevid::video
