#pragma once

#include <string>

namespace covertsim {

// Paired-world identity. The ordinary world is the baseline network; the
// hcs world is the same network plus the hidden communication system. The
// audit compares detector behaviour between the two.
enum class WorldKind { ordinary, hcs };

const char* world_name(WorldKind w);
WorldKind world_from_name(const std::string& name);

}  // namespace covertsim
