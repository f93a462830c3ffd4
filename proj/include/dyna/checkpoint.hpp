#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dyna/optimizer.hpp"

namespace dyna {

// Optimizer snapshot: shared hyper-parameters plus every parameter group.
struct Checkpoint {
    DynaConfig config;
    std::vector<ParamGroup> groups;
};

// Binary checkpoint layout (all little-endian): magic "DYNACKPT", u32
// format version, f64 beta/gamma/omega_eps, schedule descriptor, u32 group
// count, then per group: u64 step count, f64 total weight, u32 fan-in, and
// grad_ema/velocity/params as u32-length-prefixed f32 arrays. State vectors
// are rounded to 32-bit on save; the round-trip is lossless at that
// precision.
void save_checkpoint(std::ostream& out, const Checkpoint& ckpt);
void save_checkpoint(const std::string& path, const Checkpoint& ckpt);

Checkpoint load_checkpoint(std::istream& in);
Checkpoint load_checkpoint(const std::string& path);

} // namespace dyna
