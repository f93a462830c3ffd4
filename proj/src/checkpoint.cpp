#include "dyna/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace dyna {

namespace {

constexpr char kMagic[8] = {'D', 'Y', 'N', 'A', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "checkpoint writer assumes a little-endian host");

template <typename T>
void write_raw(std::ostream& out, T value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_raw(std::istream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) {
        throw std::runtime_error("checkpoint: truncated stream");
    }
    return value;
}

void write_f32_array(std::ostream& out, const std::vector<double>& values) {
    write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(values.size()));
    for (double v : values) {
        write_raw<float>(out, static_cast<float>(v));
    }
}

std::vector<double> read_f32_array(std::istream& in) {
    const auto n = read_raw<std::uint32_t>(in);
    std::vector<double> values(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        values[i] = static_cast<double>(read_raw<float>(in));
    }
    return values;
}

} // namespace

void save_checkpoint(std::ostream& out, const Checkpoint& ckpt) {
    out.write(kMagic, sizeof(kMagic));
    write_raw(out, kVersion);
    write_raw(out, ckpt.config.beta);
    write_raw(out, ckpt.config.gamma);
    write_raw(out, ckpt.config.omega_eps);

    const auto& sched = ckpt.config.damping;
    write_raw<std::uint8_t>(out, sched.kind() == DampingSchedule::Kind::Constant ? 0 : 1);
    write_raw(out, sched.zeta_start());
    write_raw(out, sched.zeta_end());
    write_raw<std::uint64_t>(out, static_cast<std::uint64_t>(sched.ramp_steps()));

    write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(ckpt.groups.size()));
    for (const ParamGroup& g : ckpt.groups) {
        write_raw<std::uint64_t>(out, static_cast<std::uint64_t>(g.step_count));
        write_raw(out, g.total_weight);
        write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(g.n_inputs));
        write_f32_array(out, g.grad_ema);
        write_f32_array(out, g.velocity);
        write_f32_array(out, g.params);
    }
    if (!out) {
        throw std::runtime_error("checkpoint: write failed");
    }
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("checkpoint: cannot open " + path + " for writing");
    }
    save_checkpoint(out, ckpt);
}

Checkpoint load_checkpoint(std::istream& in) {
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw std::runtime_error("checkpoint: bad magic");
    }
    const auto version = read_raw<std::uint32_t>(in);
    if (version != kVersion) {
        throw std::runtime_error("checkpoint: unsupported format version " +
                                 std::to_string(version));
    }

    Checkpoint ckpt;
    ckpt.config.beta = read_raw<double>(in);
    ckpt.config.gamma = read_raw<double>(in);
    ckpt.config.omega_eps = read_raw<double>(in);

    const auto sched_tag = read_raw<std::uint8_t>(in);
    const double zeta_start = read_raw<double>(in);
    const double zeta_end = read_raw<double>(in);
    const auto ramp_steps = static_cast<std::int64_t>(read_raw<std::uint64_t>(in));
    if (sched_tag == 0) {
        ckpt.config.damping = DampingSchedule::constant(zeta_start);
    } else if (sched_tag == 1) {
        ckpt.config.damping = DampingSchedule::quadratic_ramp(zeta_start, zeta_end, ramp_steps);
    } else {
        throw std::runtime_error("checkpoint: unknown schedule tag");
    }

    const auto n_groups = read_raw<std::uint32_t>(in);
    ckpt.groups.reserve(n_groups);
    for (std::uint32_t i = 0; i < n_groups; ++i) {
        ParamGroup g;
        g.step_count = static_cast<std::int64_t>(read_raw<std::uint64_t>(in));
        g.total_weight = read_raw<double>(in);
        g.n_inputs = static_cast<int>(read_raw<std::uint32_t>(in));
        g.grad_ema = read_f32_array(in);
        g.velocity = read_f32_array(in);
        g.params = read_f32_array(in);
        if (g.grad_ema.size() != g.params.size() || g.velocity.size() != g.params.size()) {
            throw std::runtime_error("checkpoint: group vector lengths disagree");
        }
        ckpt.groups.push_back(std::move(g));
    }
    return ckpt;
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("checkpoint: cannot open " + path);
    }
    return load_checkpoint(in);
}

} // namespace dyna
