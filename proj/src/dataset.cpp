#include "dyna/dataset.hpp"

#include <zlib.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <stdexcept>

namespace dyna::data {

namespace {

constexpr std::uint32_t kImagesMagic = 0x00000803;
constexpr std::uint32_t kLabelsMagic = 0x00000801;

// gzread is transparent for uncompressed input, so one reader covers both.
class IdxReader {
public:
    explicit IdxReader(const std::string& path) : path_(path), file_(gzopen(path.c_str(), "rb")) {
        if (file_ == nullptr) {
            throw std::runtime_error("idx: cannot open " + path);
        }
    }
    ~IdxReader() {
        if (file_ != nullptr) gzclose(file_);
    }
    IdxReader(const IdxReader&) = delete;
    IdxReader& operator=(const IdxReader&) = delete;

    void read(void* dst, std::size_t n) {
        const int got = gzread(file_, dst, static_cast<unsigned>(n));
        if (got < 0 || static_cast<std::size_t>(got) != n) {
            throw std::runtime_error("idx: truncated file " + path_);
        }
    }

    std::uint32_t read_u32_be() {
        std::uint8_t b[4];
        read(b, 4);
        return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
               (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
    }

    bool at_eof() {
        std::uint8_t probe;
        return gzread(file_, &probe, 1) == 0;
    }

private:
    std::string path_;
    gzFile file_;
};

void append_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

std::string resolve_idx(const std::string& dir, const std::string& name) {
    namespace fs = std::filesystem;
    const fs::path plain = fs::path(dir) / name;
    if (fs::exists(plain)) return plain.string();
    const fs::path gz = fs::path(dir) / (name + ".gz");
    if (fs::exists(gz)) return gz.string();
    throw std::runtime_error("mnist: missing " + name + "[.gz] in " + dir);
}

// 53-bit uniform in [0, 1).
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Hand-rolled Box-Muller keeps generated datasets identical across
// standard libraries.
double standard_normal(std::mt19937_64& rng) {
    double u1 = uniform01(rng);
    if (u1 < 1e-300) u1 = 1e-300;
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

} // namespace

Dataset load_idx(const std::string& images_path, const std::string& labels_path) {
    IdxReader images(images_path);
    const std::uint32_t img_magic = images.read_u32_be();
    if (img_magic != kImagesMagic) {
        char msg[96];
        std::snprintf(msg, sizeof(msg), "idx: bad image magic 0x%08x (want 0x%08x)", img_magic,
                      kImagesMagic);
        throw std::runtime_error(std::string(msg) + " in " + images_path);
    }
    const std::uint32_t n_images = images.read_u32_be();
    const std::uint32_t rows = images.read_u32_be();
    const std::uint32_t cols = images.read_u32_be();

    IdxReader labels(labels_path);
    const std::uint32_t lab_magic = labels.read_u32_be();
    if (lab_magic != kLabelsMagic) {
        char msg[96];
        std::snprintf(msg, sizeof(msg), "idx: bad label magic 0x%08x (want 0x%08x)", lab_magic,
                      kLabelsMagic);
        throw std::runtime_error(std::string(msg) + " in " + labels_path);
    }
    const std::uint32_t n_labels = labels.read_u32_be();
    if (n_images != n_labels) {
        throw std::runtime_error("idx: image count " + std::to_string(n_images) +
                                 " does not match label count " + std::to_string(n_labels));
    }

    Dataset ds;
    ds.img_rows = static_cast<int>(rows);
    ds.img_cols = static_cast<int>(cols);
    ds.dim = static_cast<int>(rows * cols);
    const std::size_t n = n_images;
    const std::size_t pixels = n * static_cast<std::size_t>(ds.dim);

    std::vector<std::uint8_t> raw(pixels);
    images.read(raw.data(), pixels);
    ds.images.resize(pixels);
    for (std::size_t i = 0; i < pixels; ++i) {
        ds.images[i] = static_cast<float>(raw[i]) / 255.0f;
    }
    ds.labels.resize(n);
    labels.read(ds.labels.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
        if (ds.labels[i] > 9) {
            throw std::runtime_error("idx: label " + std::to_string(int(ds.labels[i])) +
                                     " out of range at sample " + std::to_string(i));
        }
    }
    ds.train = {0, n};
    return ds;
}

Dataset load_mnist_dir(const std::string& dir) {
    Dataset train = load_idx(resolve_idx(dir, "train-images-idx3-ubyte"),
                             resolve_idx(dir, "train-labels-idx1-ubyte"));
    Dataset test = load_idx(resolve_idx(dir, "t10k-images-idx3-ubyte"),
                            resolve_idx(dir, "t10k-labels-idx1-ubyte"));
    if (train.dim != test.dim) {
        throw std::runtime_error("mnist: train/test image shapes differ");
    }
    const std::size_t n_train = train.size();
    train.images.insert(train.images.end(), test.images.begin(), test.images.end());
    train.labels.insert(train.labels.end(), test.labels.begin(), test.labels.end());
    train.train = {0, n_train};
    train.test = {n_train, n_train + test.size()};
    return train;
}

void split(Dataset& dataset, std::size_t n_val) {
    const std::size_t n_train_total = dataset.train.size() + dataset.val.size();
    const std::size_t begin = dataset.train.begin;
    if (n_val >= n_train_total) {
        throw std::invalid_argument("split: n_val " + std::to_string(n_val) +
                                    " must be smaller than the train partition " +
                                    std::to_string(n_train_total));
    }
    dataset.train = {begin, begin + n_train_total - n_val};
    dataset.val = {begin + n_train_total - n_val, begin + n_train_total};
}

Dataset synthetic_gaussian_blobs(std::uint64_t seed, int n_per_class, int n_classes, int dim) {
    if (dim < 1 || n_classes < 1 || n_classes > 10 || n_per_class < 1) {
        throw std::invalid_argument("synthetic_gaussian_blobs: need dim >= 1, "
                                    "1 <= n_classes <= 10, n_per_class >= 1");
    }
    const double sigma = 0.1;
    std::mt19937_64 rng(seed);

    Dataset ds;
    ds.dim = dim;
    ds.img_rows = dim;
    ds.img_cols = 1;
    const std::size_t n = static_cast<std::size_t>(n_per_class) * n_classes;
    ds.images.resize(n * static_cast<std::size_t>(dim));
    ds.labels.resize(n);

    for (std::size_t i = 0; i < n; ++i) {
        const int label = static_cast<int>(i % static_cast<std::size_t>(n_classes));
        ds.labels[i] = static_cast<std::uint8_t>(label);
        float* px = ds.images.data() + i * static_cast<std::size_t>(dim);
        for (int j = 0; j < dim; ++j) {
            const double mean = (j % n_classes == label) ? 0.8 : 0.2;
            double value = mean + sigma * standard_normal(rng);
            if (value < 0.0) value = 0.0;
            if (value > 1.0) value = 1.0;
            px[j] = static_cast<float>(value);
        }
    }

    const std::size_t n_test = n / 10;
    const std::size_t n_val = n / 10;
    ds.train = {0, n - n_val - n_test};
    ds.val = {n - n_val - n_test, n - n_test};
    ds.test = {n - n_test, n};
    return ds;
}

std::vector<std::uint8_t> serialize_idx_images(const Dataset& dataset, const SplitRange& range) {
    std::vector<std::uint8_t> out;
    const std::size_t n = range.size();
    out.reserve(16 + n * static_cast<std::size_t>(dataset.dim));
    append_u32_be(out, kImagesMagic);
    append_u32_be(out, static_cast<std::uint32_t>(n));
    append_u32_be(out, static_cast<std::uint32_t>(dataset.img_rows));
    append_u32_be(out, static_cast<std::uint32_t>(dataset.img_cols));
    for (std::size_t i = range.begin; i < range.end; ++i) {
        const float* px = dataset.row(i);
        for (int j = 0; j < dataset.dim; ++j) {
            out.push_back(static_cast<std::uint8_t>(std::lround(px[j] * 255.0f)));
        }
    }
    return out;
}

std::vector<std::uint8_t> serialize_idx_labels(const Dataset& dataset, const SplitRange& range) {
    std::vector<std::uint8_t> out;
    out.reserve(8 + range.size());
    append_u32_be(out, kLabelsMagic);
    append_u32_be(out, static_cast<std::uint32_t>(range.size()));
    out.insert(out.end(), dataset.labels.begin() + static_cast<std::ptrdiff_t>(range.begin),
               dataset.labels.begin() + static_cast<std::ptrdiff_t>(range.end));
    return out;
}

} // namespace dyna::data
