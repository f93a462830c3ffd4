#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dyna::data {

struct SplitRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const { return end - begin; }
    bool empty() const { return begin == end; }
};

// Flat image/label store with disjoint train/val/test index ranges.
// Pixels are normalized to [0, 1]; labels lie in 0..n_classes-1.
struct Dataset {
    int dim = 0;       // features per sample
    int img_rows = 0;  // source raster shape, kept for re-serialization
    int img_cols = 0;
    std::vector<float> images; // size() == labels.size() * dim, row-major
    std::vector<std::uint8_t> labels;
    SplitRange train;
    SplitRange val;
    SplitRange test;

    std::size_t size() const { return labels.size(); }
    const float* row(std::size_t i) const { return images.data() + i * static_cast<std::size_t>(dim); }
};

// Loads one IDX image/label pair (plain or gzipped) into a dataset whose
// train range covers every sample. Distinct errors for bad magic,
// truncation, and image/label count mismatch.
Dataset load_idx(const std::string& images_path, const std::string& labels_path);

// Loads the four standard MNIST files from a directory (gzipped or not):
// train partition first, test partition appended. Validation is empty
// until split() is applied.
Dataset load_mnist_dir(const std::string& dir);

// Carves the last n_val samples of the train range into the validation
// range. Deterministic; no shuffling happens here.
void split(Dataset& dataset, std::size_t n_val);

// Seeded class-separated Gaussian clusters clipped to [0, 1], labels
// interleaved so every contiguous range is class-balanced. Ranges are
// assigned 80/10/10.
Dataset synthetic_gaussian_blobs(std::uint64_t seed, int n_per_class, int n_classes, int dim);

// Exact IDX bytes for a sample range (pixels denormalized back to bytes).
std::vector<std::uint8_t> serialize_idx_images(const Dataset& dataset, const SplitRange& range);
std::vector<std::uint8_t> serialize_idx_labels(const Dataset& dataset, const SplitRange& range);

} // namespace dyna::data
