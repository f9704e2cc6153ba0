#include "fedcedar/data_synth.hpp"

#include <cstdint>
#include <fstream>
#include <iterator>

namespace fedcedar {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::uint32_t read_be32(const std::vector<unsigned char>& bytes, std::size_t offset, const char* what) {
    if (bytes.size() < offset + 4)
        throw IdxError(IdxErrorKind::truncated, std::string(what) + ": header truncated");
    return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
           (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

std::vector<unsigned char> slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IdxError(IdxErrorKind::io, "cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

ExamplePool parse_idx(const std::vector<unsigned char>& images, const std::vector<unsigned char>& labels) {
    if (read_be32(images, 0, "images") != kImageMagic)
        throw IdxError(IdxErrorKind::bad_magic, "images: bad magic number");
    if (read_be32(labels, 0, "labels") != kLabelMagic)
        throw IdxError(IdxErrorKind::bad_magic, "labels: bad magic number");

    const std::size_t n_images = read_be32(images, 4, "images");
    const std::size_t rows = read_be32(images, 8, "images");
    const std::size_t cols = read_be32(images, 12, "images");
    const std::size_t n_labels = read_be32(labels, 4, "labels");
    if (n_images != n_labels)
        throw IdxError(IdxErrorKind::count_mismatch, std::to_string(n_images) + " images but " +
                                                         std::to_string(n_labels) + " labels");

    const std::size_t pixels = rows * cols;
    if (images.size() < 16 + n_images * pixels) throw IdxError(IdxErrorKind::truncated, "images: payload truncated");
    if (labels.size() < 8 + n_labels) throw IdxError(IdxErrorKind::truncated, "labels: payload truncated");

    ExamplePool pool(n_images);
    for (std::size_t i = 0; i < n_images; ++i) {
        Example& e = pool[i];
        e.id = i;
        e.label = labels[8 + i];
        e.features.resize(pixels);
        const unsigned char* src = images.data() + 16 + i * pixels;
        for (std::size_t p = 0; p < pixels; ++p) e.features[p] = static_cast<double>(src[p]) / 255.0;
    }
    return pool;
}

ExamplePool load_idx(const std::filesystem::path& images_path, const std::filesystem::path& labels_path) {
    return parse_idx(slurp(images_path), slurp(labels_path));
}

} // namespace fedcedar
