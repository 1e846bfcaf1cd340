#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace hpr {

/// Planar multi-channel image with values in [0, 1];
/// pix[ch * w * h + row * w + col].
struct Image {
    std::size_t width = 0;
    std::size_t height = 0;
    std::size_t channels = 0;
    std::vector<double> pix;

    Image() = default;
    Image(std::size_t w, std::size_t h, std::size_t ch)
        : width(w), height(h), channels(ch), pix(w * h * ch, 0.0) {}

    double& at(std::size_t ch, std::size_t row, std::size_t col) {
        return pix[ch * width * height + row * width + col];
    }
    double at(std::size_t ch, std::size_t row, std::size_t col) const {
        return pix[ch * width * height + row * width + col];
    }
};

/// Reads PPM (P3/P6) and, when built with libpng, 8-bit PNG (gray/RGB/RGBA,
/// alpha dropped).  Throws std::runtime_error on unreadable input.
Image read_image(const std::string& path);
/// Writes .ppm or .png by extension (PNG only when built with libpng).
void write_image(const Image& img, const std::string& path);

/// Multispectral input: either a directory of band_0.png..band_{B-1}.png
/// (or .ppm) or a raw file with the text header `HPRMSI v1 <W> <H> <BANDS>`
/// followed by row-major little-endian float64 planes, band by band.
Image read_msi(const std::string& path);
void write_msi_raw(const Image& img, const std::string& path);

/// 10 log10(peak^2 / MSE) over all channels; peak is the maximum
/// representable value (1.0 for the normalized domain).  Returns +inf for a
/// bit-exact reconstruction.
double psnr(const Image& truth, const Image& recon, double peak = 1.0);

/// Synthetic test content: smooth per-channel gradients.
Image synthetic_gradient(std::size_t width, std::size_t height, std::size_t channels);

}  // namespace hpr
