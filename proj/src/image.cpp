#include "hpr/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#ifdef HPR_HAVE_PNG
#include <png.h>
#endif

namespace hpr {

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

int ppm_next_token(std::istream& in) {
    // skips whitespace and '#' comments, returns the next integer
    std::string tok;
    char c;
    while (in.get(c)) {
        if (c == '#') {
            std::string line;
            std::getline(in, line);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        in.putback(c);
        int v;
        if (!(in >> v)) break;
        return v;
    }
    throw std::runtime_error("truncated PPM header");
}

Image read_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string magic;
    in >> magic;
    if (magic != "P6" && magic != "P3") throw std::runtime_error("unsupported PPM magic in " + path);
    const int w = ppm_next_token(in);
    const int h = ppm_next_token(in);
    const int maxval = ppm_next_token(in);
    if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535)
        throw std::runtime_error("ill-formed PPM header in " + path);
    Image img(static_cast<std::size_t>(w), static_cast<std::size_t>(h), 3);
    const double scale = 1.0 / maxval;
    if (magic == "P3") {
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c)
                for (int ch = 0; ch < 3; ++ch) {
                    int v;
                    if (!(in >> v)) throw std::runtime_error("truncated PPM data in " + path);
                    img.at(ch, r, c) = v * scale;
                }
        return img;
    }
    in.get();  // single whitespace after maxval
    const int bytes = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> row(static_cast<std::size_t>(w) * 3 * bytes);
    for (int r = 0; r < h; ++r) {
        in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size()));
        if (!in) throw std::runtime_error("truncated PPM data in " + path);
        for (int c = 0; c < w; ++c)
            for (int ch = 0; ch < 3; ++ch) {
                const std::size_t k = (static_cast<std::size_t>(c) * 3 + ch) * bytes;
                const int v = bytes == 1 ? row[k] : (row[k] << 8) | row[k + 1];
                img.at(ch, r, c) = v * scale;
            }
    }
    return img;
}

void write_ppm(const Image& img, const std::string& path) {
    if (img.channels != 3 && img.channels != 1)
        throw std::runtime_error("PPM writer expects 1 or 3 channels");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    for (std::size_t r = 0; r < img.height; ++r)
        for (std::size_t c = 0; c < img.width; ++c)
            for (std::size_t ch = 0; ch < 3; ++ch) {
                const double v = img.at(std::min(ch, img.channels - 1), r, c);
                const int byte = static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
                out.put(static_cast<char>(byte));
            }
}

#ifdef HPR_HAVE_PNG
Image read_png(const std::string& path) {
    FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp) throw std::runtime_error("cannot open " + path);
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info || setjmp(png_jmpbuf(png))) {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        std::fclose(fp);
        throw std::runtime_error("ill-formed PNG: " + path);
    }
    png_init_io(png, fp);
    png_read_info(png, info);
    png_set_expand(png);
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);
    const std::size_t w = png_get_image_width(png, info);
    const std::size_t h = png_get_image_height(png, info);
    const std::size_t ch = png_get_channels(png, info);
    std::vector<unsigned char> row(w * ch);
    Image img(w, h, ch == 1 ? 1 : 3);
    for (std::size_t r = 0; r < h; ++r) {
        png_read_row(png, row.data(), nullptr);
        for (std::size_t c = 0; c < w; ++c)
            for (std::size_t k = 0; k < img.channels; ++k)
                img.at(k, r, c) = row[c * ch + std::min(k, ch - 1)] / 255.0;
    }
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    return img;
}

void write_png(const Image& img, const std::string& path) {
    FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw std::runtime_error("cannot write " + path);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info || setjmp(png_jmpbuf(png))) {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
        std::fclose(fp);
        throw std::runtime_error("PNG write failure: " + path);
    }
    png_init_io(png, fp);
    const int color = img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
    const std::size_t out_ch = img.channels == 1 ? 1 : 3;
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height),
                 8, color, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<unsigned char> row(img.width * out_ch);
    for (std::size_t r = 0; r < img.height; ++r) {
        for (std::size_t c = 0; c < img.width; ++c)
            for (std::size_t k = 0; k < out_ch; ++k) {
                const double v = img.at(std::min(k, img.channels - 1), r, c);
                row[c * out_ch + k] =
                    static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
            }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}
#endif

}  // namespace

Image read_image(const std::string& path) {
    if (ends_with(path, ".ppm")) return read_ppm(path);
#ifdef HPR_HAVE_PNG
    if (ends_with(path, ".png")) return read_png(path);
#endif
    throw std::runtime_error("unsupported image format: " + path);
}

void write_image(const Image& img, const std::string& path) {
    if (ends_with(path, ".ppm")) return write_ppm(img, path);
#ifdef HPR_HAVE_PNG
    if (ends_with(path, ".png")) return write_png(img, path);
#endif
    throw std::runtime_error("unsupported image format: " + path);
}

Image read_msi(const std::string& path) {
    namespace fs = std::filesystem;
    if (fs::is_directory(path)) {
        std::vector<Image> bands;
        for (std::size_t b = 0;; ++b) {
            const std::string png = path + "/band_" + std::to_string(b) + ".png";
            const std::string ppm = path + "/band_" + std::to_string(b) + ".ppm";
            if (fs::exists(png))
                bands.push_back(read_image(png));
            else if (fs::exists(ppm))
                bands.push_back(read_image(ppm));
            else
                break;
        }
        if (bands.empty()) throw std::runtime_error("no band_<k> images found in " + path);
        Image img(bands[0].width, bands[0].height, bands.size());
        for (std::size_t b = 0; b < bands.size(); ++b) {
            if (bands[b].width != img.width || bands[b].height != img.height)
                throw std::runtime_error("band size mismatch in " + path);
            for (std::size_t r = 0; r < img.height; ++r)
                for (std::size_t c = 0; c < img.width; ++c) img.at(b, r, c) = bands[b].at(0, r, c);
        }
        return img;
    }

    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::getline(in, line);
    std::istringstream hdr(line);
    std::string magic, version;
    std::size_t w = 0, h = 0, bands = 0;
    hdr >> magic >> version >> w >> h >> bands;
    if (magic != "HPRMSI" || version != "v1" || w == 0 || h == 0 || bands == 0)
        throw std::runtime_error("ill-formed HPRMSI header in " + path);
    Image img(w, h, bands);
    in.read(reinterpret_cast<char*>(img.pix.data()),
            static_cast<std::streamsize>(img.pix.size() * sizeof(double)));
    if (!in) throw std::runtime_error("truncated HPRMSI payload in " + path);
    return img;
}

void write_msi_raw(const Image& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "HPRMSI v1 " << img.width << " " << img.height << " " << img.channels << "\n";
    out.write(reinterpret_cast<const char*>(img.pix.data()),
              static_cast<std::streamsize>(img.pix.size() * sizeof(double)));
}

double psnr(const Image& truth, const Image& recon, double peak) {
    if (truth.pix.size() != recon.pix.size()) throw std::invalid_argument("image size mismatch");
    double mse = 0.0;
    for (std::size_t i = 0; i < truth.pix.size(); ++i) {
        const double d = truth.pix[i] - recon.pix[i];
        mse += d * d;
    }
    mse /= static_cast<double>(truth.pix.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(peak * peak / mse);
}

Image synthetic_gradient(std::size_t width, std::size_t height, std::size_t channels) {
    Image img(width, height, channels);
    for (std::size_t ch = 0; ch < channels; ++ch)
        for (std::size_t r = 0; r < height; ++r)
            for (std::size_t c = 0; c < width; ++c) {
                const double u = static_cast<double>(c) / std::max<std::size_t>(width - 1, 1);
                const double v = static_cast<double>(r) / std::max<std::size_t>(height - 1, 1);
                const double phase = 0.25 * static_cast<double>(ch);
                img.at(ch, r, c) =
                    0.5 + 0.25 * std::sin(2.0 * 3.14159265358979323846 * (u + phase)) +
                    0.25 * v * std::cos(2.0 * 3.14159265358979323846 * (v + 0.5 * phase));
            }
    // keep strictly inside [0,1]
    for (double& v : img.pix) v = std::clamp(v, 0.0, 1.0);
    return img;
}

}  // namespace hpr
