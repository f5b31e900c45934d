#include "cfsep/image_io.hpp"

#include "cfsep/error.hpp"

#include <png.h>
#include <jpeglib.h>

#include <array>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <memory>

namespace cfsep {

namespace {

using FilePtr = std::unique_ptr<std::FILE, int (*)(std::FILE*)>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode), &std::fclose);
    if (!f) {
        if (mode[0] == 'r') {
            throw MissingAsset("cannot open image " + path.string());
        }
        throw Error("cannot write " + path.string());
    }
    return f;
}

enum class Format { Png, Jpeg, Unknown };

Format sniff(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw MissingAsset("cannot open image " + path.string());
    }
    std::array<unsigned char, 8> sig{};
    in.read(reinterpret_cast<char*>(sig.data()), sig.size());
    if (in.gcount() >= 8 && png_sig_cmp(sig.data(), 0, 8) == 0) {
        return Format::Png;
    }
    if (in.gcount() >= 3 && sig[0] == 0xFF && sig[1] == 0xD8 && sig[2] == 0xFF) {
        return Format::Jpeg;
    }
    return Format::Unknown;
}

Rgb8Image read_png(const std::filesystem::path& path) {
    FilePtr f = open_file(path, "rb");
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw InvalidImage("libpng initialisation failed");
    }
    Rgb8Image out;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw InvalidImage("corrupt PNG " + path.string());
    }
    png_init_io(png, f.get());
    png_read_info(png, info);

    const png_byte color = png_get_color_type(png, info);
    if (png_get_bit_depth(png, info) == 16) {
        png_set_strip_16(png);
    }
    if (color == PNG_COLOR_TYPE_PALETTE) {
        png_set_palette_to_rgb(png);
    }
    if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8) {
        png_set_expand_gray_1_2_4_to_8(png);
    }
    if (png_get_valid(png, info, PNG_INFO_tRNS)) {
        png_set_tRNS_to_alpha(png);
    }
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    out.width = static_cast<int>(png_get_image_width(png, info));
    out.height = static_cast<int>(png_get_image_height(png, info));
    out.channels = png_get_channels(png, info);
    out.data.resize(static_cast<std::size_t>(out.width) * out.height * out.channels);
    rows.resize(out.height);
    for (int y = 0; y < out.height; ++y) {
        rows[y] = out.data.data() + static_cast<std::size_t>(y) * out.width * out.channels;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    if (out.channels != 1 && out.channels != 3) {
        throw InvalidImage("unsupported PNG channel layout in " + path.string());
    }
    return out;
}

struct JpegErrorManager {
    jpeg_error_mgr base;
    std::jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
    std::longjmp(err->jump, 1);
}

Rgb8Image read_jpeg(const std::filesystem::path& path) {
    FilePtr f = open_file(path, "rb");
    jpeg_decompress_struct cinfo{};
    JpegErrorManager err{};
    cinfo.err = jpeg_std_error(&err.base);
    err.base.error_exit = jpeg_error_exit;
    Rgb8Image out;
    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw InvalidImage("corrupt JPEG " + path.string());
    }
    jpeg_create_decompress(&cinfo);
    jpeg_stdio_src(&cinfo, f.get());
    jpeg_read_header(&cinfo, TRUE);
    if (cinfo.num_components != 1) {
        cinfo.out_color_space = JCS_RGB;
    }
    jpeg_start_decompress(&cinfo);
    out.width = static_cast<int>(cinfo.output_width);
    out.height = static_cast<int>(cinfo.output_height);
    out.channels = cinfo.output_components;
    out.data.resize(static_cast<std::size_t>(out.width) * out.height * out.channels);
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = out.data.data() +
                       static_cast<std::size_t>(cinfo.output_scanline) * out.width * out.channels;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return out;
}

}  // namespace

Rgb8Image read_image(const std::filesystem::path& path) {
    switch (sniff(path)) {
        case Format::Png:
            return read_png(path);
        case Format::Jpeg:
            return read_jpeg(path);
        default:
            throw InvalidImage("not a PNG or JPEG file: " + path.string());
    }
}

GrayImage load_gray(const std::filesystem::path& path) { return to_grayscale(read_image(path)); }

std::pair<int, int> probe_image_size(const std::filesystem::path& path) {
    const Format fmt = sniff(path);
    if (fmt == Format::Png) {
        // IHDR is always the first chunk: width and height are big-endian at offset 16.
        std::ifstream in(path, std::ios::binary);
        std::array<unsigned char, 24> hdr{};
        in.read(reinterpret_cast<char*>(hdr.data()), hdr.size());
        if (in.gcount() < 24) {
            throw InvalidImage("truncated PNG header " + path.string());
        }
        auto be32 = [&](int off) {
            return static_cast<int>((hdr[off] << 24) | (hdr[off + 1] << 16) | (hdr[off + 2] << 8) | hdr[off + 3]);
        };
        return {be32(16), be32(20)};
    }
    if (fmt == Format::Jpeg) {
        FilePtr f = open_file(path, "rb");
        jpeg_decompress_struct cinfo{};
        JpegErrorManager err{};
        cinfo.err = jpeg_std_error(&err.base);
        err.base.error_exit = jpeg_error_exit;
        if (setjmp(err.jump)) {
            jpeg_destroy_decompress(&cinfo);
            throw InvalidImage("corrupt JPEG " + path.string());
        }
        jpeg_create_decompress(&cinfo);
        jpeg_stdio_src(&cinfo, f.get());
        jpeg_read_header(&cinfo, TRUE);
        const std::pair<int, int> size{static_cast<int>(cinfo.image_width), static_cast<int>(cinfo.image_height)};
        jpeg_destroy_decompress(&cinfo);
        return size;
    }
    throw InvalidImage("not a PNG or JPEG file: " + path.string());
}

Rgb8Image to_rgb8(const GrayImage& img) {
    Rgb8Image out{img.width(), img.height(), 1, {}};
    out.data.reserve(img.pixels().size());
    for (double v : img.pixels()) {
        out.data.push_back(static_cast<std::uint8_t>(std::lround(v * 255.0)));
    }
    return out;
}

void write_png(const Rgb8Image& img, const std::filesystem::path& path) {
    if (img.width <= 0 || img.height <= 0) {
        throw InvalidImage("cannot write empty image");
    }
    FilePtr f = open_file(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw Error("libpng initialisation failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error("failed writing PNG " + path.string());
    }
    png_init_io(png, f.get());
    png_set_IHDR(png, info, img.width, img.height, 8,
                 img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_bytep> rows(img.height);
    for (int y = 0; y < img.height; ++y) {
        rows[y] = const_cast<png_bytep>(img.data.data() + static_cast<std::size_t>(y) * img.width * img.channels);
    }
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

void write_png(const GrayImage& img, const std::filesystem::path& path) { write_png(to_rgb8(img), path); }

}  // namespace cfsep
