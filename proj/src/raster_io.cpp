#include "cyborg/raster_io.hpp"

#include <png.h>
#include <openssl/evp.h>

#include <cctype>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>

namespace cyborg {
namespace {

struct PngWriteGuard {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngWriteGuard() { png_destroy_write_struct(&png, &info); }
};

struct PngReadGuard {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngReadGuard() { png_destroy_read_struct(&png, &info, nullptr); }
};

void append_bytes(png_structp png, png_bytep data, png_size_t len) {
    auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + len);
}

void no_flush(png_structp) {}

std::vector<std::uint8_t> encode(const RasterImage& img, int color_type, std::span<const Rgb> palette) {
    std::vector<std::uint8_t> out;
    std::vector<png_color> pal;
    for (const auto& c : palette) pal.push_back(png_color{c[0], c[1], c[2]});
    PngWriteGuard g;
    g.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!g.png) throw std::runtime_error("png_create_write_struct failed");
    g.info = png_create_info_struct(g.png);
    if (!g.info) throw std::runtime_error("png_create_info_struct failed");
    if (setjmp(png_jmpbuf(g.png))) throw std::runtime_error("libpng encode error");

    png_set_write_fn(g.png, &out, append_bytes, no_flush);
    png_set_IHDR(g.png, g.info, img.width(), img.height(), 8, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    if (color_type == PNG_COLOR_TYPE_PALETTE) {
        png_set_PLTE(g.png, g.info, pal.data(), static_cast<int>(pal.size()));
    }
    png_write_info(g.png, g.info);
    const std::size_t stride = static_cast<std::size_t>(img.width()) * img.channels();
    auto samples = img.samples();
    for (int y = 0; y < img.height(); ++y) {
        png_write_row(g.png, const_cast<png_bytep>(samples.data() + y * stride));
    }
    png_write_end(g.png, nullptr);
    return out;
}

}  // namespace

RasterImage read_png(const std::filesystem::path& path) {
    std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.c_str(), "rb"), &std::fclose);
    if (!fp) throw IoError(path, "cannot open for reading");

    png_byte sig[8];
    if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
        throw IoError(path, "not a PNG file");

    PngReadGuard g;
    g.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!g.png) throw IoError(path, "png_create_read_struct failed");
    g.info = png_create_info_struct(g.png);
    if (!g.info) throw IoError(path, "png_create_info_struct failed");
    if (setjmp(png_jmpbuf(g.png))) throw IoError(path, "corrupt PNG data");

    png_init_io(g.png, fp.get());
    png_set_sig_bytes(g.png, 8);
    png_read_info(g.png, g.info);

    const auto color = png_get_color_type(g.png, g.info);
    const auto depth = png_get_bit_depth(g.png, g.info);
    if (depth == 16) png_set_strip_16(g.png);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(g.png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(g.png);
    if (png_get_valid(g.png, g.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(g.png);
    png_set_strip_alpha(g.png);
    png_read_update_info(g.png, g.info);

    const int w = static_cast<int>(png_get_image_width(g.png, g.info));
    const int h = static_cast<int>(png_get_image_height(g.png, g.info));
    const int ch = png_get_channels(g.png, g.info);
    if (ch != 1 && ch != 3) throw IoError(path, "unsupported channel count");

    RasterImage img(w, h, ch);
    const std::size_t stride = static_cast<std::size_t>(w) * ch;
    std::vector<png_bytep> rows(h);
    for (int y = 0; y < h; ++y) rows[y] = img.samples().data() + y * stride;
    png_read_image(g.png, rows.data());
    png_read_end(g.png, nullptr);
    return img;
}

std::vector<std::uint8_t> encode_png(const RasterImage& img) {
    return encode(img, img.channels() == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, {});
}

void write_png(const std::filesystem::path& path, const RasterImage& img) {
    write_bytes(path, encode_png(img));
}

std::vector<std::uint8_t> encode_indexed_png(const RasterImage& indices, std::span<const Rgb> palette) {
    if (indices.channels() != 1) throw std::invalid_argument("indexed PNG needs a 1-channel image");
    if (palette.empty() || palette.size() > 256) throw std::invalid_argument("palette size must be 1..256");
    for (auto v : indices.samples()) {
        if (v >= palette.size()) throw std::invalid_argument("palette index out of range");
    }
    return encode(indices, PNG_COLOR_TYPE_PALETTE, palette);
}

void write_indexed_png(const std::filesystem::path& path, const RasterImage& indices,
                       std::span<const Rgb> palette) {
    write_bytes(path, encode_indexed_png(indices, palette));
}

RasterImage read_pnm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open for reading");

    auto token = [&]() {
        std::string t;
        while (in) {
            int c = in.peek();
            if (c == '#') {
                std::string skip;
                std::getline(in, skip);
            } else if (std::isspace(c)) {
                in.get();
            } else {
                break;
            }
        }
        in >> t;
        return t;
    };

    const std::string magic = token();
    int ch;
    if (magic == "P5") ch = 1;
    else if (magic == "P6") ch = 3;
    else throw IoError(path, "unsupported PNM magic '" + magic + "'");

    int w = 0, h = 0, maxval = 0;
    try {
        w = std::stoi(token());
        h = std::stoi(token());
        maxval = std::stoi(token());
    } catch (const std::exception&) {
        throw IoError(path, "malformed PNM header");
    }
    if (maxval != 255) throw IoError(path, "only maxval 255 is supported");
    if (w < 1 || h < 1) throw IoError(path, "invalid PNM dimensions");
    in.get();

    std::vector<std::uint8_t> data(static_cast<std::size_t>(w) * h * ch);
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (in.gcount() != static_cast<std::streamsize>(data.size())) throw IoError(path, "truncated PNM data");
    return RasterImage(w, h, ch, std::move(data));
}

void write_pnm(const std::filesystem::path& path, const RasterImage& img) {
    std::ostringstream header;
    header << (img.channels() == 3 ? "P6" : "P5") << "\n" << img.width() << " " << img.height() << "\n255\n";
    const std::string hdr = header.str();
    std::vector<std::uint8_t> bytes(hdr.begin(), hdr.end());
    bytes.insert(bytes.end(), img.samples().begin(), img.samples().end());
    write_bytes(path, bytes);
}

RasterImage read_image(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    for (auto& c : ext) c = static_cast<char>(std::tolower(c));
    if (ext == ".ppm" || ext == ".pgm" || ext == ".pnm") return read_pnm(path);
    return read_png(path);
}

void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path, "cannot open for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError(path, "write failed");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    write_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open for reading");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

std::string sha256_file(const std::filesystem::path& path) {
    return sha256_hex(read_bytes(path));
}

}  // namespace cyborg
