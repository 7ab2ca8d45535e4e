#include "geoscene/geotiff.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include <zlib.h>

#include "geoscene/errors.hpp"

namespace geoscene {

namespace {

constexpr std::uint16_t kTagImageWidth = 256;
constexpr std::uint16_t kTagImageLength = 257;
constexpr std::uint16_t kTagBitsPerSample = 258;
constexpr std::uint16_t kTagCompression = 259;
constexpr std::uint16_t kTagStripOffsets = 273;
constexpr std::uint16_t kTagSamplesPerPixel = 277;
constexpr std::uint16_t kTagRowsPerStrip = 278;
constexpr std::uint16_t kTagStripByteCounts = 279;
constexpr std::uint16_t kTagPredictor = 317;
constexpr std::uint16_t kTagTileWidth = 322;
constexpr std::uint16_t kTagTileLength = 323;
constexpr std::uint16_t kTagTileOffsets = 324;
constexpr std::uint16_t kTagTileByteCounts = 325;
constexpr std::uint16_t kTagSampleFormat = 339;
constexpr std::uint16_t kTagModelPixelScale = 33550;
constexpr std::uint16_t kTagModelTiepoint = 33922;
constexpr std::uint16_t kTagGdalNodata = 42113;

struct Reader {
    std::span<const std::uint8_t> bytes;
    bool big_endian = false;

    void require(std::size_t offset, std::size_t n) const {
        if (offset + n > bytes.size() || offset + n < offset)
            throw ParseError("geotiff: read past end of file at offset " +
                             std::to_string(offset));
    }

    std::uint16_t u16(std::size_t off) const {
        require(off, 2);
        return big_endian
                   ? static_cast<std::uint16_t>(bytes[off] << 8 | bytes[off + 1])
                   : static_cast<std::uint16_t>(bytes[off + 1] << 8 | bytes[off]);
    }

    std::uint32_t u32(std::size_t off) const {
        require(off, 4);
        if (big_endian)
            return (std::uint32_t(bytes[off]) << 24) | (std::uint32_t(bytes[off + 1]) << 16) |
                   (std::uint32_t(bytes[off + 2]) << 8) | std::uint32_t(bytes[off + 3]);
        return (std::uint32_t(bytes[off + 3]) << 24) | (std::uint32_t(bytes[off + 2]) << 16) |
               (std::uint32_t(bytes[off + 1]) << 8) | std::uint32_t(bytes[off]);
    }

    double f64(std::size_t off) const {
        std::uint64_t bits = (std::uint64_t(u32(off + (big_endian ? 0 : 4))) << 32) |
                             u32(off + (big_endian ? 4 : 0));
        double d;
        std::memcpy(&d, &bits, 8);
        return d;
    }

    float f32(std::size_t off) const {
        std::uint32_t bits = u32(off);
        float f;
        std::memcpy(&f, &bits, 4);
        return f;
    }
};

struct IfdEntry {
    std::uint16_t tag = 0;
    std::uint16_t type = 0;
    std::uint32_t count = 0;
    std::size_t entry_offset = 0; // offset of the 12-byte entry itself
};

std::size_t type_size(std::uint16_t type) {
    switch (type) {
        case 1: return 1;  // BYTE
        case 2: return 1;  // ASCII
        case 3: return 2;  // SHORT
        case 4: return 4;  // LONG
        case 11: return 4; // FLOAT
        case 12: return 8; // DOUBLE
        default: return 0;
    }
}

// Where the entry's values live: inline in the value field if they fit.
std::size_t value_offset(const Reader& rd, const IfdEntry& e) {
    const std::size_t total = type_size(e.type) * e.count;
    if (total <= 4) return e.entry_offset + 8;
    return rd.u32(e.entry_offset + 8);
}

std::vector<double> numeric_values(const Reader& rd, const IfdEntry& e) {
    const std::size_t ts = type_size(e.type);
    if (ts == 0)
        throw ParseError("geotiff: tag " + std::to_string(e.tag) +
                         " has unknown field type " + std::to_string(e.type));
    const std::size_t off = value_offset(rd, e);
    rd.require(off, ts * e.count);
    std::vector<double> out;
    out.reserve(e.count);
    for (std::uint32_t i = 0; i < e.count; ++i) {
        const std::size_t o = off + i * ts;
        switch (e.type) {
            case 1:
            case 2: out.push_back(rd.bytes[o]); break;
            case 3: out.push_back(rd.u16(o)); break;
            case 4: out.push_back(rd.u32(o)); break;
            case 11: out.push_back(rd.f32(o)); break;
            case 12: out.push_back(rd.f64(o)); break;
        }
    }
    return out;
}

std::string ascii_value(const Reader& rd, const IfdEntry& e) {
    const std::size_t off = value_offset(rd, e);
    rd.require(off, e.count);
    std::string s(reinterpret_cast<const char*>(rd.bytes.data() + off), e.count);
    if (auto nul = s.find('\0'); nul != std::string::npos) s.resize(nul);
    return s;
}

std::vector<std::uint8_t> inflate_block(std::span<const std::uint8_t> in,
                                        std::size_t expected) {
    std::vector<std::uint8_t> out(expected);
    uLongf dest_len = static_cast<uLongf>(expected);
    const int rc = uncompress(out.data(), &dest_len, in.data(),
                              static_cast<uLong>(in.size()));
    if (rc != Z_OK)
        throw ParseError("geotiff: deflate block failed to decompress (zlib error " +
                         std::to_string(rc) + ")");
    out.resize(dest_len);
    return out;
}

enum class SampleKind { Float32, Int16, Uint16 };

double decode_sample(const std::uint8_t* p, SampleKind kind, bool big_endian) {
    switch (kind) {
        case SampleKind::Float32: {
            std::uint32_t bits;
            if (big_endian)
                bits = (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
                       (std::uint32_t(p[2]) << 8) | p[3];
            else
                bits = (std::uint32_t(p[3]) << 24) | (std::uint32_t(p[2]) << 16) |
                       (std::uint32_t(p[1]) << 8) | p[0];
            float f;
            std::memcpy(&f, &bits, 4);
            return f;
        }
        case SampleKind::Int16: {
            std::uint16_t u = big_endian ? std::uint16_t(p[0] << 8 | p[1])
                                         : std::uint16_t(p[1] << 8 | p[0]);
            return static_cast<std::int16_t>(u);
        }
        case SampleKind::Uint16:
            return big_endian ? std::uint16_t(p[0] << 8 | p[1])
                              : std::uint16_t(p[1] << 8 | p[0]);
    }
    return 0.0;
}

} // namespace

DemGrid parse_geotiff(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 8) throw ParseError("geotiff: file shorter than header");

    Reader rd{bytes};
    if (bytes[0] == 'I' && bytes[1] == 'I') rd.big_endian = false;
    else if (bytes[0] == 'M' && bytes[1] == 'M') rd.big_endian = true;
    else throw ParseError("geotiff: bad byte-order mark");

    const std::uint16_t magic = rd.u16(2);
    if (magic == 43) throw UnsupportedFeatureError("geotiff: BigTIFF is not supported");
    if (magic != 42) throw ParseError("geotiff: bad magic number " + std::to_string(magic));

    const std::uint32_t ifd_off = rd.u32(4);
    const std::uint16_t n_entries = rd.u16(ifd_off);
    if (n_entries == 0) throw ParseError("geotiff: empty IFD");

    std::vector<IfdEntry> entries;
    entries.reserve(n_entries);
    for (std::uint16_t i = 0; i < n_entries; ++i) {
        const std::size_t eo = ifd_off + 2 + std::size_t(i) * 12;
        IfdEntry e;
        e.tag = rd.u16(eo);
        e.type = rd.u16(eo + 2);
        e.count = rd.u32(eo + 4);
        e.entry_offset = eo;
        entries.push_back(e);
    }

    auto find = [&](std::uint16_t tag) -> const IfdEntry* {
        for (const auto& e : entries)
            if (e.tag == tag) return &e;
        return nullptr;
    };
    auto scalar = [&](std::uint16_t tag, double fallback) -> double {
        const IfdEntry* e = find(tag);
        if (!e) return fallback;
        auto vals = numeric_values(rd, *e);
        if (vals.empty())
            throw ParseError("geotiff: tag " + std::to_string(tag) + " has no value");
        return vals[0];
    };

    const IfdEntry* width_e = find(kTagImageWidth);
    const IfdEntry* height_e = find(kTagImageLength);
    if (!width_e || !height_e)
        throw ParseError("geotiff: missing image dimensions");
    const int width = static_cast<int>(numeric_values(rd, *width_e)[0]);
    const int height = static_cast<int>(numeric_values(rd, *height_e)[0]);
    if (width <= 0 || height <= 0)
        throw ParseError("geotiff: non-positive image dimensions");

    const int samples_per_pixel = static_cast<int>(scalar(kTagSamplesPerPixel, 1));
    if (samples_per_pixel != 1)
        throw UnsupportedFeatureError("geotiff: multi-band images are not supported (" +
                                      std::to_string(samples_per_pixel) + " samples per pixel)");

    const int bits = static_cast<int>(scalar(kTagBitsPerSample, 1));
    const int sample_format = static_cast<int>(scalar(kTagSampleFormat, 1));
    SampleKind kind;
    if (bits == 32 && sample_format == 3) kind = SampleKind::Float32;
    else if (bits == 16 && sample_format == 2) kind = SampleKind::Int16;
    else if (bits == 16 && sample_format == 1) kind = SampleKind::Uint16;
    else
        throw UnsupportedFeatureError(
            "geotiff: unsupported sample type (" + std::to_string(bits) +
            " bits, sample format " + std::to_string(sample_format) + ")");
    const std::size_t bpp = bits / 8;

    const int compression = static_cast<int>(scalar(kTagCompression, 1));
    const bool deflate = compression == 8 || compression == 32946;
    if (compression != 1 && !deflate)
        throw UnsupportedFeatureError("geotiff: unsupported compression scheme " +
                                      std::to_string(compression));

    const int predictor = static_cast<int>(scalar(kTagPredictor, 1));
    if (predictor != 1)
        throw UnsupportedFeatureError("geotiff: unsupported predictor " +
                                      std::to_string(predictor));

    // Georeferencing: pixel scale plus one tiepoint anchoring raster to model space.
    const IfdEntry* scale_e = find(kTagModelPixelScale);
    const IfdEntry* tie_e = find(kTagModelTiepoint);
    if (!scale_e || !tie_e)
        throw ParseError("geotiff: missing georeferencing tags (pixel scale / tiepoint)");
    const auto scale = numeric_values(rd, *scale_e);
    const auto tie = numeric_values(rd, *tie_e);
    if (scale.size() < 2 || tie.size() < 6)
        throw ParseError("geotiff: malformed georeferencing tags");

    DemGrid g;
    g.crs = Crs::Geographic;
    g.pixel_w = scale[0];
    g.pixel_h = scale[1];
    if (g.pixel_w <= 0.0 || g.pixel_h <= 0.0)
        throw ParseError("geotiff: non-positive pixel scale");
    // Tiepoint maps raster point (i, j) to model (x, y); shift back to the grid origin.
    g.origin_x = tie[3] - tie[0] * g.pixel_w;
    g.origin_y = tie[4] + tie[1] * g.pixel_h;
    g.width = width;
    g.height = height;
    g.values.assign(static_cast<std::size_t>(width) * height, 0.0);

    if (const IfdEntry* nd = find(kTagGdalNodata)) {
        const std::string s = ascii_value(rd, *nd);
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end != s.c_str()) {
            g.nodata = v;
            g.has_nodata = true;
        }
    }

    const std::size_t row_bytes = static_cast<std::size_t>(width) * bpp;

    auto block_bytes = [&](std::size_t offset, std::size_t byte_count,
                           std::size_t raw_size) -> std::vector<std::uint8_t> {
        rd.require(offset, byte_count);
        std::span<const std::uint8_t> raw = bytes.subspan(offset, byte_count);
        if (deflate) return inflate_block(raw, raw_size);
        if (raw.size() < raw_size)
            throw ParseError("geotiff: data block shorter than expected");
        return std::vector<std::uint8_t>(raw.begin(), raw.begin() + raw_size);
    };

    const IfdEntry* tile_off_e = find(kTagTileOffsets);
    if (tile_off_e) {
        const IfdEntry* tile_cnt_e = find(kTagTileByteCounts);
        const IfdEntry* tw_e = find(kTagTileWidth);
        const IfdEntry* th_e = find(kTagTileLength);
        if (!tile_cnt_e || !tw_e || !th_e)
            throw ParseError("geotiff: incomplete tile tags");
        const int tile_w = static_cast<int>(numeric_values(rd, *tw_e)[0]);
        const int tile_h = static_cast<int>(numeric_values(rd, *th_e)[0]);
        if (tile_w <= 0 || tile_h <= 0)
            throw ParseError("geotiff: non-positive tile dimensions");
        const int tiles_across = (width + tile_w - 1) / tile_w;
        const int tiles_down = (height + tile_h - 1) / tile_h;
        const auto offsets = numeric_values(rd, *tile_off_e);
        const auto counts = numeric_values(rd, *tile_cnt_e);
        const std::size_t n_tiles =
            static_cast<std::size_t>(tiles_across) * tiles_down;
        if (offsets.size() < n_tiles || counts.size() < n_tiles)
            throw ParseError("geotiff: tile offset/count arrays shorter than tile grid");

        const std::size_t tile_raw = static_cast<std::size_t>(tile_w) * tile_h * bpp;
        for (int ty = 0; ty < tiles_down; ++ty) {
            for (int tx = 0; tx < tiles_across; ++tx) {
                const std::size_t t = static_cast<std::size_t>(ty) * tiles_across + tx;
                const auto data = block_bytes(static_cast<std::size_t>(offsets[t]),
                                              static_cast<std::size_t>(counts[t]), tile_raw);
                // Edge tiles are stored full-size; out-of-image padding is dropped.
                const int rows = std::min(tile_h, height - ty * tile_h);
                const int cols = std::min(tile_w, width - tx * tile_w);
                for (int r = 0; r < rows; ++r) {
                    for (int c = 0; c < cols; ++c) {
                        const std::uint8_t* p =
                            data.data() + (static_cast<std::size_t>(r) * tile_w + c) * bpp;
                        g.values[static_cast<std::size_t>(ty * tile_h + r) * width +
                                 tx * tile_w + c] = decode_sample(p, kind, rd.big_endian);
                    }
                }
            }
        }
        return g;
    }

    const IfdEntry* strip_off_e = find(kTagStripOffsets);
    const IfdEntry* strip_cnt_e = find(kTagStripByteCounts);
    if (!strip_off_e || !strip_cnt_e)
        throw ParseError("geotiff: missing strip offsets/byte counts");
    const double rps_raw = scalar(kTagRowsPerStrip, height);
    const int rows_per_strip =
        rps_raw >= height ? height : static_cast<int>(rps_raw);
    if (rows_per_strip <= 0) throw ParseError("geotiff: non-positive rows per strip");
    const int n_strips = (height + rows_per_strip - 1) / rows_per_strip;
    const auto offsets = numeric_values(rd, *strip_off_e);
    const auto counts = numeric_values(rd, *strip_cnt_e);
    if (static_cast<int>(offsets.size()) < n_strips ||
        static_cast<int>(counts.size()) < n_strips)
        throw ParseError("geotiff: strip offset/count arrays shorter than strip count");

    for (int s = 0; s < n_strips; ++s) {
        const int rows = std::min(rows_per_strip, height - s * rows_per_strip);
        const std::size_t raw_size = static_cast<std::size_t>(rows) * row_bytes;
        const auto data = block_bytes(static_cast<std::size_t>(offsets[s]),
                                      static_cast<std::size_t>(counts[s]), raw_size);
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < width; ++c) {
                const std::uint8_t* p =
                    data.data() + static_cast<std::size_t>(r) * row_bytes + c * bpp;
                g.values[static_cast<std::size_t>(s * rows_per_strip + r) * width + c] =
                    decode_sample(p, kind, rd.big_endian);
            }
        }
    }
    return g;
}

} // namespace geoscene
