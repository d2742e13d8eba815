#pragma once

#include <array>
#include <cstdint>

#include "metaseg/types.hpp"

namespace metaseg {

// 256-bin gray-level histogram, bin i = quantized intensity i.
struct Histogram256 {
    std::array<uint64_t, 256> counts{};

    uint64_t total() const {
        uint64_t t = 0;
        for (uint64_t c : counts) t += c;
        return t;
    }
    int nonempty_bins() const {
        int n = 0;
        for (uint64_t c : counts) n += (c != 0);
        return n;
    }
};

// Threshold t in 0..254 maximizing between-class variance
// w0(t)*w1(t)*(mu0(t)-mu1(t))^2 with class 0 = bins <= t; ties take the
// smallest t. Throws DegenerateHistogramError for < 2 nonempty bins.
int otsu_threshold(const Histogram256& h);

enum class RoiChannel {
    saturation,
    grayscale,
};

// Quantized per-pixel channel plus its histogram.
struct ChannelGrid {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> values;
    Histogram256 hist;
};

// HSV-style saturation: s = 0 if max(R,G,B)=0 else (max-min)/max,
// quantized by round(s*255).
ChannelGrid saturation_channel(const SlideRaster& r);

// Rec.601 luma fallback channel.
ChannelGrid grayscale_channel(const SlideRaster& r);

struct RoiResult {
    BinaryMask tissue;
    int otsu_level = 0;
    RoiChannel channel = RoiChannel::saturation;
    bool degenerate = false; // blank slide: all-background result, not an error
};

// Otsu foreground union hole-filling: any background 4-connected component
// not touching the raster border is flipped to foreground, so interiors of
// closed tissue outlines land inside the ROI.
RoiResult tissue_mask(const SlideRaster& r, RoiChannel channel = RoiChannel::saturation);

// In-place hole filling as used by tissue_mask; exposed for tests.
void fill_holes(BinaryMask& m);

} // namespace metaseg
