#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "metaseg/errors.hpp"

namespace metaseg {

// One resolution level of a whole-slide image: row-major 8-bit RGB plus
// physical resolution (microns per pixel, isotropic).
struct SlideRaster {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> pixels; // width*height*3, RGB, top-left origin
    double mpp = 0.0;
    std::string magnification_tag;

    SlideRaster() = default;
    SlideRaster(int w, int h, double mpp_, std::string tag = {})
        : width(w), height(h), pixels(static_cast<size_t>(w) * h * 3, 0),
          mpp(mpp_), magnification_tag(std::move(tag)) {}

    size_t offset(int x, int y) const {
        return (static_cast<size_t>(y) * width + x) * 3;
    }
    uint8_t* rgb(int x, int y) { return pixels.data() + offset(x, y); }
    const uint8_t* rgb(int x, int y) const { return pixels.data() + offset(x, y); }

    void validate() const {
        if (width < 1 || height < 1)
            throw ValidationError("raster dimensions must be >= 1");
        if (mpp <= 0.0)
            throw ValidationError("raster mpp must be positive");
        if (pixels.size() != static_cast<size_t>(width) * height * 3)
            throw ValidationError("raster pixel buffer size mismatch");
    }
};

// Row-major boolean grid; 1 byte per pixel for fast scans.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> bits; // 0 or 1

    BinaryMask() = default;
    BinaryMask(int w, int h) : width(w), height(h), bits(static_cast<size_t>(w) * h, 0) {}

    bool at(int x, int y) const { return bits[static_cast<size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { bits[static_cast<size_t>(y) * width + x] = v ? 1 : 0; }

    size_t count_foreground() const {
        size_t n = 0;
        for (uint8_t b : bits) n += b;
        return n;
    }
    bool empty_foreground() const {
        for (uint8_t b : bits)
            if (b) return false;
        return true;
    }
};

// Per-pixel tumor probability grid. mpp is a float so the on-disk 32-bit
// representation round-trips bit-exactly.
struct ProbabilityMap {
    int width = 0;
    int height = 0;
    std::vector<float> values;
    float mpp = 0.0f;

    ProbabilityMap() = default;
    ProbabilityMap(int w, int h, float mpp_)
        : width(w), height(h), values(static_cast<size_t>(w) * h, 0.0f), mpp(mpp_) {}

    float at(int x, int y) const { return values[static_cast<size_t>(y) * width + x]; }
    float& at(int x, int y) { return values[static_cast<size_t>(y) * width + x]; }
};

// Per-slide class, ordinal in severity order.
enum class SlideLabel : int {
    negative = 0,
    itc = 1,
    micro = 2,
    macro = 3,
};

inline const char* to_string(SlideLabel l) {
    switch (l) {
    case SlideLabel::negative: return "negative";
    case SlideLabel::itc: return "itc";
    case SlideLabel::micro: return "micro";
    case SlideLabel::macro: return "macro";
    }
    return "?";
}

inline SlideLabel slide_label_from_string(const std::string& s) {
    if (s == "negative") return SlideLabel::negative;
    if (s == "itc") return SlideLabel::itc;
    if (s == "micro") return SlideLabel::micro;
    if (s == "macro") return SlideLabel::macro;
    throw ParameterError("unknown slide label: " + s);
}

} // namespace metaseg
