#pragma once

#include <cstdint>
#include <vector>

#include "metaseg/types.hpp"

namespace metaseg {

enum class LesionGrade : int {
    itc = 0,
    micro = 1,
    macro = 2,
};

inline const char* to_string(LesionGrade g) {
    switch (g) {
    case LesionGrade::itc: return "itc";
    case LesionGrade::micro: return "micro";
    case LesionGrade::macro: return "macro";
    }
    return "?";
}

// One connected tumor region with physical measurements.
struct Lesion {
    int64_t pixel_count = 0;
    double diameter_mm = 0.0;
    double area_mm2 = 0.0;
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0; // inclusive bounding box
    double mean_prob = 0.0;
    LesionGrade grade = LesionGrade::itc;
};

enum class Smoothing {
    none,
    box3,
};

struct PostConfig {
    double threshold = 0.5; // in (0,1)
    Smoothing smoothing = Smoothing::none;
    // connectivity is fixed at 8
};

// foreground <=> value >= t; t must lie in (0,1).
BinaryMask binarize(const ProbabilityMap& m, double t);

// 3x3 mean with edge replication. Can erase 1-pixel lesions once
// thresholded, which is why it defaults to off.
ProbabilityMap box3_filter(const ProbabilityMap& m);

// Dense labels 1..K, label order = row-major first-pixel order, 0 = background.
struct ComponentSet {
    int width = 0;
    int height = 0;
    std::vector<int32_t> labels;
    int count = 0;
};

// 8-connectivity labeling via scanline union-find; the test suite checks it
// against an independent flood-fill oracle.
ComponentSet connected_components(const BinaryMask& mask);

struct PixelCoord {
    int x = 0;
    int y = 0;
};

// Max pairwise Euclidean distance between pixel centers, in pixel units.
// Regions above 4096 pixels go through the convex hull of their boundary
// (exact: the diameter of a finite set is attained on its hull).
double region_diameter_px(const std::vector<PixelCoord>& pixels);

// Geometry only; grade and mean_prob are filled by the callers.
// diameter_mm = (max pairwise distance + 1 pixel extent) * mpp / 1000.
Lesion measure_lesion(const std::vector<PixelCoord>& pixels, double mpp);

// macro > 2.0 mm; micro > 0.2 mm and <= 2.0 mm; itc <= 0.2 mm.
LesionGrade grade_lesion(double diameter_mm);

// Optional smoothing -> binarize -> components -> measure -> grade,
// sorted by area descending (stable, ties keep first-pixel order).
std::vector<Lesion> extract_lesions(const ProbabilityMap& m, const PostConfig& cfg);

} // namespace metaseg
