#pragma once

#include <string>
#include <vector>

#include "metaseg/rng.hpp"
#include "metaseg/types.hpp"

namespace metaseg {

struct AugmentSpec {
    double flip_h = 0.5;
    double flip_v = 0.5;
    double hue_shift_max = 0.04;        // fraction of the full hue circle
    double sat_scale_lo = 0.75, sat_scale_hi = 1.25;
    double val_scale_lo = 0.75, val_scale_hi = 1.25;
    bool rotation_enabled = false;      // kept for config compatibility; unused
};

struct SamplerConfig {
    int patch_px = 512;
    int out_px = 256;
    double neg_pos_ratio = 3.0;
    int oversample_factor = 2;
    AugmentSpec augment;
    uint64_t seed = 0;
};

struct PatchOrigin {
    int x = 0;
    int y = 0;
};

// Training patch: image plus pixel mask at the same size. is_tumor is
// fixed at extraction time (pre-resize): any foreground pixel in the
// extracted window.
struct PatchSample {
    SlideRaster image;
    BinaryMask mask;
    std::string slide_id;
    int x = 0, y = 0; // window origin on the source slide
    bool is_tumor = false;
};

// Stride = patch_px grid anchored at (0,0), border windows clamped
// in-bounds; keeps exactly the windows intersecting >= 1 tumor pixel.
// The union of kept windows covers every tumor pixel.
std::vector<PatchOrigin> cover_tumor(const BinaryMask& tumor, int patch_px);

// `count` window origins whose center lies in the ROI and which contain no
// tumor pixel, uniform over the candidate set. Falls back to sampling with
// replacement (sets *replacement_used) when candidates < count; throws
// SamplingInfeasibleError when there is no candidate at all.
std::vector<PatchOrigin> sample_normals(const BinaryMask& roi, const BinaryMask& tumor,
                                        int count, int patch_px, Rng& rng,
                                        bool* replacement_used = nullptr);

PatchSample extract_patch(const SlideRaster& slide, const BinaryMask& tumor,
                          const std::string& slide_id, int x, int y, int patch_px);

// Box-average downscale by an integer factor; mask by block mean >= 0.5.
PatchSample resize_patch(const PatchSample& p, int out_px);

// In order: horizontal flip, vertical flip, then one HSV jitter applied to
// every pixel (hue shift mod 1, S/V scales clamped to [0,1]). The mask only
// sees the flips.
void augment_patch(PatchSample& p, const AugmentSpec& spec, Rng& rng);

// One slide's inputs for epoch building; rasters/masks owned by the caller.
struct SlideInput {
    std::string slide_id;
    const SlideRaster* raster = nullptr;
    const BinaryMask* tumor = nullptr;
    const BinaryMask* roi = nullptr;
};

// With N = total tumor-covering origins over all slides, emits
// N * oversample_factor tumor samples (each origin repeated) and
// round(N * oversample_factor * neg_pos_ratio) normal samples, shuffled
// deterministically by cfg.seed. Samples are resized to cfg.out_px.
std::vector<PatchSample> build_epoch(const std::vector<SlideInput>& slides,
                                     const SamplerConfig& cfg);

// 8-bit RGB <-> HSV helpers used by the color augmentation.
void rgb_to_hsv(double r, double g, double b, double& h, double& s, double& v);
void hsv_to_rgb(double h, double s, double v, double& r, double& g, double& b);

} // namespace metaseg
