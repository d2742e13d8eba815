#pragma once

#include <array>
#include <string>
#include <vector>

#include "metaseg/staging.hpp"
#include "metaseg/types.hpp"

namespace metaseg {

// Controls the synthetic slide/patient generator that stands in for real
// whole-slide data at desk scale.
struct SynthProfile {
    std::string patient_id = "patient";
    int slide_px = 2048;
    double mpp = 0.5;
    std::string magnification_tag = "20X";

    // Patient stage mix, weights over {pN0, pN0(i+), pN1mi, pN1, pN2}.
    // Defaults carry no pN1/pN2 mass: a macro lesion (> 2.0 mm) cannot fit
    // on a 2048 px slide at mpp 0.5 (~1.02 mm extent).
    std::array<double, 5> stage_weights = {0.25, 0.20, 0.55, 0.0, 0.0};

    // Rendered lesion diameter bands (mm); kept inside the grade bounds
    // with margin so +-2% measurement wiggle cannot change the grade.
    double itc_diam_mm_min = 0.06, itc_diam_mm_max = 0.18;
    double micro_diam_mm_min = 0.26, micro_diam_mm_max = 0.60;
    double macro_diam_mm_min = 2.4, macro_diam_mm_max = 3.2;

    int min_tissue_blobs = 3, max_tissue_blobs = 5;
    int lesion_separation_px = 48;

    // ITC lesions are blended toward the normal-tissue color by a factor in
    // [fade_min, fade_max]; higher = fainter. This is what makes ITC the
    // hardest class for the downstream net.
    double itc_fade_min = 0.45, itc_fade_max = 0.65;
};

struct SyntheticSlide {
    SlideRaster raster;
    BinaryMask tumor_mask;   // ground truth, pixel-accurate
    BinaryMask tissue_mask;  // known tissue region (hole-filled), for tests
    SlideLabel label = SlideLabel::negative;
};

struct SyntheticPatient {
    std::string patient_id;
    std::vector<SyntheticSlide> slides; // exactly 5
    std::array<SlideLabel, 5> true_slide_labels{};
    PNStage true_stage = PNStage::pN0;
};

// Pure function of (seed, profile). Slide labels are re-derived from the
// rendered masks with the lesion measurement routine and cross-checked
// against the staging rule before returning.
SyntheticPatient generate_patient(uint64_t seed, const SynthProfile& profile);

} // namespace metaseg
