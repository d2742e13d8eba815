#include "metaseg/synth.hpp"

#include <algorithm>
#include <cmath>

#include "metaseg/errors.hpp"
#include "metaseg/lesion.hpp"
#include "metaseg/rng.hpp"
#include "metaseg/roi.hpp"

namespace metaseg {

namespace {

struct EllipseShape {
    double cx = 0, cy = 0;
    double a = 1, b = 1;      // semi-axes, pixels
    double cos_t = 1, sin_t = 0;

    // normalized squared radius; <= 1 means inside
    double quad(double x, double y) const {
        const double dx = x - cx, dy = y - cy;
        const double u = (dx * cos_t + dy * sin_t) / a;
        const double v = (-dx * sin_t + dy * cos_t) / b;
        return u * u + v * v;
    }
};

struct LesionScene {
    EllipseShape shape;
    bool faint = false;
    double fade = 0.0;
};

struct Rgb {
    double r, g, b;
};

Rgb lerp(const Rgb& a, const Rgb& b, double t) {
    return {a.r + (b.r - a.r) * t, a.g + (b.g - a.g) * t, a.b + (b.b - a.b) * t};
}

uint8_t quant(double v) {
    return static_cast<uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

// Multi-octave hash noise in [0,1), coarse-to-fine.
double marble(uint64_t salt, int x, int y) {
    return 0.55 * pixel_noise01(salt, x >> 4, y >> 4) +
           0.30 * pixel_noise01(salt + 1, x >> 2, y >> 2) +
           0.15 * pixel_noise01(salt + 2, x, y);
}

constexpr Rgb kBackground{243, 241, 245};
constexpr Rgb kTissuePink{232, 162, 202};
constexpr Rgb kTissuePurple{158, 96, 176};
constexpr Rgb kTissueNuclei{105, 62, 140};
constexpr Rgb kTumorBase{92, 58, 148};
constexpr Rgb kTumorNuclei{60, 38, 110};

// Lesion diameters drawn per grade with the band edges pulled in, so
// rasterization (up to ~2 px shrink) can never cross a grade boundary.
double draw_diameter(Rng& rng, const SynthProfile& p, LesionGrade g) {
    switch (g) {
    case LesionGrade::itc: return rng.uniform(p.itc_diam_mm_min, p.itc_diam_mm_max);
    case LesionGrade::micro: return rng.uniform(p.micro_diam_mm_min, p.micro_diam_mm_max);
    case LesionGrade::macro: return rng.uniform(p.macro_diam_mm_min, p.macro_diam_mm_max);
    }
    return 0.0;
}

SlideLabel measured_label(const BinaryMask& tumor, double mpp) {
    const ComponentSet cs = connected_components(tumor);
    if (cs.count == 0) return SlideLabel::negative;
    std::vector<std::vector<PixelCoord>> regions(cs.count);
    for (int y = 0; y < cs.height; ++y)
        for (int x = 0; x < cs.width; ++x) {
            const int32_t l = cs.labels[static_cast<size_t>(y) * cs.width + x];
            if (l) regions[l - 1].push_back({x, y});
        }
    LesionGrade top = LesionGrade::itc;
    for (const auto& reg : regions) {
        const Lesion les = measure_lesion(reg, mpp);
        top = std::max(top, grade_lesion(les.diameter_mm));
    }
    switch (top) {
    case LesionGrade::itc: return SlideLabel::itc;
    case LesionGrade::micro: return SlideLabel::micro;
    case LesionGrade::macro: return SlideLabel::macro;
    }
    return SlideLabel::negative;
}

std::array<SlideLabel, 5> draw_slide_labels(Rng& rng, PNStage stage) {
    std::vector<SlideLabel> labels;
    auto add = [&](SlideLabel l, int n) {
        for (int i = 0; i < n && labels.size() < 5; ++i) labels.push_back(l);
    };
    switch (stage) {
    case PNStage::pN0:
        break;
    case PNStage::pN0i_plus:
        add(SlideLabel::itc, 1 + static_cast<int>(rng.uniform_int(2)));
        break;
    case PNStage::pN1mi:
        add(SlideLabel::micro, 1 + static_cast<int>(rng.uniform_int(2)));
        if (rng.bernoulli(0.3)) add(SlideLabel::itc, 1);
        break;
    case PNStage::pN1:
        add(SlideLabel::macro, 1);
        add(SlideLabel::micro, static_cast<int>(rng.uniform_int(3))); // positive stays <= 3
        if (rng.bernoulli(0.25)) add(SlideLabel::itc, 1);
        break;
    case PNStage::pN2: {
        const int macros = 1 + static_cast<int>(rng.uniform_int(2));
        add(SlideLabel::macro, macros);
        add(SlideLabel::micro, 4 - macros + static_cast<int>(rng.uniform_int(2)));
        break;
    }
    }
    while (labels.size() < 5) labels.push_back(SlideLabel::negative);
    // Fisher-Yates
    for (size_t i = labels.size() - 1; i > 0; --i) {
        const size_t j = rng.uniform_int(i + 1);
        std::swap(labels[i], labels[j]);
    }
    std::array<SlideLabel, 5> out{};
    std::copy(labels.begin(), labels.end(), out.begin());
    return out;
}

SyntheticSlide render_slide(uint64_t slide_seed, SlideLabel label, const SynthProfile& p) {
    Rng rng(slide_seed);
    const int n = p.slide_px;
    const double w = static_cast<double>(n);

    // Scene layout: a handful of tissue ellipses covering most of the slide.
    std::vector<EllipseShape> tissue;
    const int blobs = p.min_tissue_blobs +
                      static_cast<int>(rng.uniform_int(
                          static_cast<uint64_t>(p.max_tissue_blobs - p.min_tissue_blobs + 1)));
    for (int i = 0; i < blobs; ++i) {
        EllipseShape e;
        e.cx = rng.uniform(0.2, 0.8) * w;
        e.cy = rng.uniform(0.2, 0.8) * w;
        e.a = rng.uniform(0.18, 0.34) * w;
        e.b = rng.uniform(0.18, 0.34) * w;
        const double t = rng.uniform(0.0, 3.141592653589793);
        e.cos_t = std::cos(t);
        e.sin_t = std::sin(t);
        tissue.push_back(e);
    }

    // Lesion plan per label.
    struct Plan {
        LesionGrade grade;
        bool faint;
    };
    std::vector<Plan> plans;
    switch (label) {
    case SlideLabel::negative:
        break;
    case SlideLabel::itc:
        for (int i = 0, k = 1 + static_cast<int>(rng.uniform_int(3)); i < k; ++i)
            plans.push_back({LesionGrade::itc, true});
        break;
    case SlideLabel::micro:
        plans.push_back({LesionGrade::micro, false});
        if (rng.bernoulli(0.4)) plans.push_back({LesionGrade::itc, true});
        break;
    case SlideLabel::macro:
        plans.push_back({LesionGrade::macro, false});
        if (rng.bernoulli(0.4)) plans.push_back({LesionGrade::micro, false});
        break;
    }

    std::vector<LesionScene> lesions;
    for (size_t pi = 0; pi < plans.size(); ++pi) {
        const Plan& plan = plans[pi];
        const double diam_mm = draw_diameter(rng, p, plan.grade);
        const double diam_px = diam_mm * 1000.0 / p.mpp;
        const double a = (diam_px - 1.0) / 2.0;
        if (2.0 * a + 8.0 >= w)
            throw ParameterError("profile requests lesion larger than slide (" +
                                 std::to_string(diam_mm) + " mm at mpp " +
                                 std::to_string(p.mpp) + ")");
        const double margin = a + 4.0;

        bool placed = false;
        for (int attempt = 0; attempt < 64 && !placed; ++attempt) {
            const EllipseShape& host = tissue[rng.uniform_int(tissue.size())];
            EllipseShape e;
            e.cx = std::clamp(host.cx + rng.uniform(-0.3, 0.3) * host.a, margin, w - 1 - margin);
            e.cy = std::clamp(host.cy + rng.uniform(-0.3, 0.3) * host.b, margin, w - 1 - margin);
            e.a = a;
            e.b = a * rng.uniform(0.65, 1.0);
            const double t = rng.uniform(0.0, 3.141592653589793);
            e.cos_t = std::cos(t);
            e.sin_t = std::sin(t);

            bool clash = false;
            for (const auto& other : lesions) {
                const double dx = e.cx - other.shape.cx, dy = e.cy - other.shape.cy;
                const double min_d = e.a + other.shape.a + p.lesion_separation_px;
                if (dx * dx + dy * dy < min_d * min_d) {
                    clash = true;
                    break;
                }
            }
            if (clash) continue;

            LesionScene ls;
            ls.shape = e;
            ls.faint = plan.faint;
            ls.fade = plan.faint ? rng.uniform(p.itc_fade_min, p.itc_fade_max) : 0.0;
            lesions.push_back(ls);

            // Guarantee tissue under the lesion.
            EllipseShape under;
            under.cx = e.cx;
            under.cy = e.cy;
            under.a = under.b = e.a * 1.6 + 24.0;
            tissue.push_back(under);
            placed = true;
        }
        if (!placed && pi == 0)
            throw ParameterError("could not place primary lesion on slide");
        // secondary lesions are optional; dropping one keeps the label intent
    }

    const uint64_t salt_wobble = hash_combine(slide_seed, 1);
    const uint64_t salt_marble = hash_combine(slide_seed, 2);
    const uint64_t salt_jitter = hash_combine(slide_seed, 3);
    const uint64_t salt_speckle = hash_combine(slide_seed, 4);

    SyntheticSlide out;
    out.label = label;
    out.raster = SlideRaster(n, n, p.mpp, p.magnification_tag);
    out.tumor_mask = BinaryMask(n, n);
    out.tissue_mask = BinaryMask(n, n);

    // All per-pixel choices are position-hashed, so this loop is
    // thread-count independent.
#pragma omp parallel for schedule(static)
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            const double fx = x, fy = y;
            const double wob = 0.24 * (pixel_noise01(salt_wobble, x >> 3, y >> 3) - 0.5);
            bool in_tissue = false;
            for (const auto& e : tissue) {
                if (e.quad(fx, fy) <= 1.0 + wob) {
                    in_tissue = true;
                    break;
                }
            }
            const LesionScene* hit = nullptr;
            for (const auto& ls : lesions) {
                if (ls.shape.quad(fx, fy) <= 1.0) {
                    hit = &ls;
                    break;
                }
            }

            const uint32_t jit = pixel_hash(salt_jitter, x, y);
            const double j0 = static_cast<double>(jit & 0xff) / 255.0 - 0.5;
            const double j1 = static_cast<double>((jit >> 8) & 0xff) / 255.0 - 0.5;
            const double j2 = static_cast<double>((jit >> 16) & 0xff) / 255.0 - 0.5;

            Rgb c;
            if (hit != nullptr) {
                // Tumor region; always sits on tissue by construction.
                const double spk = pixel_noise01(salt_speckle, x, y);
                c = spk < 0.45 ? lerp(kTumorBase, kTumorNuclei, 0.8) : kTumorBase;
                c.r += 20.0 * j0;
                c.g += 20.0 * j1;
                c.b += 20.0 * j2;
                if (hit->faint) {
                    const double m = marble(salt_marble, x, y);
                    Rgb tissue_c = lerp(kTissuePink, kTissuePurple, m);
                    c = lerp(c, tissue_c, hit->fade);
                }
                out.tumor_mask.set(x, y, true);
                in_tissue = true;
            } else if (in_tissue) {
                const double m = marble(salt_marble, x, y);
                c = lerp(kTissuePink, kTissuePurple, m);
                const double spk = pixel_noise01(salt_speckle, x, y);
                if (spk < 0.12) c = lerp(c, kTissueNuclei, 0.7);
                c.r += 20.0 * j0;
                c.g += 20.0 * j1;
                c.b += 20.0 * j2;
            } else {
                c = {kBackground.r + 6.0 * j0, kBackground.g + 6.0 * j1,
                     kBackground.b + 6.0 * j2};
            }
            uint8_t* px = out.raster.rgb(x, y);
            px[0] = quant(c.r);
            px[1] = quant(c.g);
            px[2] = quant(c.b);
            out.tissue_mask.set(x, y, in_tissue);
        }
    }
    // Known tissue region includes enclosed pockets, matching the ROI
    // definition downstream.
    fill_holes(out.tissue_mask);
    return out;
}

} // namespace

SyntheticPatient generate_patient(uint64_t seed, const SynthProfile& profile) {
    if (profile.slide_px < 32) throw ParameterError("slide_px too small");
    if (profile.mpp <= 0.0) throw ParameterError("mpp must be positive");
    double wsum = 0.0;
    for (double v : profile.stage_weights) {
        if (v < 0.0) throw ParameterError("stage weights must be non-negative");
        wsum += v;
    }
    if (wsum <= 0.0) throw ParameterError("stage weights must not all be zero");

    Rng rng(hash_combine(seed, fnv1a64("patient-plan")));

    double pick = rng.uniform01() * wsum;
    int stage_idx = 0;
    for (int i = 0; i < 5; ++i) {
        if (pick < profile.stage_weights[i] || i == 4) {
            stage_idx = i;
            break;
        }
        pick -= profile.stage_weights[i];
    }
    // Guard against float edge: land on a stage with mass.
    while (profile.stage_weights[stage_idx] == 0.0 && stage_idx > 0) --stage_idx;
    const PNStage stage = static_cast<PNStage>(stage_idx);

    SyntheticPatient patient;
    patient.patient_id = profile.patient_id;
    patient.true_slide_labels = draw_slide_labels(rng, stage);

    for (int i = 0; i < 5; ++i) {
        const uint64_t slide_seed = hash_combine(seed, static_cast<uint64_t>(i) + 100);
        SyntheticSlide slide =
            render_slide(slide_seed, patient.true_slide_labels[i], profile);
        // Re-derive the label from the rendered mask with the measurement
        // routine; generator and measurer must agree.
        const SlideLabel measured = measured_label(slide.tumor_mask, profile.mpp);
        if (measured != patient.true_slide_labels[i])
            throw ValidationError("generated slide label mismatch: intended " +
                                  std::string(to_string(patient.true_slide_labels[i])) +
                                  ", measured " + to_string(measured));
        patient.slides.push_back(std::move(slide));
    }

    patient.true_stage = stage_patient(patient.true_slide_labels);
    if (patient.true_stage != stage)
        throw ValidationError("stage cross-check failed at generation");
    return patient;
}

} // namespace metaseg
