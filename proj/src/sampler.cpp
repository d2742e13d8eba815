#include "metaseg/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "metaseg/errors.hpp"

namespace metaseg {

namespace {

// Grid origins i*patch anchored at (0,0), last window clamped in-bounds.
std::vector<int> grid_starts(int extent, int patch) {
    std::vector<int> starts;
    if (extent <= patch) {
        starts.push_back(0);
        return starts;
    }
    const int count = (extent + patch - 1) / patch;
    for (int i = 0; i < count; ++i)
        starts.push_back(std::min(i * patch, extent - patch));
    return starts;
}

} // namespace

std::vector<PatchOrigin> cover_tumor(const BinaryMask& tumor, int patch_px) {
    if (patch_px < 1) throw ParameterError("patch_px must be >= 1");
    if (tumor.width < 1 || tumor.height < 1)
        throw ParameterError("cover_tumor needs a nonempty mask");
    const auto xs = grid_starts(tumor.width, patch_px);
    const auto ys = grid_starts(tumor.height, patch_px);
    std::vector<PatchOrigin> out;
    for (int gy : ys) {
        for (int gx : xs) {
            const int x1 = std::min(gx + patch_px, tumor.width);
            const int y1 = std::min(gy + patch_px, tumor.height);
            bool hit = false;
            for (int y = gy; y < y1 && !hit; ++y) {
                const uint8_t* row = tumor.bits.data() + static_cast<size_t>(y) * tumor.width;
                for (int x = gx; x < x1; ++x) {
                    if (row[x]) {
                        hit = true;
                        break;
                    }
                }
            }
            if (hit) out.push_back({gx, gy});
        }
    }
    return out;
}

std::vector<PatchOrigin> sample_normals(const BinaryMask& roi, const BinaryMask& tumor,
                                        int count, int patch_px, Rng& rng,
                                        bool* replacement_used) {
    if (roi.width != tumor.width || roi.height != tumor.height)
        throw ParameterError("roi/tumor dimensions differ");
    if (count < 0) throw ParameterError("count must be >= 0");
    if (replacement_used) *replacement_used = false;
    const int w = roi.width, h = roi.height;
    if (w < patch_px || h < patch_px)
        throw SamplingInfeasibleError("slide smaller than one patch window");

    // Summed-area table of the tumor mask for O(1) window emptiness checks.
    std::vector<uint32_t> sat(static_cast<size_t>(w + 1) * (h + 1), 0);
    for (int y = 0; y < h; ++y) {
        const uint8_t* row = tumor.bits.data() + static_cast<size_t>(y) * w;
        uint32_t run = 0;
        for (int x = 0; x < w; ++x) {
            run += row[x];
            sat[static_cast<size_t>(y + 1) * (w + 1) + (x + 1)] =
                sat[static_cast<size_t>(y) * (w + 1) + (x + 1)] + run;
        }
    }
    auto window_tumor = [&](int x, int y) {
        const size_t stride = w + 1;
        return sat[static_cast<size_t>(y + patch_px) * stride + (x + patch_px)] -
               sat[static_cast<size_t>(y) * stride + (x + patch_px)] -
               sat[static_cast<size_t>(y + patch_px) * stride + x] +
               sat[static_cast<size_t>(y) * stride + x];
    };

    std::vector<PatchOrigin> candidates;
    const int half = patch_px / 2;
    for (int y = 0; y + patch_px <= h; ++y) {
        for (int x = 0; x + patch_px <= w; ++x) {
            if (!roi.at(x + half, y + half)) continue;
            if (window_tumor(x, y) != 0) continue;
            candidates.push_back({x, y});
        }
    }
    if (candidates.empty())
        throw SamplingInfeasibleError("no tumor-free window with ROI center");

    std::vector<PatchOrigin> out;
    out.reserve(count);
    const size_t m = candidates.size();
    if (static_cast<size_t>(count) <= m) {
        // Partial Fisher-Yates: uniform without replacement.
        for (int i = 0; i < count; ++i) {
            const size_t j = i + rng.uniform_int(m - i);
            std::swap(candidates[i], candidates[j]);
            out.push_back(candidates[i]);
        }
    } else {
        if (replacement_used) *replacement_used = true;
        for (int i = 0; i < count; ++i)
            out.push_back(candidates[rng.uniform_int(m)]);
    }
    return out;
}

PatchSample extract_patch(const SlideRaster& slide, const BinaryMask& tumor,
                          const std::string& slide_id, int x, int y, int patch_px) {
    if (x < 0 || y < 0 || x + patch_px > slide.width || y + patch_px > slide.height)
        throw ParameterError("patch window out of bounds");
    PatchSample p;
    p.slide_id = slide_id;
    p.x = x;
    p.y = y;
    p.image = SlideRaster(patch_px, patch_px, slide.mpp, slide.magnification_tag);
    p.mask = BinaryMask(patch_px, patch_px);
    for (int yy = 0; yy < patch_px; ++yy) {
        std::copy_n(slide.rgb(x, y + yy), static_cast<size_t>(patch_px) * 3,
                    p.image.rgb(0, yy));
        const uint8_t* src = tumor.bits.data() + static_cast<size_t>(y + yy) * tumor.width + x;
        uint8_t* dst = p.mask.bits.data() + static_cast<size_t>(yy) * patch_px;
        std::copy_n(src, patch_px, dst);
    }
    p.is_tumor = !p.mask.empty_foreground();
    return p;
}

PatchSample resize_patch(const PatchSample& p, int out_px) {
    const int in_px = p.image.width;
    if (out_px < 1 || in_px % out_px != 0)
        throw ParameterError("patch size must be an integer multiple of output size");
    const int f = in_px / out_px;
    if (f == 1) return p;

    PatchSample out;
    out.slide_id = p.slide_id;
    out.x = p.x;
    out.y = p.y;
    out.is_tumor = p.is_tumor; // fixed at extraction time
    // Physical resolution coarsens by the same factor.
    out.image = SlideRaster(out_px, out_px, p.image.mpp * f, p.image.magnification_tag);
    out.mask = BinaryMask(out_px, out_px);

    const int block = f * f;
    for (int y = 0; y < out_px; ++y) {
        for (int x = 0; x < out_px; ++x) {
            int sum[3] = {0, 0, 0};
            int fg = 0;
            for (int dy = 0; dy < f; ++dy) {
                const int sy = y * f + dy;
                for (int dx = 0; dx < f; ++dx) {
                    const int sx = x * f + dx;
                    const uint8_t* px = p.image.rgb(sx, sy);
                    sum[0] += px[0];
                    sum[1] += px[1];
                    sum[2] += px[2];
                    fg += p.mask.at(sx, sy) ? 1 : 0;
                }
            }
            uint8_t* dst = out.image.rgb(x, y);
            dst[0] = static_cast<uint8_t>((sum[0] + block / 2) / block);
            dst[1] = static_cast<uint8_t>((sum[1] + block / 2) / block);
            dst[2] = static_cast<uint8_t>((sum[2] + block / 2) / block);
            out.mask.set(x, y, 2 * fg >= block); // block mean >= 0.5
        }
    }
    return out;
}

void rgb_to_hsv(double r, double g, double b, double& h, double& s, double& v) {
    const double mx = std::max({r, g, b});
    const double mn = std::min({r, g, b});
    const double d = mx - mn;
    v = mx;
    s = mx == 0.0 ? 0.0 : d / mx;
    if (d == 0.0) {
        h = 0.0;
        return;
    }
    double hh;
    if (mx == r) hh = (g - b) / d;
    else if (mx == g) hh = (b - r) / d + 2.0;
    else hh = (r - g) / d + 4.0;
    hh = std::fmod(hh, 6.0);
    if (hh < 0.0) hh += 6.0;
    h = hh / 6.0;
}

void hsv_to_rgb(double h, double s, double v, double& r, double& g, double& b) {
    const double hh = (h - std::floor(h)) * 6.0;
    const int i = static_cast<int>(hh) % 6;
    const double f = hh - std::floor(hh);
    const double p = v * (1.0 - s);
    const double q = v * (1.0 - s * f);
    const double t = v * (1.0 - s * (1.0 - f));
    switch (i) {
    case 0: r = v; g = t; b = p; break;
    case 1: r = q; g = v; b = p; break;
    case 2: r = p; g = v; b = t; break;
    case 3: r = p; g = q; b = v; break;
    case 4: r = t; g = p; b = v; break;
    default: r = v; g = p; b = q; break;
    }
}

namespace {

void flip_horizontal(PatchSample& p) {
    const int w = p.image.width, h = p.image.height;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w / 2; ++x) {
            uint8_t* a = p.image.rgb(x, y);
            uint8_t* b = p.image.rgb(w - 1 - x, y);
            std::swap(a[0], b[0]);
            std::swap(a[1], b[1]);
            std::swap(a[2], b[2]);
            const bool ma = p.mask.at(x, y), mb = p.mask.at(w - 1 - x, y);
            p.mask.set(x, y, mb);
            p.mask.set(w - 1 - x, y, ma);
        }
    }
}

void flip_vertical(PatchSample& p) {
    const int w = p.image.width, h = p.image.height;
    for (int y = 0; y < h / 2; ++y) {
        for (int x = 0; x < w; ++x) {
            uint8_t* a = p.image.rgb(x, y);
            uint8_t* b = p.image.rgb(x, h - 1 - y);
            std::swap(a[0], b[0]);
            std::swap(a[1], b[1]);
            std::swap(a[2], b[2]);
            const bool ma = p.mask.at(x, y), mb = p.mask.at(x, h - 1 - y);
            p.mask.set(x, y, mb);
            p.mask.set(x, h - 1 - y, ma);
        }
    }
}

} // namespace

void augment_patch(PatchSample& p, const AugmentSpec& spec, Rng& rng) {
    // Fixed draw order keeps the stream position independent of outcomes.
    const bool do_h = rng.bernoulli(spec.flip_h);
    const bool do_v = rng.bernoulli(spec.flip_v);
    const double dh = rng.uniform(-spec.hue_shift_max, spec.hue_shift_max);
    const double smul = rng.uniform(spec.sat_scale_lo, spec.sat_scale_hi);
    const double vmul = rng.uniform(spec.val_scale_lo, spec.val_scale_hi);

    if (do_h) flip_horizontal(p);
    if (do_v) flip_vertical(p);

    if (dh == 0.0 && smul == 1.0 && vmul == 1.0) return;

    const size_t n = static_cast<size_t>(p.image.width) * p.image.height;
    for (size_t i = 0; i < n; ++i) {
        uint8_t* px = p.image.pixels.data() + i * 3;
        double h, s, v;
        rgb_to_hsv(px[0] / 255.0, px[1] / 255.0, px[2] / 255.0, h, s, v);
        h += dh;
        h -= std::floor(h);
        s = std::clamp(s * smul, 0.0, 1.0);
        v = std::clamp(v * vmul, 0.0, 1.0);
        double r, g, b;
        hsv_to_rgb(h, s, v, r, g, b);
        px[0] = static_cast<uint8_t>(std::lround(std::clamp(r, 0.0, 1.0) * 255.0));
        px[1] = static_cast<uint8_t>(std::lround(std::clamp(g, 0.0, 1.0) * 255.0));
        px[2] = static_cast<uint8_t>(std::lround(std::clamp(b, 0.0, 1.0) * 255.0));
    }
}

std::vector<PatchSample> build_epoch(const std::vector<SlideInput>& slides,
                                     const SamplerConfig& cfg) {
    if (cfg.patch_px < 1 || cfg.out_px < 1 || cfg.patch_px % cfg.out_px != 0)
        throw ParameterError("patch_px must be a positive multiple of out_px");
    if (cfg.neg_pos_ratio <= 0.0) throw ParameterError("neg_pos_ratio must be positive");
    if (cfg.oversample_factor < 1) throw ParameterError("oversample_factor must be >= 1");

    // Canonical slide order: sorted by id, independent of input order.
    std::vector<const SlideInput*> order;
    for (const auto& s : slides) order.push_back(&s);
    std::sort(order.begin(), order.end(), [](const SlideInput* a, const SlideInput* b) {
        return a->slide_id < b->slide_id;
    });

    struct SlidePlan {
        const SlideInput* in;
        std::vector<PatchOrigin> tumor_origins;
    };
    std::vector<SlidePlan> plans;
    size_t total_origins = 0;
    for (const SlideInput* s : order) {
        SlidePlan pl;
        pl.in = s;
        pl.tumor_origins = cover_tumor(*s->tumor, cfg.patch_px);
        total_origins += pl.tumor_origins.size();
        plans.push_back(std::move(pl));
    }
    if (total_origins == 0)
        throw ParameterError("no tumor-covering origins: dataset has no tumor slide");

    const size_t pos_count = total_origins * static_cast<size_t>(cfg.oversample_factor);
    const size_t neg_count = static_cast<size_t>(
        std::llround(static_cast<double>(pos_count) * cfg.neg_pos_ratio));

    std::vector<PatchSample> out;
    out.reserve(pos_count + neg_count);
    for (const auto& pl : plans) {
        for (const auto& o : pl.tumor_origins) {
            PatchSample base = extract_patch(*pl.in->raster, *pl.in->tumor,
                                             pl.in->slide_id, o.x, o.y, cfg.patch_px);
            PatchSample resized = resize_patch(base, cfg.out_px);
            for (int r = 0; r < cfg.oversample_factor; ++r) out.push_back(resized);
        }
    }

    // Spread the normal quota over slides that actually have ROI tissue.
    std::vector<const SlideInput*> normal_sources;
    for (const auto& pl : plans)
        if (!pl.in->roi->empty_foreground()) normal_sources.push_back(pl.in);
    if (neg_count > 0 && normal_sources.empty())
        throw SamplingInfeasibleError("no slide offers ROI tissue for normal sampling");
    const size_t ns = normal_sources.size();
    for (size_t i = 0; i < ns; ++i) {
        const size_t quota = neg_count / ns + (i < neg_count % ns ? 1 : 0);
        if (quota == 0) continue;
        const SlideInput* s = normal_sources[i];
        Rng rng(hash_combine(cfg.seed, fnv1a64(s->slide_id)));
        const auto origins =
            sample_normals(*s->roi, *s->tumor, static_cast<int>(quota), cfg.patch_px, rng);
        for (const auto& o : origins) {
            PatchSample base =
                extract_patch(*s->raster, *s->tumor, s->slide_id, o.x, o.y, cfg.patch_px);
            out.push_back(resize_patch(base, cfg.out_px));
        }
    }

    // Deterministic global shuffle.
    Rng shuffle_rng(hash_combine(cfg.seed, fnv1a64("epoch-shuffle")));
    for (size_t i = out.size(); i > 1; --i) {
        const size_t j = shuffle_rng.uniform_int(i);
        std::swap(out[i - 1], out[j]);
    }
    return out;
}

} // namespace metaseg
