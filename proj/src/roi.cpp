#include "metaseg/roi.hpp"

#include <algorithm>
#include <vector>

#include "metaseg/errors.hpp"

namespace metaseg {

int otsu_threshold(const Histogram256& h) {
    if (h.nonempty_bins() < 2)
        throw DegenerateHistogramError("otsu needs >= 2 nonempty bins");

    const double total = static_cast<double>(h.total());
    double total_sum = 0.0;
    for (int i = 0; i < 256; ++i) total_sum += static_cast<double>(i) * h.counts[i];

    // Single cumulative pass; the brute-force oracle in the tests recomputes
    // both class means per candidate instead.
    double w0 = 0.0, sum0 = 0.0;
    double best = -1.0;
    int best_t = 0;
    for (int t = 0; t <= 254; ++t) {
        w0 += static_cast<double>(h.counts[t]);
        sum0 += static_cast<double>(t) * h.counts[t];
        if (w0 == 0.0) continue;
        const double w1 = total - w0;
        if (w1 == 0.0) break;
        const double mu0 = sum0 / w0;
        const double mu1 = (total_sum - sum0) / w1;
        const double d = mu0 - mu1;
        const double between = (w0 / total) * (w1 / total) * d * d;
        if (between > best) { // strict: ties keep the smallest t
            best = between;
            best_t = t;
        }
    }
    return best_t;
}

namespace {

ChannelGrid make_grid(const SlideRaster& r) {
    ChannelGrid g;
    g.width = r.width;
    g.height = r.height;
    g.values.resize(static_cast<size_t>(r.width) * r.height);
    return g;
}

} // namespace

ChannelGrid saturation_channel(const SlideRaster& r) {
    ChannelGrid g = make_grid(r);
    const size_t n = g.values.size();
#pragma omp parallel for schedule(static)
    for (long i = 0; i < static_cast<long>(n); ++i) {
        const uint8_t* p = r.pixels.data() + static_cast<size_t>(i) * 3;
        const int mx = std::max({p[0], p[1], p[2]});
        const int mn = std::min({p[0], p[1], p[2]});
        // round((mx-mn)*255/mx) in integers
        g.values[i] = mx == 0 ? 0 : static_cast<uint8_t>(((mx - mn) * 510 + mx) / (2 * mx));
    }
    std::array<uint64_t, 256> counts{};
    for (size_t i = 0; i < n; ++i) ++counts[g.values[i]];
    g.hist.counts = counts;
    return g;
}

ChannelGrid grayscale_channel(const SlideRaster& r) {
    ChannelGrid g = make_grid(r);
    const size_t n = g.values.size();
#pragma omp parallel for schedule(static)
    for (long i = 0; i < static_cast<long>(n); ++i) {
        const uint8_t* p = r.pixels.data() + static_cast<size_t>(i) * 3;
        // Rec.601 luma, fixed-point with rounding.
        const int y = (299 * p[0] + 587 * p[1] + 114 * p[2] + 500) / 1000;
        g.values[i] = static_cast<uint8_t>(y);
    }
    std::array<uint64_t, 256> counts{};
    for (size_t i = 0; i < n; ++i) ++counts[g.values[i]];
    g.hist.counts = counts;
    return g;
}

void fill_holes(BinaryMask& m) {
    const int w = m.width, h = m.height;
    // Flood background from the border with 4-connectivity; anything
    // background that was never reached is an enclosed hole.
    std::vector<uint8_t> reached(m.bits.size(), 0);
    std::vector<int> stack;
    auto push = [&](int x, int y) {
        const size_t i = static_cast<size_t>(y) * w + x;
        if (!reached[i] && m.bits[i] == 0) {
            reached[i] = 1;
            stack.push_back(static_cast<int>(i));
        }
    };
    for (int x = 0; x < w; ++x) {
        push(x, 0);
        push(x, h - 1);
    }
    for (int y = 0; y < h; ++y) {
        push(0, y);
        push(w - 1, y);
    }
    while (!stack.empty()) {
        const int i = stack.back();
        stack.pop_back();
        const int x = i % w, y = i / w;
        if (x > 0) push(x - 1, y);
        if (x + 1 < w) push(x + 1, y);
        if (y > 0) push(x, y - 1);
        if (y + 1 < h) push(x, y + 1);
    }
    for (size_t i = 0; i < m.bits.size(); ++i)
        if (m.bits[i] == 0 && !reached[i]) m.bits[i] = 1;
}

RoiResult tissue_mask(const SlideRaster& r, RoiChannel channel) {
    r.validate();
    ChannelGrid g = channel == RoiChannel::saturation ? saturation_channel(r)
                                                      : grayscale_channel(r);
    RoiResult res;
    res.channel = channel;
    res.tissue = BinaryMask(r.width, r.height);

    int level = 0;
    try {
        level = otsu_threshold(g.hist);
    } catch (const DegenerateHistogramError&) {
        // Blank slide: negative slides must keep flowing through the pipeline.
        res.otsu_level = 0;
        res.degenerate = true;
        return res;
    }
    res.otsu_level = level;

    const size_t n = g.values.size();
    if (channel == RoiChannel::saturation) {
        for (size_t i = 0; i < n; ++i) res.tissue.bits[i] = g.values[i] > level ? 1 : 0;
    } else {
        // Tissue is darker than glass on a luma channel.
        for (size_t i = 0; i < n; ++i) res.tissue.bits[i] = g.values[i] <= level ? 1 : 0;
    }
    fill_holes(res.tissue);
    return res;
}

} // namespace metaseg
