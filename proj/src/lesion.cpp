#include "metaseg/lesion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "metaseg/errors.hpp"

namespace metaseg {

BinaryMask binarize(const ProbabilityMap& m, double t) {
    if (!(t > 0.0 && t < 1.0))
        throw ParameterError("binarize threshold must be in (0,1)");
    BinaryMask out(m.width, m.height);
    const float tf = static_cast<float>(t);
    const size_t n = m.values.size();
    for (size_t i = 0; i < n; ++i) out.bits[i] = m.values[i] >= tf ? 1 : 0;
    return out;
}

ProbabilityMap box3_filter(const ProbabilityMap& m) {
    ProbabilityMap out(m.width, m.height, m.mpp);
    const int w = m.width, h = m.height;
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double s = 0.0;
            for (int dy = -1; dy <= 1; ++dy) {
                const int yy = std::clamp(y + dy, 0, h - 1);
                for (int dx = -1; dx <= 1; ++dx) {
                    const int xx = std::clamp(x + dx, 0, w - 1);
                    s += m.at(xx, yy);
                }
            }
            out.at(x, y) = static_cast<float>(s / 9.0);
        }
    }
    return out;
}

namespace {

int uf_find(std::vector<int32_t>& parent, int32_t a) {
    while (parent[a] != a) {
        parent[a] = parent[parent[a]];
        a = parent[a];
    }
    return a;
}

void uf_union(std::vector<int32_t>& parent, int32_t a, int32_t b) {
    a = uf_find(parent, a);
    b = uf_find(parent, b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
}

} // namespace

ComponentSet connected_components(const BinaryMask& mask) {
    const int w = mask.width, h = mask.height;
    ComponentSet cs;
    cs.width = w;
    cs.height = h;
    cs.labels.assign(static_cast<size_t>(w) * h, 0);
    if (w == 0 || h == 0) return cs;

    // First pass: provisional labels, merging with the W/NW/N/NE neighbors.
    std::vector<int32_t> parent;
    parent.push_back(0); // label 0 reserved for background
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const size_t i = static_cast<size_t>(y) * w + x;
            if (!mask.bits[i]) continue;
            int32_t lbl = 0;
            auto adopt = [&](int nx, int ny) {
                if (nx < 0 || ny < 0 || nx >= w) return;
                const int32_t nl = cs.labels[static_cast<size_t>(ny) * w + nx];
                if (nl == 0) return;
                if (lbl == 0) lbl = nl;
                else uf_union(parent, lbl, nl);
            };
            adopt(x - 1, y);
            adopt(x - 1, y - 1);
            adopt(x, y - 1);
            adopt(x + 1, y - 1);
            if (lbl == 0) {
                lbl = static_cast<int32_t>(parent.size());
                parent.push_back(lbl);
            }
            cs.labels[i] = lbl;
        }
    }

    // Second pass: resolve roots, then renumber densely in row-major
    // first-pixel order.
    std::vector<int32_t> dense(parent.size(), 0);
    int next = 0;
    for (size_t i = 0; i < cs.labels.size(); ++i) {
        if (cs.labels[i] == 0) continue;
        const int root = uf_find(parent, cs.labels[i]);
        if (dense[root] == 0) dense[root] = ++next;
        cs.labels[i] = dense[root];
    }
    cs.count = next;
    return cs;
}

namespace {

double max_pairwise_sq(const std::vector<PixelCoord>& pts) {
    double best = 0.0;
    for (size_t i = 0; i < pts.size(); ++i) {
        for (size_t j = i + 1; j < pts.size(); ++j) {
            const double dx = pts[i].x - pts[j].x;
            const double dy = pts[i].y - pts[j].y;
            best = std::max(best, dx * dx + dy * dy);
        }
    }
    return best;
}

long cross(const PixelCoord& o, const PixelCoord& a, const PixelCoord& b) {
    return static_cast<long>(a.x - o.x) * (b.y - o.y) -
           static_cast<long>(a.y - o.y) * (b.x - o.x);
}

// Andrew monotone chain on strictly convex positions.
std::vector<PixelCoord> convex_hull(std::vector<PixelCoord> pts) {
    std::sort(pts.begin(), pts.end(), [](const PixelCoord& a, const PixelCoord& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const PixelCoord& a, const PixelCoord& b) {
                              return a.x == b.x && a.y == b.y;
                          }),
              pts.end());
    const size_t n = pts.size();
    if (n < 3) return pts;
    std::vector<PixelCoord> hull(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    const size_t lower = k + 1;
    for (size_t i = n - 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

// Pixels with a 4-neighbor outside the region; hull vertices are always here.
std::vector<PixelCoord> boundary_pixels(const std::vector<PixelCoord>& pixels) {
    int x0 = pixels[0].x, x1 = pixels[0].x, y0 = pixels[0].y, y1 = pixels[0].y;
    for (const auto& p : pixels) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    const int bw = x1 - x0 + 1, bh = y1 - y0 + 1;
    std::vector<uint8_t> grid(static_cast<size_t>(bw) * bh, 0);
    for (const auto& p : pixels)
        grid[static_cast<size_t>(p.y - y0) * bw + (p.x - x0)] = 1;
    auto inside = [&](int x, int y) {
        return x >= 0 && y >= 0 && x < bw && y < bh &&
               grid[static_cast<size_t>(y) * bw + x] != 0;
    };
    std::vector<PixelCoord> out;
    for (const auto& p : pixels) {
        const int lx = p.x - x0, ly = p.y - y0;
        if (!inside(lx - 1, ly) || !inside(lx + 1, ly) || !inside(lx, ly - 1) ||
            !inside(lx, ly + 1))
            out.push_back(p);
    }
    return out;
}

} // namespace

double region_diameter_px(const std::vector<PixelCoord>& pixels) {
    if (pixels.empty()) throw ParameterError("empty region");
    if (pixels.size() == 1) return 0.0;
    if (pixels.size() <= 4096) return std::sqrt(max_pairwise_sq(pixels));
    const auto hull = convex_hull(boundary_pixels(pixels));
    return std::sqrt(max_pairwise_sq(hull));
}

Lesion measure_lesion(const std::vector<PixelCoord>& pixels, double mpp) {
    if (pixels.empty()) throw ParameterError("cannot measure an empty region");
    if (mpp <= 0.0) throw ParameterError("mpp must be positive");
    Lesion l;
    l.pixel_count = static_cast<int64_t>(pixels.size());
    l.x0 = l.x1 = pixels[0].x;
    l.y0 = l.y1 = pixels[0].y;
    for (const auto& p : pixels) {
        l.x0 = std::min(l.x0, p.x);
        l.x1 = std::max(l.x1, p.x);
        l.y0 = std::min(l.y0, p.y);
        l.y1 = std::max(l.y1, p.y);
    }
    // +1 pixel so a single pixel has the extent of its own footprint.
    l.diameter_mm = (region_diameter_px(pixels) + 1.0) * mpp / 1000.0;
    const double px_mm = mpp / 1000.0;
    l.area_mm2 = static_cast<double>(l.pixel_count) * px_mm * px_mm;
    return l;
}

LesionGrade grade_lesion(double diameter_mm) {
    if (diameter_mm > 2.0) return LesionGrade::macro;
    if (diameter_mm > 0.2) return LesionGrade::micro;
    return LesionGrade::itc;
}

std::vector<Lesion> extract_lesions(const ProbabilityMap& m, const PostConfig& cfg) {
    const ProbabilityMap* src = &m;
    ProbabilityMap smoothed;
    if (cfg.smoothing == Smoothing::box3) {
        smoothed = box3_filter(m);
        src = &smoothed;
    }
    const BinaryMask mask = binarize(*src, cfg.threshold);
    const ComponentSet cs = connected_components(mask);

    std::vector<std::vector<PixelCoord>> regions(cs.count);
    std::vector<double> prob_sum(cs.count, 0.0);
    for (int y = 0; y < cs.height; ++y) {
        for (int x = 0; x < cs.width; ++x) {
            const int32_t lbl = cs.labels[static_cast<size_t>(y) * cs.width + x];
            if (lbl == 0) continue;
            regions[lbl - 1].push_back({x, y});
            prob_sum[lbl - 1] += src->at(x, y);
        }
    }

    std::vector<Lesion> lesions;
    lesions.reserve(regions.size());
    for (size_t i = 0; i < regions.size(); ++i) {
        Lesion l = measure_lesion(regions[i], static_cast<double>(m.mpp));
        l.mean_prob = prob_sum[i] / static_cast<double>(l.pixel_count);
        l.grade = grade_lesion(l.diameter_mm);
        lesions.push_back(l);
    }
    // Stable: equal areas keep component (first-pixel) order.
    std::stable_sort(lesions.begin(), lesions.end(),
                     [](const Lesion& a, const Lesion& b) {
                         return a.pixel_count > b.pixel_count;
                     });
    return lesions;
}

} // namespace metaseg
