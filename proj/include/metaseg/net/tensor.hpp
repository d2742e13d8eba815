#pragma once

#include <cstddef>
#include <vector>

namespace metaseg {

// Dense 4-D array in (batch, channel, height, width) order, row-major.
template <typename T>
struct Tensor4 {
    int n = 0, c = 0, h = 0, w = 0;
    std::vector<T> v;

    Tensor4() = default;
    Tensor4(int n_, int c_, int h_, int w_)
        : n(n_), c(c_), h(h_), w(w_),
          v(static_cast<size_t>(n_) * c_ * h_ * w_, T(0)) {}

    size_t size() const { return v.size(); }
    T* data() { return v.data(); }
    const T* data() const { return v.data(); }

    T& at(int ni, int ci, int yi, int xi) {
        return v[((static_cast<size_t>(ni) * c + ci) * h + yi) * w + xi];
    }
    T at(int ni, int ci, int yi, int xi) const {
        return v[((static_cast<size_t>(ni) * c + ci) * h + yi) * w + xi];
    }

    bool same_shape(const Tensor4& o) const {
        return n == o.n && c == o.c && h == o.h && w == o.w;
    }
};

} // namespace metaseg
