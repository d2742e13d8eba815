#include "metaseg/net/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace metaseg::kernels {

namespace {

template <typename T>
inline size_t plane(int h, int wd) {
    return static_cast<size_t>(h) * wd;
}

} // namespace

template <typename T>
void conv_forward(const T* in, const T* w, const T* bias, T* out,
                  int n, int cin, int cout, int h, int wd, int k) {
    const int pad = (k - 1) / 2;
    const size_t pl = plane<T>(h, wd);
#pragma omp parallel
    {
        std::vector<T> acc(wd);
#pragma omp for collapse(3) schedule(static)
        for (int ni = 0; ni < n; ++ni) {
            for (int oc = 0; oc < cout; ++oc) {
                for (int y = 0; y < h; ++y) {
                    std::fill(acc.begin(), acc.end(), T(0));
                    for (int ky = 0; ky < k; ++ky) {
                        const int iy = y + ky - pad;
                        if (iy < 0 || iy >= h) continue;
                        for (int ic = 0; ic < cin; ++ic) {
                            const T* inrow =
                                in + (static_cast<size_t>(ni) * cin + ic) * pl +
                                static_cast<size_t>(iy) * wd;
                            const T* wrow =
                                w + ((static_cast<size_t>(oc) * cin + ic) * k + ky) * k;
                            for (int kx = 0; kx < k; ++kx) {
                                const T wv = wrow[kx];
                                const int shift = kx - pad;
                                const int x0 = std::max(0, -shift);
                                const int x1 = std::min(wd, wd - shift);
                                const T* ip = inrow + shift;
                                for (int x = x0; x < x1; ++x) acc[x] += wv * ip[x];
                            }
                        }
                    }
                    const T bv = bias[oc];
                    T* orow = out + (static_cast<size_t>(ni) * cout + oc) * pl +
                              static_cast<size_t>(y) * wd;
                    for (int x = 0; x < wd; ++x) orow[x] = acc[x] + bv;
                }
            }
        }
    }
}

template <typename T>
void conv_backward_input(const T* gout, const T* w, T* gin,
                         int n, int cin, int cout, int h, int wd, int k) {
    const int pad = (k - 1) / 2;
    const size_t pl = plane<T>(h, wd);
#pragma omp parallel
    {
        std::vector<T> acc(wd);
#pragma omp for collapse(3) schedule(static)
        for (int ni = 0; ni < n; ++ni) {
            for (int ic = 0; ic < cin; ++ic) {
                for (int iy = 0; iy < h; ++iy) {
                    std::fill(acc.begin(), acc.end(), T(0));
                    for (int ky = 0; ky < k; ++ky) {
                        const int oy = iy - ky + pad;
                        if (oy < 0 || oy >= h) continue;
                        for (int oc = 0; oc < cout; ++oc) {
                            const T* grow =
                                gout + (static_cast<size_t>(ni) * cout + oc) * pl +
                                static_cast<size_t>(oy) * wd;
                            const T* wrow =
                                w + ((static_cast<size_t>(oc) * cin + ic) * k + ky) * k;
                            for (int kx = 0; kx < k; ++kx) {
                                const T wv = wrow[kx];
                                const int shift = pad - kx; // ox = ix + shift
                                const int x0 = std::max(0, -shift);
                                const int x1 = std::min(wd, wd - shift);
                                const T* gp = grow + shift;
                                for (int x = x0; x < x1; ++x) acc[x] += wv * gp[x];
                            }
                        }
                    }
                    T* grow_in = gin + (static_cast<size_t>(ni) * cin + ic) * pl +
                                 static_cast<size_t>(iy) * wd;
                    for (int x = 0; x < wd; ++x) grow_in[x] = acc[x];
                }
            }
        }
    }
}

template <typename T>
void conv_backward_params(const T* in, const T* gout, T* gw, T* gb,
                          int n, int cin, int cout, int h, int wd, int k) {
    const int pad = (k - 1) / 2;
    const size_t pl = plane<T>(h, wd);
#pragma omp parallel for collapse(2) schedule(static)
    for (int oc = 0; oc < cout; ++oc) {
        for (int ic = 0; ic < cin; ++ic) {
            std::vector<T> kacc(static_cast<size_t>(k) * k, T(0));
            for (int ni = 0; ni < n; ++ni) {
                const T* gplane = gout + (static_cast<size_t>(ni) * cout + oc) * pl;
                const T* iplane = in + (static_cast<size_t>(ni) * cin + ic) * pl;
                for (int oy = 0; oy < h; ++oy) {
                    const T* grow = gplane + static_cast<size_t>(oy) * wd;
                    for (int ky = 0; ky < k; ++ky) {
                        const int iy = oy + ky - pad;
                        if (iy < 0 || iy >= h) continue;
                        const T* irow = iplane + static_cast<size_t>(iy) * wd;
                        for (int kx = 0; kx < k; ++kx) {
                            const int shift = kx - pad;
                            const int x0 = std::max(0, -shift);
                            const int x1 = std::min(wd, wd - shift);
                            const T* ip = irow + shift;
                            T s = T(0);
                            for (int x = x0; x < x1; ++x) s += grow[x] * ip[x];
                            kacc[static_cast<size_t>(ky) * k + kx] += s;
                        }
                    }
                }
            }
            T* gw_base = gw + (static_cast<size_t>(oc) * cin + ic) * k * k;
            for (int i = 0; i < k * k; ++i) gw_base[i] += kacc[i];
        }
    }
#pragma omp parallel for schedule(static)
    for (int oc = 0; oc < cout; ++oc) {
        T s = T(0);
        for (int ni = 0; ni < n; ++ni) {
            const T* gplane = gout + (static_cast<size_t>(ni) * cout + oc) * pl;
            for (size_t i = 0; i < pl; ++i) s += gplane[i];
        }
        gb[oc] += s;
    }
}

template <typename T>
void upconv_forward(const T* in, const T* w, const T* bias, T* out,
                    int n, int cin, int cout, int h, int wd) {
    const int oh = 2 * h, ow = 2 * wd;
    const size_t ipl = plane<T>(h, wd), opl = plane<T>(oh, ow);
#pragma omp parallel for collapse(2) schedule(static)
    for (int ni = 0; ni < n; ++ni) {
        for (int oc = 0; oc < cout; ++oc) {
            T* oplane = out + (static_cast<size_t>(ni) * cout + oc) * opl;
            const T bv = bias[oc];
            for (size_t i = 0; i < opl; ++i) oplane[i] = bv;
            for (int ic = 0; ic < cin; ++ic) {
                const T* iplane = in + (static_cast<size_t>(ni) * cin + ic) * ipl;
                const T* wq = w + (static_cast<size_t>(ic) * cout + oc) * 4;
                for (int y = 0; y < h; ++y) {
                    const T* irow = iplane + static_cast<size_t>(y) * wd;
                    T* orow0 = oplane + static_cast<size_t>(2 * y) * ow;
                    T* orow1 = orow0 + ow;
                    for (int x = 0; x < wd; ++x) {
                        const T v = irow[x];
                        orow0[2 * x] += v * wq[0];
                        orow0[2 * x + 1] += v * wq[1];
                        orow1[2 * x] += v * wq[2];
                        orow1[2 * x + 1] += v * wq[3];
                    }
                }
            }
        }
    }
}

template <typename T>
void upconv_backward_input(const T* gout, const T* w, T* gin,
                           int n, int cin, int cout, int h, int wd) {
    const int oh = 2 * h, ow = 2 * wd;
    const size_t ipl = plane<T>(h, wd), opl = plane<T>(oh, ow);
#pragma omp parallel for collapse(2) schedule(static)
    for (int ni = 0; ni < n; ++ni) {
        for (int ic = 0; ic < cin; ++ic) {
            T* iplane = gin + (static_cast<size_t>(ni) * cin + ic) * ipl;
            for (size_t i = 0; i < ipl; ++i) iplane[i] = T(0);
            for (int oc = 0; oc < cout; ++oc) {
                const T* oplane = gout + (static_cast<size_t>(ni) * cout + oc) * opl;
                const T* wq = w + (static_cast<size_t>(ic) * cout + oc) * 4;
                for (int y = 0; y < h; ++y) {
                    T* irow = iplane + static_cast<size_t>(y) * wd;
                    const T* orow0 = oplane + static_cast<size_t>(2 * y) * ow;
                    const T* orow1 = orow0 + ow;
                    for (int x = 0; x < wd; ++x) {
                        irow[x] += orow0[2 * x] * wq[0] + orow0[2 * x + 1] * wq[1] +
                                   orow1[2 * x] * wq[2] + orow1[2 * x + 1] * wq[3];
                    }
                }
            }
        }
    }
}

template <typename T>
void upconv_backward_params(const T* in, const T* gout, T* gw, T* gb,
                            int n, int cin, int cout, int h, int wd) {
    const int oh = 2 * h, ow = 2 * wd;
    const size_t ipl = plane<T>(h, wd), opl = plane<T>(oh, ow);
#pragma omp parallel for collapse(2) schedule(static)
    for (int ic = 0; ic < cin; ++ic) {
        for (int oc = 0; oc < cout; ++oc) {
            T q0 = T(0), q1 = T(0), q2 = T(0), q3 = T(0);
            for (int ni = 0; ni < n; ++ni) {
                const T* iplane = in + (static_cast<size_t>(ni) * cin + ic) * ipl;
                const T* oplane = gout + (static_cast<size_t>(ni) * cout + oc) * opl;
                for (int y = 0; y < h; ++y) {
                    const T* irow = iplane + static_cast<size_t>(y) * wd;
                    const T* orow0 = oplane + static_cast<size_t>(2 * y) * ow;
                    const T* orow1 = orow0 + ow;
                    for (int x = 0; x < wd; ++x) {
                        const T v = irow[x];
                        q0 += v * orow0[2 * x];
                        q1 += v * orow0[2 * x + 1];
                        q2 += v * orow1[2 * x];
                        q3 += v * orow1[2 * x + 1];
                    }
                }
            }
            T* wq = gw + (static_cast<size_t>(ic) * cout + oc) * 4;
            wq[0] += q0;
            wq[1] += q1;
            wq[2] += q2;
            wq[3] += q3;
        }
    }
#pragma omp parallel for schedule(static)
    for (int oc = 0; oc < cout; ++oc) {
        T s = T(0);
        for (int ni = 0; ni < n; ++ni) {
            const T* oplane = gout + (static_cast<size_t>(ni) * cout + oc) * opl;
            for (size_t i = 0; i < opl; ++i) s += oplane[i];
        }
        gb[oc] += s;
    }
}

template <typename T>
void maxpool_forward(const T* in, T* out, uint8_t* argmax,
                     int n, int c, int h, int wd) {
    const int oh = h / 2, ow = wd / 2;
    const size_t ipl = plane<T>(h, wd), opl = plane<T>(oh, ow);
#pragma omp parallel for collapse(2) schedule(static)
    for (int ni = 0; ni < n; ++ni) {
        for (int ci = 0; ci < c; ++ci) {
            const T* iplane = in + (static_cast<size_t>(ni) * c + ci) * ipl;
            T* oplane = out + (static_cast<size_t>(ni) * c + ci) * opl;
            uint8_t* aplane = argmax + (static_cast<size_t>(ni) * c + ci) * opl;
            for (int y = 0; y < oh; ++y) {
                const T* r0 = iplane + static_cast<size_t>(2 * y) * wd;
                const T* r1 = r0 + wd;
                for (int x = 0; x < ow; ++x) {
                    T best = r0[2 * x];
                    uint8_t arg = 0;
                    if (r0[2 * x + 1] > best) { best = r0[2 * x + 1]; arg = 1; }
                    if (r1[2 * x] > best) { best = r1[2 * x]; arg = 2; }
                    if (r1[2 * x + 1] > best) { best = r1[2 * x + 1]; arg = 3; }
                    oplane[static_cast<size_t>(y) * ow + x] = best;
                    aplane[static_cast<size_t>(y) * ow + x] = arg;
                }
            }
        }
    }
}

template <typename T>
void maxpool_backward(const T* gout, const uint8_t* argmax, T* gin,
                      int n, int c, int h, int wd) {
    const int oh = h / 2, ow = wd / 2;
    const size_t ipl = plane<T>(h, wd), opl = plane<T>(oh, ow);
#pragma omp parallel for collapse(2) schedule(static)
    for (int ni = 0; ni < n; ++ni) {
        for (int ci = 0; ci < c; ++ci) {
            T* iplane = gin + (static_cast<size_t>(ni) * c + ci) * ipl;
            for (size_t i = 0; i < ipl; ++i) iplane[i] = T(0);
            const T* oplane = gout + (static_cast<size_t>(ni) * c + ci) * opl;
            const uint8_t* aplane = argmax + (static_cast<size_t>(ni) * c + ci) * opl;
            for (int y = 0; y < oh; ++y) {
                for (int x = 0; x < ow; ++x) {
                    const uint8_t a = aplane[static_cast<size_t>(y) * ow + x];
                    const int iy = 2 * y + (a >> 1), ix = 2 * x + (a & 1);
                    iplane[static_cast<size_t>(iy) * wd + ix] =
                        oplane[static_cast<size_t>(y) * ow + x];
                }
            }
        }
    }
}

template <typename T>
void relu_forward(T* x, size_t count) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < static_cast<long>(count); ++i)
        x[i] = x[i] > T(0) ? x[i] : T(0);
}

template <typename T>
void relu_backward(const T* out, T* g, size_t count) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < static_cast<long>(count); ++i)
        if (out[i] <= T(0)) g[i] = T(0);
}

template <typename T>
void bn_forward_train(const T* in, const T* gamma, const T* beta, T* out,
                      T* xhat, T* mean, T* var,
                      int n, int c, int h, int wd, T eps) {
    const size_t pl = plane<T>(h, wd);
    const double m = static_cast<double>(n) * h * wd;
#pragma omp parallel for schedule(static)
    for (int ci = 0; ci < c; ++ci) {
        double s = 0.0;
        for (int ni = 0; ni < n; ++ni) {
            const T* p = in + (static_cast<size_t>(ni) * c + ci) * pl;
            for (size_t i = 0; i < pl; ++i) s += static_cast<double>(p[i]);
        }
        const double mu = s / m;
        double sv = 0.0;
        for (int ni = 0; ni < n; ++ni) {
            const T* p = in + (static_cast<size_t>(ni) * c + ci) * pl;
            for (size_t i = 0; i < pl; ++i) {
                const double d = static_cast<double>(p[i]) - mu;
                sv += d * d;
            }
        }
        const double v = sv / m;
        mean[ci] = static_cast<T>(mu);
        var[ci] = static_cast<T>(v);
        const T invstd = static_cast<T>(1.0 / std::sqrt(v + static_cast<double>(eps)));
        const T g = gamma[ci], b = beta[ci], mu_t = static_cast<T>(mu);
        for (int ni = 0; ni < n; ++ni) {
            const size_t base = (static_cast<size_t>(ni) * c + ci) * pl;
            const T* p = in + base;
            T* xh = xhat + base;
            T* o = out + base;
            for (size_t i = 0; i < pl; ++i) {
                const T z = (p[i] - mu_t) * invstd;
                xh[i] = z;
                o[i] = g * z + b;
            }
        }
    }
}

template <typename T>
void bn_forward_eval(const T* in, const T* gamma, const T* beta,
                     const T* rmean, const T* rvar, T* out,
                     int n, int c, int h, int wd, T eps) {
    const size_t pl = plane<T>(h, wd);
#pragma omp parallel for collapse(2) schedule(static)
    for (int ni = 0; ni < n; ++ni) {
        for (int ci = 0; ci < c; ++ci) {
            const T invstd = static_cast<T>(
                1.0 / std::sqrt(static_cast<double>(rvar[ci]) + static_cast<double>(eps)));
            const T g = gamma[ci], b = beta[ci], mu = rmean[ci];
            const size_t base = (static_cast<size_t>(ni) * c + ci) * pl;
            const T* p = in + base;
            T* o = out + base;
            for (size_t i = 0; i < pl; ++i) o[i] = g * (p[i] - mu) * invstd + b;
        }
    }
}

template <typename T>
void bn_backward(const T* gout, const T* xhat, const T* gamma, const T* var,
                 T* gin, T* ggamma, T* gbeta,
                 int n, int c, int h, int wd, T eps) {
    const size_t pl = plane<T>(h, wd);
    const double m = static_cast<double>(n) * h * wd;
#pragma omp parallel for schedule(static)
    for (int ci = 0; ci < c; ++ci) {
        double sg = 0.0, sgx = 0.0;
        for (int ni = 0; ni < n; ++ni) {
            const size_t base = (static_cast<size_t>(ni) * c + ci) * pl;
            const T* g = gout + base;
            const T* xh = xhat + base;
            for (size_t i = 0; i < pl; ++i) {
                sg += static_cast<double>(g[i]);
                sgx += static_cast<double>(g[i]) * static_cast<double>(xh[i]);
            }
        }
        gbeta[ci] += static_cast<T>(sg);
        ggamma[ci] += static_cast<T>(sgx);
        const double invstd =
            1.0 / std::sqrt(static_cast<double>(var[ci]) + static_cast<double>(eps));
        const T k = static_cast<T>(static_cast<double>(gamma[ci]) * invstd);
        const T mean_g = static_cast<T>(sg / m);
        const T mean_gx = static_cast<T>(sgx / m);
        for (int ni = 0; ni < n; ++ni) {
            const size_t base = (static_cast<size_t>(ni) * c + ci) * pl;
            const T* g = gout + base;
            const T* xh = xhat + base;
            T* gi = gin + base;
            for (size_t i = 0; i < pl; ++i)
                gi[i] = k * (g[i] - mean_g - xh[i] * mean_gx);
        }
    }
}

template <typename T>
void sigmoid_forward(const T* in, T* out, size_t count) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < static_cast<long>(count); ++i)
        out[i] = T(1) / (T(1) + std::exp(-in[i]));
}

namespace serial {

template <typename T>
void conv_forward(const T* in, const T* w, const T* bias, T* out,
                  int n, int cin, int cout, int h, int wd, int k) {
    const int pad = (k - 1) / 2;
    auto in_at = [&](int ni, int ci, int y, int x) {
        return in[((static_cast<size_t>(ni) * cin + ci) * h + y) * wd + x];
    };
    for (int ni = 0; ni < n; ++ni)
        for (int oc = 0; oc < cout; ++oc)
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < wd; ++x) {
                    T s = bias[oc];
                    for (int ic = 0; ic < cin; ++ic)
                        for (int ky = 0; ky < k; ++ky)
                            for (int kx = 0; kx < k; ++kx) {
                                const int iy = y + ky - pad, ix = x + kx - pad;
                                if (iy < 0 || iy >= h || ix < 0 || ix >= wd) continue;
                                s += w[((static_cast<size_t>(oc) * cin + ic) * k + ky) * k + kx] *
                                     in_at(ni, ic, iy, ix);
                            }
                    out[((static_cast<size_t>(ni) * cout + oc) * h + y) * wd + x] = s;
                }
}

template <typename T>
void conv_backward_input(const T* gout, const T* w, T* gin,
                         int n, int cin, int cout, int h, int wd, int k) {
    const int pad = (k - 1) / 2;
    for (int ni = 0; ni < n; ++ni)
        for (int ic = 0; ic < cin; ++ic)
            for (int iy = 0; iy < h; ++iy)
                for (int ix = 0; ix < wd; ++ix) {
                    T s = T(0);
                    for (int oc = 0; oc < cout; ++oc)
                        for (int ky = 0; ky < k; ++ky)
                            for (int kx = 0; kx < k; ++kx) {
                                const int oy = iy - ky + pad, ox = ix - kx + pad;
                                if (oy < 0 || oy >= h || ox < 0 || ox >= wd) continue;
                                s += gout[((static_cast<size_t>(ni) * cout + oc) * h + oy) * wd + ox] *
                                     w[((static_cast<size_t>(oc) * cin + ic) * k + ky) * k + kx];
                            }
                    gin[((static_cast<size_t>(ni) * cin + ic) * h + iy) * wd + ix] = s;
                }
}

template <typename T>
void conv_backward_params(const T* in, const T* gout, T* gw, T* gb,
                          int n, int cin, int cout, int h, int wd, int k) {
    const int pad = (k - 1) / 2;
    for (int oc = 0; oc < cout; ++oc) {
        for (int ic = 0; ic < cin; ++ic)
            for (int ky = 0; ky < k; ++ky)
                for (int kx = 0; kx < k; ++kx) {
                    T s = T(0);
                    for (int ni = 0; ni < n; ++ni)
                        for (int oy = 0; oy < h; ++oy)
                            for (int ox = 0; ox < wd; ++ox) {
                                const int iy = oy + ky - pad, ix = ox + kx - pad;
                                if (iy < 0 || iy >= h || ix < 0 || ix >= wd) continue;
                                s += gout[((static_cast<size_t>(ni) * cout + oc) * h + oy) * wd + ox] *
                                     in[((static_cast<size_t>(ni) * cin + ic) * h + iy) * wd + ix];
                            }
                    gw[((static_cast<size_t>(oc) * cin + ic) * k + ky) * k + kx] += s;
                }
        T s = T(0);
        for (int ni = 0; ni < n; ++ni)
            for (int oy = 0; oy < h; ++oy)
                for (int ox = 0; ox < wd; ++ox)
                    s += gout[((static_cast<size_t>(ni) * cout + oc) * h + oy) * wd + ox];
        gb[oc] += s;
    }
}

template <typename T>
void upconv_forward(const T* in, const T* w, const T* bias, T* out,
                    int n, int cin, int cout, int h, int wd) {
    const int oh = 2 * h, ow = 2 * wd;
    for (int ni = 0; ni < n; ++ni)
        for (int oc = 0; oc < cout; ++oc)
            for (int oy = 0; oy < oh; ++oy)
                for (int ox = 0; ox < ow; ++ox) {
                    T s = bias[oc];
                    const int y = oy / 2, x = ox / 2;
                    const int dy = oy & 1, dx = ox & 1;
                    for (int ic = 0; ic < cin; ++ic)
                        s += in[((static_cast<size_t>(ni) * cin + ic) * h + y) * wd + x] *
                             w[(static_cast<size_t>(ic) * cout + oc) * 4 + dy * 2 + dx];
                    out[((static_cast<size_t>(ni) * cout + oc) * oh + oy) * ow + ox] = s;
                }
}

template <typename T>
void maxpool_forward(const T* in, T* out, uint8_t* argmax,
                     int n, int c, int h, int wd) {
    const int oh = h / 2, ow = wd / 2;
    for (int ni = 0; ni < n; ++ni)
        for (int ci = 0; ci < c; ++ci)
            for (int y = 0; y < oh; ++y)
                for (int x = 0; x < ow; ++x) {
                    T best{};
                    uint8_t arg = 0;
                    bool first = true;
                    for (int dy = 0; dy < 2; ++dy)
                        for (int dx = 0; dx < 2; ++dx) {
                            const T v = in[((static_cast<size_t>(ni) * c + ci) * h +
                                            2 * y + dy) * wd + 2 * x + dx];
                            if (first || v > best) {
                                best = v;
                                arg = static_cast<uint8_t>(dy * 2 + dx);
                                first = false;
                            }
                        }
                    out[((static_cast<size_t>(ni) * c + ci) * oh + y) * ow + x] = best;
                    argmax[((static_cast<size_t>(ni) * c + ci) * oh + y) * ow + x] = arg;
                }
}

template <typename T>
void bn_forward_train(const T* in, const T* gamma, const T* beta, T* out,
                      T* xhat, T* mean, T* var,
                      int n, int c, int h, int wd, T eps) {
    const size_t pl = static_cast<size_t>(h) * wd;
    const double m = static_cast<double>(n) * h * wd;
    for (int ci = 0; ci < c; ++ci) {
        double s = 0.0;
        for (int ni = 0; ni < n; ++ni) {
            const T* p = in + (static_cast<size_t>(ni) * c + ci) * pl;
            for (size_t i = 0; i < pl; ++i) s += static_cast<double>(p[i]);
        }
        const double mu = s / m;
        double sv = 0.0;
        for (int ni = 0; ni < n; ++ni) {
            const T* p = in + (static_cast<size_t>(ni) * c + ci) * pl;
            for (size_t i = 0; i < pl; ++i) {
                const double d = static_cast<double>(p[i]) - mu;
                sv += d * d;
            }
        }
        const double v = sv / m;
        mean[ci] = static_cast<T>(mu);
        var[ci] = static_cast<T>(v);
        const double invstd = 1.0 / std::sqrt(v + static_cast<double>(eps));
        for (int ni = 0; ni < n; ++ni) {
            const size_t base = (static_cast<size_t>(ni) * c + ci) * pl;
            for (size_t i = 0; i < pl; ++i) {
                const double z = (static_cast<double>(in[base + i]) - mu) * invstd;
                xhat[base + i] = static_cast<T>(z);
                out[base + i] = static_cast<T>(static_cast<double>(gamma[ci]) * z +
                                               static_cast<double>(beta[ci]));
            }
        }
    }
}

#define METASEG_INSTANTIATE_SERIAL(T)                                                  \
    template void conv_forward<T>(const T*, const T*, const T*, T*, int, int, int,     \
                                  int, int, int);                                      \
    template void conv_backward_input<T>(const T*, const T*, T*, int, int, int, int,   \
                                         int, int);                                    \
    template void conv_backward_params<T>(const T*, const T*, T*, T*, int, int, int,   \
                                          int, int, int);                              \
    template void upconv_forward<T>(const T*, const T*, const T*, T*, int, int, int,   \
                                    int, int);                                         \
    template void maxpool_forward<T>(const T*, T*, uint8_t*, int, int, int, int);      \
    template void bn_forward_train<T>(const T*, const T*, const T*, T*, T*, T*, T*,    \
                                      int, int, int, int, T);

METASEG_INSTANTIATE_SERIAL(float)
METASEG_INSTANTIATE_SERIAL(double)

} // namespace serial

#define METASEG_INSTANTIATE_KERNELS(T)                                                 \
    template void conv_forward<T>(const T*, const T*, const T*, T*, int, int, int,     \
                                  int, int, int);                                      \
    template void conv_backward_input<T>(const T*, const T*, T*, int, int, int, int,   \
                                         int, int);                                    \
    template void conv_backward_params<T>(const T*, const T*, T*, T*, int, int, int,   \
                                          int, int, int);                              \
    template void upconv_forward<T>(const T*, const T*, const T*, T*, int, int, int,   \
                                    int, int);                                         \
    template void upconv_backward_input<T>(const T*, const T*, T*, int, int, int, int, \
                                           int);                                       \
    template void upconv_backward_params<T>(const T*, const T*, T*, T*, int, int, int, \
                                            int, int);                                 \
    template void maxpool_forward<T>(const T*, T*, uint8_t*, int, int, int, int);      \
    template void maxpool_backward<T>(const T*, const uint8_t*, T*, int, int, int,     \
                                      int);                                            \
    template void relu_forward<T>(T*, size_t);                                         \
    template void relu_backward<T>(const T*, T*, size_t);                              \
    template void bn_forward_train<T>(const T*, const T*, const T*, T*, T*, T*, T*,    \
                                      int, int, int, int, T);                          \
    template void bn_forward_eval<T>(const T*, const T*, const T*, const T*, const T*, \
                                     T*, int, int, int, int, T);                       \
    template void bn_backward<T>(const T*, const T*, const T*, const T*, T*, T*, T*,   \
                                 int, int, int, int, T);                               \
    template void sigmoid_forward<T>(const T*, T*, size_t);

METASEG_INSTANTIATE_KERNELS(float)
METASEG_INSTANTIATE_KERNELS(double)

} // namespace metaseg::kernels
