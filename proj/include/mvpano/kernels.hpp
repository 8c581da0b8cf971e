#pragma once

#include <algorithm>
#include <cstddef>

namespace mvpano::kernels {

/// Valid output range [lo, hi] for input index ox*stride + off in [0, limit).
inline void output_bounds(int off, int stride, int limit, int out_size, int& lo, int& hi) {
  lo = 0;
  while (lo < out_size && lo * stride + off < 0) ++lo;
  hi = out_size - 1;
  while (hi >= 0 && hi * stride + off >= limit) --hi;
}

/// Direct 2-D convolution, NCHW, zero padding. Accumulation order is fixed
/// (ic, ky, kx) so repeated runs are bit-identical.
template <class T>
void conv2d_forward(T* out, const T* x, const T* w, const T* b, int N, int Cout, int Cin,
                    int H, int W, int KH, int KW, int OH, int OW, int stride, int dil, int pad) {
  const std::size_t x_plane = static_cast<std::size_t>(H) * W;
  const std::size_t o_plane = static_cast<std::size_t>(OH) * OW;
  for (int n = 0; n < N; ++n) {
    for (int oc = 0; oc < Cout; ++oc) {
      T* oplane = out + (static_cast<std::size_t>(n) * Cout + oc) * o_plane;
      const T bias = b ? b[oc] : T(0);
      std::fill(oplane, oplane + o_plane, bias);
      for (int ic = 0; ic < Cin; ++ic) {
        const T* xplane = x + (static_cast<std::size_t>(n) * Cin + ic) * x_plane;
        const T* wrow = w + ((static_cast<std::size_t>(oc) * Cin + ic) * KH) * KW;
        for (int ky = 0; ky < KH; ++ky) {
          for (int kx = 0; kx < KW; ++kx) {
            const T wv = wrow[ky * KW + kx];
            if (wv == T(0)) continue;
            const int offx = kx * dil - pad;
            const int offy = ky * dil - pad;
            int lox, hix;
            output_bounds(offx, stride, W, OW, lox, hix);
            for (int oy = 0; oy < OH; ++oy) {
              const int iy = oy * stride + offy;
              if (iy < 0 || iy >= H) continue;
              const T* xr = xplane + static_cast<std::size_t>(iy) * W + offx;
              T* orow = oplane + static_cast<std::size_t>(oy) * OW;
              if (stride == 1) {
                for (int ox = lox; ox <= hix; ++ox) orow[ox] += wv * xr[ox];
              } else {
                for (int ox = lox; ox <= hix; ++ox) orow[ox] += wv * xr[ox * stride];
              }
            }
          }
        }
      }
    }
  }
}

/// Gradient of conv2d with respect to its input (scatter of gy through w).
template <class T>
void conv2d_dx(T* dx, const T* gy, const T* w, int N, int Cout, int Cin, int H, int W, int KH,
               int KW, int OH, int OW, int stride, int dil, int pad) {
  const std::size_t x_plane = static_cast<std::size_t>(H) * W;
  const std::size_t o_plane = static_cast<std::size_t>(OH) * OW;
  std::fill(dx, dx + static_cast<std::size_t>(N) * Cin * x_plane, T(0));
  for (int n = 0; n < N; ++n) {
    for (int oc = 0; oc < Cout; ++oc) {
      const T* gplane = gy + (static_cast<std::size_t>(n) * Cout + oc) * o_plane;
      for (int ic = 0; ic < Cin; ++ic) {
        T* xplane = dx + (static_cast<std::size_t>(n) * Cin + ic) * x_plane;
        const T* wrow = w + ((static_cast<std::size_t>(oc) * Cin + ic) * KH) * KW;
        for (int ky = 0; ky < KH; ++ky) {
          for (int kx = 0; kx < KW; ++kx) {
            const T wv = wrow[ky * KW + kx];
            if (wv == T(0)) continue;
            const int offx = kx * dil - pad;
            const int offy = ky * dil - pad;
            int lox, hix;
            output_bounds(offx, stride, W, OW, lox, hix);
            for (int oy = 0; oy < OH; ++oy) {
              const int iy = oy * stride + offy;
              if (iy < 0 || iy >= H) continue;
              T* xr = xplane + static_cast<std::size_t>(iy) * W + offx;
              const T* grow = gplane + static_cast<std::size_t>(oy) * OW;
              if (stride == 1) {
                for (int ox = lox; ox <= hix; ++ox) xr[ox] += wv * grow[ox];
              } else {
                for (int ox = lox; ox <= hix; ++ox) xr[ox * stride] += wv * grow[ox];
              }
            }
          }
        }
      }
    }
  }
}

/// Gradient of conv2d with respect to the weights.
template <class T>
void conv2d_dw(T* dw, const T* x, const T* gy, int N, int Cout, int Cin, int H, int W, int KH,
               int KW, int OH, int OW, int stride, int dil, int pad) {
  const std::size_t x_plane = static_cast<std::size_t>(H) * W;
  const std::size_t o_plane = static_cast<std::size_t>(OH) * OW;
  for (int oc = 0; oc < Cout; ++oc) {
    for (int ic = 0; ic < Cin; ++ic) {
      for (int ky = 0; ky < KH; ++ky) {
        for (int kx = 0; kx < KW; ++kx) {
          const int offx = kx * dil - pad;
          const int offy = ky * dil - pad;
          int lox, hix;
          output_bounds(offx, stride, W, OW, lox, hix);
          T acc = T(0);
          for (int n = 0; n < N; ++n) {
            const T* xplane = x + (static_cast<std::size_t>(n) * Cin + ic) * x_plane;
            const T* gplane = gy + (static_cast<std::size_t>(n) * Cout + oc) * o_plane;
            for (int oy = 0; oy < OH; ++oy) {
              const int iy = oy * stride + offy;
              if (iy < 0 || iy >= H) continue;
              const T* xr = xplane + static_cast<std::size_t>(iy) * W + offx;
              const T* grow = gplane + static_cast<std::size_t>(oy) * OW;
              if (stride == 1) {
                for (int ox = lox; ox <= hix; ++ox) acc += grow[ox] * xr[ox];
              } else {
                for (int ox = lox; ox <= hix; ++ox) acc += grow[ox] * xr[ox * stride];
              }
            }
          }
          dw[((static_cast<std::size_t>(oc) * Cin + ic) * KH + ky) * KW + kx] = acc;
        }
      }
    }
  }
}

/// 2x2 max selection with stride 2 (H and W must be even).
template <class T>
void maxpool2(T* out, const T* x, int N, int C, int H, int W) {
  const int OH = H / 2, OW = W / 2;
  for (int p = 0; p < N * C; ++p) {
    const T* xp = x + static_cast<std::size_t>(p) * H * W;
    T* op = out + static_cast<std::size_t>(p) * OH * OW;
    for (int oy = 0; oy < OH; ++oy) {
      for (int ox = 0; ox < OW; ++ox) {
        const T* q = xp + static_cast<std::size_t>(2 * oy) * W + 2 * ox;
        T m = q[0];
        if (q[1] > m) m = q[1];
        if (q[W] > m) m = q[W];
        if (q[W + 1] > m) m = q[W + 1];
        op[static_cast<std::size_t>(oy) * OW + ox] = m;
      }
    }
  }
}

template <class T>
void leaky_relu_inplace(T* x, std::size_t n, T slope) {
  for (std::size_t i = 0; i < n; ++i)
    if (x[i] < T(0)) x[i] *= slope;
}

}  // namespace mvpano::kernels
