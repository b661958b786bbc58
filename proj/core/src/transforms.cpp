#include "wmarena/transforms.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "wmarena/error.hpp"

namespace wmarena {

namespace {

enum class PlanKind { dft_forward, dft_backward, dct_forward, dct_backward };

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per (kind, size) and never destroyed.
fftw_plan cached_plan(PlanKind kind, int width, int height) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int>, fftw_plan> plans;
  std::lock_guard lock(mutex);
  const auto key = std::make_tuple(static_cast<int>(kind), width, height);
  if (auto it = plans.find(key); it != plans.end()) return it->second;

  const std::size_t n = static_cast<std::size_t>(width) * height;
  fftw_plan plan = nullptr;
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  if (kind == PlanKind::dft_forward || kind == PlanKind::dft_backward) {
    auto* in = fftw_alloc_complex(n);
    auto* out = fftw_alloc_complex(n);
    plan = fftw_plan_dft_2d(height, width, in, out,
                            kind == PlanKind::dft_forward ? FFTW_FORWARD : FFTW_BACKWARD, flags);
    fftw_free(in);
    fftw_free(out);
  } else {
    auto* in = fftw_alloc_real(n);
    auto* out = fftw_alloc_real(n);
    const fftw_r2r_kind k = kind == PlanKind::dct_forward ? FFTW_REDFT10 : FFTW_REDFT01;
    plan = fftw_plan_r2r_2d(height, width, in, out, k, k, flags);
    fftw_free(in);
    fftw_free(out);
  }
  if (!plan) throw Error("FFTW planning failed");
  plans.emplace(key, plan);
  return plan;
}

fftw_complex* as_fftw(std::vector<Complex>& v) { return reinterpret_cast<fftw_complex*>(v.data()); }

void require_fft_size(int width, int height) {
  if (width < 8 || height < 8 || width % 2 || height % 2)
    throw ValidationError("FFT dimensions must be even and at least 8");
}

void require_multiple_of_8(int width, int height) {
  if (width <= 0 || height <= 0 || width % 8 || height % 8)
    throw ValidationError("dimensions must be positive multiples of 8");
}

std::array<std::array<double, 8>, 8> make_dct8_basis() {
  std::array<std::array<double, 8>, 8> c{};
  for (int k = 0; k < 8; ++k) {
    const double scale = k == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
    for (int n = 0; n < 8; ++n) c[k][n] = scale * std::cos(std::numbers::pi * (2 * n + 1) * k / 16.0);
  }
  return c;
}

const std::array<std::array<double, 8>, 8>& dct8_basis() {
  static const auto basis = make_dct8_basis();
  return basis;
}

std::array<std::pair<int, int>, 64> make_zigzag() {
  std::array<std::pair<int, int>, 64> order{};
  int k = 0;
  for (int s = 0; s < 15; ++s) {
    // Even diagonals run bottom-left to top-right, odd ones the other way.
    if (s % 2 == 0) {
      for (int row = std::min(s, 7); row >= std::max(0, s - 7); --row) order[k++] = {row, s - row};
    } else {
      for (int row = std::max(0, s - 7); row <= std::min(s, 7); ++row) order[k++] = {row, s - row};
    }
  }
  return order;
}

struct UpsampleTap {
  int i0;
  int i1;
  double t;
};

std::vector<UpsampleTap> upsample_taps(int latent_size) {
  const int n = latent_size * 8;
  std::vector<UpsampleTap> taps(n);
  for (int x = 0; x < n; ++x) {
    const double pos = (x + 0.5) / 8.0 - 0.5;
    if (pos <= 0.0) {
      taps[x] = {0, 0, 0.0};
    } else if (pos >= latent_size - 1) {
      taps[x] = {latent_size - 1, latent_size - 1, 0.0};
    } else {
      const int i0 = static_cast<int>(std::floor(pos));
      taps[x] = {i0, i0 + 1, pos - i0};
    }
  }
  return taps;
}

// Inverse of the n x n matrix A = box8 * bilinear8 acting on one latent axis.
const std::vector<double>& inverse_down_up(int n) {
  static std::mutex mutex;
  static std::map<int, std::vector<double>> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  const auto taps = upsample_taps(n);
  std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
  for (int x = 0; x < 8 * n; ++x) {
    const int row = x / 8;
    a[static_cast<std::size_t>(row) * n + taps[x].i0] += (1.0 - taps[x].t) / 8.0;
    a[static_cast<std::size_t>(row) * n + taps[x].i1] += taps[x].t / 8.0;
  }
  // Gauss-Jordan with partial pivoting on [A | I].
  std::vector<double> inv(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(i) * n + i] = 1.0;
  auto at = [n](std::vector<double>& m, int r, int c) -> double& { return m[static_cast<std::size_t>(r) * n + c]; };
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(at(a, r, col)) > std::abs(at(a, pivot, col))) pivot = r;
    if (std::abs(at(a, pivot, col)) < 1e-14) throw Error("latent operator is singular");
    if (pivot != col)
      for (int c = 0; c < n; ++c) {
        std::swap(at(a, pivot, c), at(a, col, c));
        std::swap(at(inv, pivot, c), at(inv, col, c));
      }
    const double p = at(a, col, col);
    for (int c = 0; c < n; ++c) {
      at(a, col, c) /= p;
      at(inv, col, c) /= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = at(a, r, col);
      if (f == 0.0) continue;
      for (int c = 0; c < n; ++c) {
        at(a, r, c) -= f * at(a, col, c);
        at(inv, r, c) -= f * at(inv, col, c);
      }
    }
  }
  return cache.emplace(n, std::move(inv)).first->second;
}

}  // namespace

ImagePlane luminance(const RgbImage& img) {
  ImagePlane y(img.width(), img.height());
  auto s = img.samples();
  auto d = y.data();
  for (std::size_t i = 0; i < d.size(); ++i)
    d[i] = kLumaR * s[3 * i] + kLumaG * s[3 * i + 1] + kLumaB * s[3 * i + 2];
  return y;
}

RgbImage replace_luminance(const RgbImage& img, const ImagePlane& y) {
  if (img.width() != y.width() || img.height() != y.height())
    throw ValidationError("luminance plane does not match image size");
  RgbImage out = img;
  auto s = out.samples();
  auto d = y.data();
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double cur = kLumaR * s[3 * i] + kLumaG * s[3 * i + 1] + kLumaB * s[3 * i + 2];
    const double delta = d[i] - cur;
    s[3 * i] += delta;
    s[3 * i + 1] += delta;
    s[3 * i + 2] += delta;
  }
  return out;
}

Spectrum2D::Spectrum2D(int width, int height)
    : width_(width), height_(height), data_(static_cast<std::size_t>(width) * height) {
  require_fft_size(width, height);
}

FreqIndex Spectrum2D::conjugate(FreqIndex f) const {
  return {f.u == -width_ / 2 ? f.u : -f.u, f.v == -height_ / 2 ? f.v : -f.v};
}

void Spectrum2D::set_hermitian(FreqIndex f, Complex value) {
  const FreqIndex c = conjugate(f);
  if (c == f) {
    at(f) = Complex(value.real(), 0.0);
  } else {
    at(f) = value;
    at(c) = std::conj(value);
  }
}

Spectrum2D fft2(const ImagePlane& x) {
  const int w = x.width();
  const int h = x.height();
  require_fft_size(w, h);
  std::vector<Complex> in(x.size());
  auto src = x.data();
  for (std::size_t i = 0; i < in.size(); ++i) in[i] = src[i];
  std::vector<Complex> out(in.size());
  fftw_execute_dft(cached_plan(PlanKind::dft_forward, w, h), as_fftw(in), as_fftw(out));

  Spectrum2D s(w, h);
  const double scale = 1.0 / std::sqrt(static_cast<double>(w) * h);
  auto& dst = s.data();
  for (int ky = 0; ky < h; ++ky) {
    const int row = (ky + h / 2) % h;
    for (int kx = 0; kx < w; ++kx) {
      const int col = (kx + w / 2) % w;
      dst[static_cast<std::size_t>(row) * w + col] = out[static_cast<std::size_t>(ky) * w + kx] * scale;
    }
  }
  return s;
}

ImagePlane ifft2(const Spectrum2D& s) {
  const int w = s.width();
  const int h = s.height();
  std::vector<Complex> in(static_cast<std::size_t>(w) * h);
  const auto& src = s.data();
  for (int ky = 0; ky < h; ++ky) {
    const int row = (ky + h / 2) % h;
    for (int kx = 0; kx < w; ++kx) {
      const int col = (kx + w / 2) % w;
      in[static_cast<std::size_t>(ky) * w + kx] = src[static_cast<std::size_t>(row) * w + col];
    }
  }
  std::vector<Complex> out(in.size());
  fftw_execute_dft(cached_plan(PlanKind::dft_backward, w, h), as_fftw(in), as_fftw(out));
  ImagePlane x(w, h);
  const double scale = 1.0 / std::sqrt(static_cast<double>(w) * h);
  auto d = x.data();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = out[i].real() * scale;
  return x;
}

double normalized_radius(int u, int v, int width, int height) {
  const double a = static_cast<double>(u) / width;
  const double b = static_cast<double>(v) / height;
  return std::sqrt(a * a + b * b);
}

bool is_representative(int u, int v, int width, int height) {
  const int cu = u == -width / 2 ? u : -u;
  const int cv = v == -height / 2 ? v : -v;
  const long flat = static_cast<long>(v + height / 2) * width + (u + width / 2);
  const long cflat = static_cast<long>(cv + height / 2) * width + (cu + width / 2);
  return flat <= cflat;
}

RingMask ring_mask(int width, int height, double inner, double outer) {
  require_fft_size(width, height);
  if (!(inner >= 0.0) || !(outer > inner) || outer > std::sqrt(0.5) + 1e-12)
    throw ValidationError("ring mask requires 0 <= inner < outer <= sqrt(0.5)");
  RingMask m{width, height, inner, outer, {}};
  for (int v = -height / 2; v < height / 2; ++v) {
    for (int u = -width / 2; u < width / 2; ++u) {
      const double r = normalized_radius(u, v, width, height);
      if (r >= inner && r < outer && is_representative(u, v, width, height)) m.indices.push_back({u, v});
    }
  }
  if (m.indices.empty()) throw ValidationError("ring mask is empty");
  return m;
}

const std::array<std::pair<int, int>, 64>& zigzag_order() {
  static const auto order = make_zigzag();
  return order;
}

BlockDct block_dct(const ImagePlane& x) {
  require_multiple_of_8(x.width(), x.height());
  const auto& c = dct8_basis();
  const auto& zz = zigzag_order();
  BlockDct d{x.width() / 8, x.height() / 8, {}};
  d.blocks.resize(static_cast<std::size_t>(d.blocks_x) * d.blocks_y);
  double tmp[8][8];
  double coef[8][8];
  for (int by = 0; by < d.blocks_y; ++by) {
    for (int bx = 0; bx < d.blocks_x; ++bx) {
      // Rows first: tmp[y][q] = sum_x c[q][x] * block[y][x].
      for (int y = 0; y < 8; ++y)
        for (int q = 0; q < 8; ++q) {
          double s = 0.0;
          for (int xx = 0; xx < 8; ++xx) s += c[q][xx] * x.at(8 * bx + xx, 8 * by + y);
          tmp[y][q] = s;
        }
      for (int p = 0; p < 8; ++p)
        for (int q = 0; q < 8; ++q) {
          double s = 0.0;
          for (int y = 0; y < 8; ++y) s += c[p][y] * tmp[y][q];
          coef[p][q] = s;
        }
      auto& out = d.block(bx, by);
      for (int k = 0; k < 64; ++k) out[k] = coef[zz[k].first][zz[k].second];
    }
  }
  return d;
}

ImagePlane block_idct(const BlockDct& d) {
  const auto& c = dct8_basis();
  const auto& zz = zigzag_order();
  ImagePlane x(d.blocks_x * 8, d.blocks_y * 8);
  double coef[8][8];
  double tmp[8][8];
  for (int by = 0; by < d.blocks_y; ++by) {
    for (int bx = 0; bx < d.blocks_x; ++bx) {
      const auto& in = d.block(bx, by);
      for (int k = 0; k < 64; ++k) coef[zz[k].first][zz[k].second] = in[k];
      for (int y = 0; y < 8; ++y)
        for (int q = 0; q < 8; ++q) {
          double s = 0.0;
          for (int p = 0; p < 8; ++p) s += c[p][y] * coef[p][q];
          tmp[y][q] = s;
        }
      for (int y = 0; y < 8; ++y)
        for (int xx = 0; xx < 8; ++xx) {
          double s = 0.0;
          for (int q = 0; q < 8; ++q) s += c[q][xx] * tmp[y][q];
          x.at(8 * bx + xx, 8 * by + y) = s;
        }
    }
  }
  return x;
}

ImagePlane dct2_global(const ImagePlane& x) {
  const int w = x.width();
  const int h = x.height();
  require_fft_size(w, h);
  std::vector<double> in(x.data().begin(), x.data().end());
  std::vector<double> out(in.size());
  fftw_execute_r2r(cached_plan(PlanKind::dct_forward, w, h), in.data(), out.data());
  const double scale = 1.0 / std::sqrt(4.0 * w * h);
  const double r = std::numbers::sqrt2 / 2.0;
  for (int ky = 0; ky < h; ++ky)
    for (int kx = 0; kx < w; ++kx) {
      double s = scale;
      if (kx == 0) s *= r;
      if (ky == 0) s *= r;
      out[static_cast<std::size_t>(ky) * w + kx] *= s;
    }
  return ImagePlane(w, h, std::move(out));
}

ImagePlane idct2_global(const ImagePlane& c) {
  const int w = c.width();
  const int h = c.height();
  require_fft_size(w, h);
  std::vector<double> in(c.data().begin(), c.data().end());
  for (int ky = 0; ky < h; ++ky)
    for (int kx = 0; kx < w; ++kx) {
      double s = 1.0;
      if (kx == 0) s *= std::numbers::sqrt2;
      if (ky == 0) s *= std::numbers::sqrt2;
      in[static_cast<std::size_t>(ky) * w + kx] *= s;
    }
  std::vector<double> out(in.size());
  fftw_execute_r2r(cached_plan(PlanKind::dct_backward, w, h), in.data(), out.data());
  const double scale = 1.0 / std::sqrt(4.0 * w * h);
  for (double& v : out) v *= scale;
  return ImagePlane(w, h, std::move(out));
}

ImagePlane downsample8(const ImagePlane& x) {
  require_multiple_of_8(x.width(), x.height());
  const int lw = x.width() / 8;
  const int lh = x.height() / 8;
  ImagePlane l(lw, lh);
  for (int y = 0; y < x.height(); ++y)
    for (int xx = 0; xx < x.width(); ++xx) l.at(xx / 8, y / 8) += x.at(xx, y);
  for (double& v : l.data()) v /= 64.0;
  return l;
}

ImagePlane upsample8(const ImagePlane& latent) {
  const int lw = latent.width();
  const int lh = latent.height();
  const auto tx = upsample_taps(lw);
  const auto ty = upsample_taps(lh);
  // Horizontal pass on latent rows, then vertical.
  ImagePlane rows(lw * 8, lh);
  for (int j = 0; j < lh; ++j)
    for (int x = 0; x < lw * 8; ++x) {
      const auto& t = tx[x];
      rows.at(x, j) = (1.0 - t.t) * latent.at(t.i0, j) + t.t * latent.at(t.i1, j);
    }
  ImagePlane out(lw * 8, lh * 8);
  for (int y = 0; y < lh * 8; ++y) {
    const auto& t = ty[y];
    for (int x = 0; x < lw * 8; ++x) out.at(x, y) = (1.0 - t.t) * rows.at(x, t.i0) + t.t * rows.at(x, t.i1);
  }
  return out;
}

ImagePlane apply_latent_delta(const ImagePlane& x, const ImagePlane& latent_delta) {
  require_multiple_of_8(x.width(), x.height());
  if (latent_delta.width() * 8 != x.width() || latent_delta.height() * 8 != x.height())
    throw ValidationError("latent delta does not match plane size");
  // downsample8(upsample8(d)) = Ay * d * Ax^T with small 1D operators, so the
  // pre-image of the requested delta is Ay^-1 * delta * Ax^-T.
  const int lw = latent_delta.width();
  const int lh = latent_delta.height();
  const auto& ax = inverse_down_up(lw);
  const auto& ay = inverse_down_up(lh);
  ImagePlane tmp(lw, lh);
  for (int j = 0; j < lh; ++j)
    for (int i = 0; i < lw; ++i) {
      double s = 0.0;
      for (int k = 0; k < lw; ++k) s += latent_delta.at(k, j) * ax[static_cast<std::size_t>(i) * lw + k];
      tmp.at(i, j) = s;
    }
  ImagePlane d(lw, lh);
  for (int j = 0; j < lh; ++j)
    for (int i = 0; i < lw; ++i) {
      double s = 0.0;
      for (int k = 0; k < lh; ++k) s += ay[static_cast<std::size_t>(j) * lh + k] * tmp.at(i, k);
      d.at(i, j) = s;
    }
  ImagePlane out = upsample8(d);
  auto od = out.data();
  auto xd = x.data();
  for (std::size_t i = 0; i < od.size(); ++i) od[i] += xd[i];
  return out;
}

}  // namespace wmarena
