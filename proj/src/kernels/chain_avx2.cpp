// AVX2/FMA variant of the SU(2) chain kernel. One __m256d holds the same
// quantity for the four trials of a batch. Built with -mavx2 -mfma and only
// reached through select_chain() after a CPU check.

#include <immintrin.h>

#include "ddsim/kernels.hpp"
#include "ddsim/polarization.hpp"

namespace ddsim::kernels {

namespace {

// Cody-Waite reduction by pi/4 and minimax polynomials on [-pi/4, pi/4]
// (Cephes double-precision coefficients).
constexpr double kFourOverPi = 1.27323954473516268615;
constexpr double kDp1 = 7.85398125648498535156e-1;
constexpr double kDp2 = 3.77489470793079817668e-8;
constexpr double kDp3 = 2.69515142907905952645e-15;

constexpr double kSinCoef[6] = {
    1.58962301576546568060e-10, -2.50507477628578072866e-8, 2.75573136213857245213e-6,
    -1.98412698295895385996e-4, 8.33333333332211858878e-3,  -1.66666666666666307295e-1};
constexpr double kCosCoef[6] = {
    -1.13585365213876817300e-11, 2.08757008419747316778e-9, -2.75573141792967388112e-7,
    2.48015872888517045348e-5,   -1.38888888888730564116e-3, 4.16666666666665929218e-2};

struct SinCos {
  __m256d s;
  __m256d c;
};

inline __m256d horner(__m256d x, const double (&coef)[6]) {
  __m256d r = _mm256_set1_pd(coef[0]);
  for (int i = 1; i < 6; ++i) {
    r = _mm256_fmadd_pd(r, x, _mm256_set1_pd(coef[i]));
  }
  return r;
}

inline SinCos sincos_pd(__m256d x) {
  const __m256d sign_bit = _mm256_set1_pd(-0.0);
  const __m256d sign_x = _mm256_and_pd(x, sign_bit);
  const __m256d ax = _mm256_andnot_pd(sign_bit, x);

  __m256d y = _mm256_floor_pd(_mm256_mul_pd(ax, _mm256_set1_pd(kFourOverPi)));
  // Round octant up to even.
  const __m256d odd =
      _mm256_sub_pd(y, _mm256_mul_pd(_mm256_floor_pd(_mm256_mul_pd(y, _mm256_set1_pd(0.5))),
                                     _mm256_set1_pd(2.0)));
  y = _mm256_add_pd(y, odd);
  __m256d j = _mm256_sub_pd(
      y, _mm256_mul_pd(_mm256_floor_pd(_mm256_mul_pd(y, _mm256_set1_pd(0.125))),
                       _mm256_set1_pd(8.0)));
  const __m256d upper = _mm256_cmp_pd(j, _mm256_set1_pd(4.0), _CMP_GE_OQ);
  j = _mm256_sub_pd(j, _mm256_and_pd(upper, _mm256_set1_pd(4.0)));
  const __m256d swap = _mm256_cmp_pd(j, _mm256_set1_pd(2.0), _CMP_EQ_OQ);

  __m256d z = _mm256_fnmadd_pd(y, _mm256_set1_pd(kDp1), ax);
  z = _mm256_fnmadd_pd(y, _mm256_set1_pd(kDp2), z);
  z = _mm256_fnmadd_pd(y, _mm256_set1_pd(kDp3), z);
  const __m256d zz = _mm256_mul_pd(z, z);

  const __m256d ps = _mm256_fmadd_pd(_mm256_mul_pd(z, zz), horner(zz, kSinCoef), z);
  const __m256d pc = _mm256_fmadd_pd(_mm256_mul_pd(zz, zz), horner(zz, kCosCoef),
                                     _mm256_fnmadd_pd(_mm256_set1_pd(0.5), zz,
                                                      _mm256_set1_pd(1.0)));

  __m256d s = _mm256_blendv_pd(ps, pc, swap);
  __m256d c = _mm256_blendv_pd(pc, ps, swap);

  const __m256d sin_flip = _mm256_xor_pd(_mm256_and_pd(upper, sign_bit), sign_x);
  const __m256d cos_flip = _mm256_and_pd(_mm256_xor_pd(upper, swap), sign_bit);
  s = _mm256_xor_pd(s, sin_flip);
  c = _mm256_xor_pd(c, cos_flip);
  return {s, c};
}

struct Column {
  __m256d ar, ai, br, bi;
};

inline void dephase(Column& v, __m256d phase) {
  const SinCos t = sincos_pd(_mm256_mul_pd(phase, _mm256_set1_pd(0.5)));
  const __m256d ar = _mm256_fmsub_pd(v.ar, t.c, _mm256_mul_pd(v.ai, t.s));
  const __m256d ai = _mm256_fmadd_pd(v.ar, t.s, _mm256_mul_pd(v.ai, t.c));
  const __m256d br = _mm256_fmadd_pd(v.br, t.c, _mm256_mul_pd(v.bi, t.s));
  const __m256d bi = _mm256_fmsub_pd(v.bi, t.c, _mm256_mul_pd(v.br, t.s));
  v = {ar, ai, br, bi};
}

inline void rotate(Column& v, __m256d angle, __m256d cphi, __m256d sphi) {
  const SinCos t = sincos_pd(_mm256_mul_pd(angle, _mm256_set1_pd(0.5)));
  const __m256d qr = _mm256_fmadd_pd(cphi, v.br, _mm256_mul_pd(sphi, v.bi));
  const __m256d qi = _mm256_fmsub_pd(cphi, v.bi, _mm256_mul_pd(sphi, v.br));
  const __m256d tr = _mm256_fmsub_pd(cphi, v.ar, _mm256_mul_pd(sphi, v.ai));
  const __m256d ti = _mm256_fmadd_pd(cphi, v.ai, _mm256_mul_pd(sphi, v.ar));
  const __m256d ar = _mm256_fmadd_pd(t.c, v.ar, _mm256_mul_pd(t.s, qi));
  const __m256d ai = _mm256_fmsub_pd(t.c, v.ai, _mm256_mul_pd(t.s, qr));
  const __m256d br = _mm256_fmadd_pd(t.c, v.br, _mm256_mul_pd(t.s, ti));
  const __m256d bi = _mm256_fmsub_pd(t.c, v.bi, _mm256_mul_pd(t.s, tr));
  v = {ar, ai, br, bi};
}

inline void renormalize(Column& v) {
  __m256d norm = _mm256_mul_pd(v.ar, v.ar);
  norm = _mm256_fmadd_pd(v.ai, v.ai, norm);
  norm = _mm256_fmadd_pd(v.br, v.br, norm);
  norm = _mm256_fmadd_pd(v.bi, v.bi, norm);
  const __m256d inv = _mm256_div_pd(_mm256_set1_pd(1.0), _mm256_sqrt_pd(norm));
  v = {_mm256_mul_pd(v.ar, inv), _mm256_mul_pd(v.ai, inv), _mm256_mul_pd(v.br, inv),
       _mm256_mul_pd(v.bi, inv)};
}

inline void store(double* record, const Column& v) {
  _mm256_storeu_pd(record + 0 * kLanes, v.ar);
  _mm256_storeu_pd(record + 1 * kLanes, v.ai);
  _mm256_storeu_pd(record + 2 * kLanes, v.br);
  _mm256_storeu_pd(record + 3 * kLanes, v.bi);
}

}  // namespace

static_assert(kLanes == 4, "AVX2 kernel packs four doubles per register");

void chain_avx2(const ChainBatch& batch, Su2Columns& out, std::span<double> trajectory) {
  const std::size_t n = batch.pulse_count;
  const double* dephase_data = batch.dephase.data();
  const double* rotation_data = batch.rotation.data();
  double* traj = trajectory.empty() ? nullptr : trajectory.data();
  constexpr std::size_t kRecord = kColumnComponents * kLanes;

  Column v{_mm256_set1_pd(1.0), _mm256_setzero_pd(), _mm256_setzero_pd(), _mm256_setzero_pd()};
  for (std::size_t k = 0; k < n; ++k) {
    dephase(v, _mm256_loadu_pd(dephase_data + k * kLanes));
    rotate(v, _mm256_loadu_pd(rotation_data + k * kLanes), _mm256_set1_pd(batch.axis_cos[k]),
           _mm256_set1_pd(batch.axis_sin[k]));
    if ((k + 1) % kRenormalizeEvery == 0) renormalize(v);
    if (traj) store(traj + k * kRecord, v);
  }
  dephase(v, _mm256_loadu_pd(dephase_data + n * kLanes));
  if (traj) store(traj + n * kRecord, v);

  _mm256_storeu_pd(out.a_re.data(), v.ar);
  _mm256_storeu_pd(out.a_im.data(), v.ai);
  _mm256_storeu_pd(out.b_re.data(), v.br);
  _mm256_storeu_pd(out.b_im.data(), v.bi);
}

void sincos_avx2(std::span<const double> x, std::span<double> s, std::span<double> c) {
  std::size_t i = 0;
  for (; i + kLanes <= x.size(); i += kLanes) {
    const SinCos r = sincos_pd(_mm256_loadu_pd(x.data() + i));
    _mm256_storeu_pd(s.data() + i, r.s);
    _mm256_storeu_pd(c.data() + i, r.c);
  }
  if (i < x.size()) {
    alignas(32) double in[kLanes] = {0.0, 0.0, 0.0, 0.0};
    alignas(32) double so[kLanes];
    alignas(32) double co[kLanes];
    for (std::size_t t = i; t < x.size(); ++t) in[t - i] = x[t];
    const SinCos r = sincos_pd(_mm256_load_pd(in));
    _mm256_store_pd(so, r.s);
    _mm256_store_pd(co, r.c);
    for (std::size_t t = i; t < x.size(); ++t) {
      s[t] = so[t - i];
      c[t] = co[t - i];
    }
  }
}

}  // namespace ddsim::kernels
