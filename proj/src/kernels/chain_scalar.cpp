#include <cmath>

#include "ddsim/kernels.hpp"
#include "ddsim/polarization.hpp"

namespace ddsim::kernels {

namespace {

struct Column {
  double ar, ai, br, bi;
};

inline void dephase(Column& v, double phase) {
  const double c = std::cos(0.5 * phase);
  const double s = std::sin(0.5 * phase);
  // a *= e^{i phase/2}, b *= e^{-i phase/2}
  const double ar = v.ar * c - v.ai * s;
  const double ai = v.ar * s + v.ai * c;
  const double br = v.br * c + v.bi * s;
  const double bi = v.bi * c - v.br * s;
  v = {ar, ai, br, bi};
}

inline void rotate(Column& v, double angle, double cphi, double sphi) {
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  // q = e^{-i phi} b, t = e^{i phi} a
  const double qr = cphi * v.br + sphi * v.bi;
  const double qi = cphi * v.bi - sphi * v.br;
  const double tr = cphi * v.ar - sphi * v.ai;
  const double ti = cphi * v.ai + sphi * v.ar;
  // a' = c a - i s q, b' = c b - i s t
  v = {c * v.ar + s * qi, c * v.ai - s * qr, c * v.br + s * ti, c * v.bi - s * tr};
}

inline void renormalize(Column& v) {
  const double inv = 1.0 / std::sqrt(v.ar * v.ar + v.ai * v.ai + v.br * v.br + v.bi * v.bi);
  v = {v.ar * inv, v.ai * inv, v.br * inv, v.bi * inv};
}

inline void store(std::span<double> trajectory, std::size_t record, std::size_t lane,
                  const Column& v) {
  double* base = trajectory.data() + record * kColumnComponents * kLanes + lane;
  base[0 * kLanes] = v.ar;
  base[1 * kLanes] = v.ai;
  base[2 * kLanes] = v.br;
  base[3 * kLanes] = v.bi;
}

}  // namespace

void chain_scalar(const ChainBatch& batch, Su2Columns& out, std::span<double> trajectory) {
  const std::size_t n = batch.pulse_count;
  const bool record = !trajectory.empty();
  for (std::size_t lane = 0; lane < kLanes; ++lane) {
    Column v{1.0, 0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) {
      dephase(v, batch.dephase[k * kLanes + lane]);
      rotate(v, batch.rotation[k * kLanes + lane], batch.axis_cos[k], batch.axis_sin[k]);
      if ((k + 1) % kRenormalizeEvery == 0) renormalize(v);
      if (record) store(trajectory, k, lane, v);
    }
    dephase(v, batch.dephase[n * kLanes + lane]);
    if (record) store(trajectory, n, lane, v);
    out.a_re[lane] = v.ar;
    out.a_im[lane] = v.ai;
    out.b_re[lane] = v.br;
    out.b_im[lane] = v.bi;
  }
}

void sincos_scalar(std::span<const double> x, std::span<double> s, std::span<double> c) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    s[i] = std::sin(x[i]);
    c[i] = std::cos(x[i]);
  }
}

}  // namespace ddsim::kernels
