#include "nsm/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace nsm {
namespace {

// Dormand-Prince 8(5,3) coefficients (Hairer, Norsett & Wanner, "Solving
// Ordinary Differential Equations I", 2nd ed., dop853).  Stages 11 and 12
// overwrite the k2/k3 slots once those slopes are no longer needed.
constexpr double c2 = 0.526001519587677318785587544488e-01;
constexpr double c3 = 0.789002279381515978178381316732e-01;
constexpr double c4 = 0.118350341907227396726757197510e+00;
constexpr double c5 = 0.281649658092772603273242802490e+00;
constexpr double c6 = 0.333333333333333333333333333333e+00;
constexpr double c7 = 0.25e+00;
constexpr double c8 = 0.307692307692307692307692307692e+00;
constexpr double c9 = 0.651282051282051282051282051282e+00;
constexpr double c10 = 0.6e+00;
constexpr double c11 = 0.857142857142857142857142857142e+00;

constexpr double a21 = 5.26001519587677318785587544488e-2;
constexpr double a31 = 1.97250569845378994544595329183e-2;
constexpr double a32 = 5.91751709536136983633785987549e-2;
constexpr double a41 = 2.95875854768068491816892993775e-2;
constexpr double a43 = 8.87627564304205475450678981324e-2;
constexpr double a51 = 2.41365134159266685502369798665e-1;
constexpr double a53 = -8.84549479328286085344864962717e-1;
constexpr double a54 = 9.24834003261792003115737966543e-1;
constexpr double a61 = 3.7037037037037037037037037037e-2;
constexpr double a64 = 1.70828608729473871279604482173e-1;
constexpr double a65 = 1.25467687566822425016691814123e-1;
constexpr double a71 = 3.7109375e-2;
constexpr double a74 = 1.70252211019544039314978060272e-1;
constexpr double a75 = 6.02165389804559606850219397283e-2;
constexpr double a76 = -1.7578125e-2;
constexpr double a81 = 3.70920001185047927108779319836e-2;
constexpr double a84 = 1.70383925712239993810214054705e-1;
constexpr double a85 = 1.07262030446373284651809199168e-1;
constexpr double a86 = -1.53194377486244017527936158236e-2;
constexpr double a87 = 8.27378916381402288758473766002e-3;
constexpr double a91 = 6.24110958716075717114429577812e-1;
constexpr double a94 = -3.36089262944694129406857109825e0;
constexpr double a95 = -8.68219346841726006818189891453e-1;
constexpr double a96 = 2.75920996994467083049415600797e1;
constexpr double a97 = 2.01540675504778934086186788979e1;
constexpr double a98 = -4.34898841810699588477366255144e1;
constexpr double a101 = 4.77662536438264365890433908527e-1;
constexpr double a104 = -2.48811461997166764192642586468e0;
constexpr double a105 = -5.90290826836842996371446475743e-1;
constexpr double a106 = 2.12300514481811942347288949897e1;
constexpr double a107 = 1.52792336328824235832596922938e1;
constexpr double a108 = -3.32882109689848629194453265587e1;
constexpr double a109 = -2.03312017085086261358222928593e-2;
constexpr double a111 = -9.3714243008598732571704021658e-1;
constexpr double a114 = 5.18637242884406370830023853209e0;
constexpr double a115 = 1.09143734899672957818500254654e0;
constexpr double a116 = -8.14978701074692612513997267357e0;
constexpr double a117 = -1.85200656599969598641566180701e1;
constexpr double a118 = 2.27394870993505042818970056734e1;
constexpr double a119 = 2.49360555267965238987089396762e0;
constexpr double a1110 = -3.0467644718982195003823669022e0;
constexpr double a121 = 2.27331014751653820792359768449e0;
constexpr double a124 = -1.05344954667372501984066689879e1;
constexpr double a125 = -2.00087205822486249909675718444e0;
constexpr double a126 = -1.79589318631187989172765950534e1;
constexpr double a127 = 2.79488845294199600508499808837e1;
constexpr double a128 = -2.85899827713502369474065508674e0;
constexpr double a129 = -8.87285693353062954433549289258e0;
constexpr double a1210 = 1.23605671757943030647266201528e1;
constexpr double a1211 = 6.43392746015763530355970484046e-1;

constexpr double b1 = 5.42937341165687622380535766363e-2;
constexpr double b6 = 4.45031289275240888144113950566e0;
constexpr double b7 = 1.89151789931450038304281599044e0;
constexpr double b8 = -5.8012039600105847814672114227e0;
constexpr double b9 = 3.1116436695781989440891606237e-1;
constexpr double b10 = -1.52160949662516078556178806805e-1;
constexpr double b11 = 2.01365400804030348374776537501e-1;
constexpr double b12 = 4.47106157277725905176885569043e-2;

// 3rd-order error estimate: the 8th-order slope minus these weights.
constexpr double e31 = 0.244094488188976377952755905512e+00;
constexpr double e32 = 0.733846688281611857341361741547e+00;
constexpr double e33 = 0.220588235294117647058823529412e-01;

// 5th-order error estimate weights.
constexpr double e51 = 0.1312004499419488073250102996e-01;
constexpr double e56 = -0.1225156446376204440720569753e+01;
constexpr double e57 = -0.4957589496572501915214079952e+00;
constexpr double e58 = 0.1664377182454986536961530415e+01;
constexpr double e59 = -0.3503288487499736816886487290e+00;
constexpr double e510 = 0.3341791187130174790297318841e+00;
constexpr double e511 = 0.8192320648511571246570742613e-01;
constexpr double e512 = -0.2235530786388629525884427845e-01;

// Proportional step controller.
constexpr double kSafety = 0.9;
constexpr double kAlpha = 0.125;  // exponent 1/8 for an 8th-order method
constexpr double kMinScale = 0.333;
constexpr double kMaxScale = 6.0;

[[noreturn]] void fail(const char* reason, double t, double h, const OdeStats& stats) {
  std::ostringstream os;
  os << "integrate_ode: " << reason << " at t=" << t << " (step=" << h
     << ", accepted=" << stats.n_accepted << ", rejected=" << stats.n_rejected << ")";
  throw IntegrationError(os.str());
}

}  // namespace

OdeStats integrate_ode(const OdeRhs& f, std::span<complex> y, double t0, double t1,
                       const OdeOptions& opt) {
  if (!(opt.rtol > 0.0) || !(opt.atol > 0.0)) {
    throw std::invalid_argument("integrate_ode: tolerances must be positive");
  }
  OdeStats stats;
  stats.min_step = std::numeric_limits<double>::infinity();
  const std::size_t n = y.size();
  if (n == 0 || t1 == t0) {
    stats.min_step = 0.0;
    return stats;
  }

  const double dir = t1 > t0 ? 1.0 : -1.0;
  const double eps = std::numeric_limits<double>::epsilon();

  std::vector<complex> yy(y.begin(), y.end());
  std::vector<complex> yw(n), ksum(n);
  std::vector<complex> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), k8(n), k9(n), k10(n);

  auto eval = [&](double t, const std::vector<complex>& state, std::vector<complex>& out) {
    f(t, state, out);
    ++stats.n_rhs;
  };

  eval(t0, yy, k1);

  // Initial step: RMS of the tolerance-scaled derivative, damped by the
  // method order, never longer than the whole interval.
  double hh = opt.initial_step;
  if (hh <= 0.0) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sci = opt.atol + opt.rtol * std::abs(yy[i]);
      const double e = std::abs(k1[i]) / sci;
      sum += e * e;
    }
    hh = sum > 0.0 ? std::pow(sum / static_cast<double>(n), -0.0625) : 1.0e-6;
    hh = std::min(hh, std::abs(t1 - t0));
  }
  if (opt.max_step > 0.0) hh = std::min(hh, opt.max_step);

  double tt = t0;
  bool last_rejected = false;

  while (dir * (t1 - tt) > 0.0) {
    if (stats.n_accepted + stats.n_rejected >= opt.max_steps) {
      fail("step budget exhausted", tt, hh, stats);
    }
    if (hh < 4.0 * eps * std::max(std::abs(tt), std::abs(t1))) {
      fail("step size underflow", tt, hh, stats);
    }

    const double remaining = std::abs(t1 - tt);
    const bool final_step = hh >= remaining;
    const double h_mag = final_step ? remaining : hh;
    const double h = dir * h_mag;

    for (std::size_t i = 0; i < n; ++i) yw[i] = yy[i] + h * (a21 * k1[i]);
    eval(tt + c2 * h, yw, k2);
    for (std::size_t i = 0; i < n; ++i) yw[i] = yy[i] + h * (a31 * k1[i] + a32 * k2[i]);
    eval(tt + c3 * h, yw, k3);
    for (std::size_t i = 0; i < n; ++i) yw[i] = yy[i] + h * (a41 * k1[i] + a43 * k3[i]);
    eval(tt + c4 * h, yw, k4);
    for (std::size_t i = 0; i < n; ++i) {
      yw[i] = yy[i] + h * (a51 * k1[i] + a53 * k3[i] + a54 * k4[i]);
    }
    eval(tt + c5 * h, yw, k5);
    for (std::size_t i = 0; i < n; ++i) {
      yw[i] = yy[i] + h * (a61 * k1[i] + a64 * k4[i] + a65 * k5[i]);
    }
    eval(tt + c6 * h, yw, k6);
    for (std::size_t i = 0; i < n; ++i) {
      yw[i] = yy[i] + h * (a71 * k1[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    }
    eval(tt + c7 * h, yw, k7);
    for (std::size_t i = 0; i < n; ++i) {
      yw[i] = yy[i] + h * (a81 * k1[i] + a84 * k4[i] + a85 * k5[i] + a86 * k6[i] + a87 * k7[i]);
    }
    eval(tt + c8 * h, yw, k8);
    for (std::size_t i = 0; i < n; ++i) {
      yw[i] = yy[i] + h * (a91 * k1[i] + a94 * k4[i] + a95 * k5[i] + a96 * k6[i] +
                           a97 * k7[i] + a98 * k8[i]);
    }
    eval(tt + c9 * h, yw, k9);
    for (std::size_t i = 0; i < n; ++i) {
      yw[i] = yy[i] + h * (a101 * k1[i] + a104 * k4[i] + a105 * k5[i] + a106 * k6[i] +
                           a107 * k7[i] + a108 * k8[i] + a109 * k9[i]);
    }
    eval(tt + c10 * h, yw, k10);
    for (std::size_t i = 0; i < n; ++i) {
      yw[i] = yy[i] + h * (a111 * k1[i] + a114 * k4[i] + a115 * k5[i] + a116 * k6[i] +
                           a117 * k7[i] + a118 * k8[i] + a119 * k9[i] + a1110 * k10[i]);
    }
    eval(tt + c11 * h, yw, k2);  // stage 11
    for (std::size_t i = 0; i < n; ++i) {
      yw[i] = yy[i] + h * (a121 * k1[i] + a124 * k4[i] + a125 * k5[i] + a126 * k6[i] +
                           a127 * k7[i] + a128 * k8[i] + a129 * k9[i] + a1210 * k10[i] +
                           a1211 * k2[i]);
    }
    eval(tt + h, yw, k3);  // stage 12

    for (std::size_t i = 0; i < n; ++i) {
      ksum[i] = b1 * k1[i] + b6 * k6[i] + b7 * k7[i] + b8 * k8[i] + b9 * k9[i] +
                b10 * k10[i] + b11 * k2[i] + b12 * k3[i];
      yw[i] = yy[i] + h * ksum[i];
    }

    // Combined error norm: the 5th-order estimate stabilized by the 3rd-order
    // one, err = h * ||e5|| / sqrt(n * (||e5||^2 + 0.01 ||e3||^2)).
    double err3 = 0.0;
    double err5 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sci = opt.atol + opt.rtol * std::max(std::abs(yy[i]), std::abs(yw[i]));
      const complex e3 = ksum[i] - e31 * k1[i] - e32 * k9[i] - e33 * k3[i];
      const complex e5 = e51 * k1[i] + e56 * k6[i] + e57 * k7[i] + e58 * k8[i] +
                         e59 * k9[i] + e510 * k10[i] + e511 * k2[i] + e512 * k3[i];
      err3 += std::norm(e3) / (sci * sci);
      err5 += std::norm(e5) / (sci * sci);
    }
    const double deno = err5 + 0.01 * err3;
    const double err =
        deno > 0.0 ? h_mag * err5 * std::sqrt(1.0 / (static_cast<double>(n) * deno)) : 0.0;

    if (err < 1.0) {
      double scale = kMaxScale;
      if (err > 0.0) {
        scale = std::clamp(kSafety * std::pow(err, -kAlpha), kMinScale, kMaxScale);
      }
      if (last_rejected) scale = std::min(scale, 1.0);
      tt = final_step ? t1 : tt + h;
      std::swap(yy, yw);
      ++stats.n_accepted;
      stats.min_step = std::min(stats.min_step, h_mag);
      hh = h_mag * scale;
      if (opt.max_step > 0.0) hh = std::min(hh, opt.max_step);
      last_rejected = false;
      if (dir * (t1 - tt) > 0.0) eval(tt, yy, k1);
    } else {
      ++stats.n_rejected;
      hh = h_mag * std::max(kSafety * std::pow(err, -kAlpha), kMinScale);
      last_rejected = true;
    }
  }

  std::copy(yy.begin(), yy.end(), y.begin());
  stats.last_step = hh;
  if (!std::isfinite(stats.min_step)) stats.min_step = 0.0;
  return stats;
}

}  // namespace nsm
