#include "mpimex/problems/euler1d.hpp"

#include <cmath>

#include "mpimex/errors.hpp"

namespace mpimex::euler1d {

double pressure(const ConsState& u, double gamma) {
  return (gamma - 1.0) * (u[2] - 0.5 * u[1] * u[1] / u[0]);
}

ConsState physical_flux(const ConsState& u, double gamma) {
  const double v = u[1] / u[0];
  const double p = pressure(u, gamma);
  return {u[1], u[1] * v + p, v * (u[2] + p)};
}

ConsState ale_roe_flux(const ConsState& ul, const ConsState& ur, double vface, double gamma) {
  const double rl = ul[0], rr = ur[0];
  if (rl <= 0.0 || rr <= 0.0) throw StateValidity("roe flux: nonpositive density");
  const double vl = ul[1] / rl, vr = ur[1] / rr;
  const double pl = pressure(ul, gamma), pr = pressure(ur, gamma);
  if (pl <= 0.0 || pr <= 0.0) throw StateValidity("roe flux: nonpositive pressure");
  const double hl = (ul[2] + pl) / rl, hr = (ur[2] + pr) / rr;

  const double sl = std::sqrt(rl), sr = std::sqrt(rr);
  const double vt = (sl * vl + sr * vr) / (sl + sr);
  const double ht = (sl * hl + sr * hr) / (sl + sr);
  const double ct2 = (gamma - 1.0) * (ht - 0.5 * vt * vt);
  if (ct2 <= 0.0) throw StateValidity("roe flux: nonpositive Roe sound speed");
  const double ct = std::sqrt(ct2);
  const double rt = sl * sr;

  const double drho = rr - rl;
  const double dv = vr - vl;
  const double dp = pr - pl;
  const double a1 = 0.5 * (dp - rt * ct * dv) / ct2;
  const double a2 = drho - dp / ct2;
  const double a3 = 0.5 * (dp + rt * ct * dv) / ct2;
  const double l1 = std::abs(vt - ct - vface);
  const double l2 = std::abs(vt - vface);
  const double l3 = std::abs(vt + ct - vface);

  const ConsState r1 = {1.0, vt - ct, ht - vt * ct};
  const ConsState r2 = {1.0, vt, 0.5 * vt * vt};
  const ConsState r3 = {1.0, vt + ct, ht + vt * ct};

  const ConsState fl = physical_flux(ul, gamma);
  const ConsState fr = physical_flux(ur, gamma);
  ConsState out;
  for (int k = 0; k < 3; ++k) {
    const double central = 0.5 * (fl[k] - vface * ul[k] + fr[k] - vface * ur[k]);
    out[k] = central - 0.5 * (l1 * a1 * r1[k] + l2 * a2 * r2[k] + l3 * a3 * r3[k]);
  }
  return out;
}

ConsState roe_flux(const ConsState& ul, const ConsState& ur, double gamma) {
  return ale_roe_flux(ul, ur, 0.0, gamma);
}

ConsState mirror_state(const ConsState& u, double vwall) {
  const double rho = u[0];
  const double v = u[1] / rho;
  const double e_int = u[2] - 0.5 * rho * v * v;
  const double vg = 2.0 * vwall - v;
  return {rho, rho * vg, e_int + 0.5 * rho * vg * vg};
}

}  // namespace mpimex::euler1d
