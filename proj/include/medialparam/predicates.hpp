#pragma once

// Exact orientation and in-circle tests in the style of Shewchuk's adaptive
// predicates: a cheap floating-point evaluation guarded by a static error
// bound, falling back to exact expansion arithmetic when the sign is in
// doubt.  Requires IEEE-754 doubles with round-to-nearest and no FMA
// contraction in this translation unit.

#include <cmath>
#include <stdexcept>

#include "medialparam/geom.hpp"

namespace medial {

namespace expansion {

// 2^-53: half an ulp of 1.0, the usual unit roundoff.
inline constexpr double kEps = 1.1102230246251565e-16;
// 2^27 + 1, used to split doubles into half-width halves.
inline constexpr double kSplitter = 134217729.0;

inline constexpr double kCcwErrBound = (3.0 + 16.0 * kEps) * kEps;
inline constexpr double kIccErrBound = (10.0 + 96.0 * kEps) * kEps;

inline void fast_two_sum(double a, double b, double& hi, double& lo) {
  hi = a + b;
  double bvirt = hi - a;
  lo = b - bvirt;
}

inline void two_sum(double a, double b, double& hi, double& lo) {
  hi = a + b;
  double bvirt = hi - a;
  double avirt = hi - bvirt;
  double bround = b - bvirt;
  double around = a - avirt;
  lo = around + bround;
}

inline void two_diff(double a, double b, double& hi, double& lo) {
  hi = a - b;
  double bvirt = a - hi;
  double avirt = hi + bvirt;
  double bround = bvirt - b;
  double around = a - avirt;
  lo = around + bround;
}

inline void split(double a, double& ahi, double& alo) {
  double c = kSplitter * a;
  double abig = c - a;
  ahi = c - abig;
  alo = a - ahi;
}

inline void two_product(double a, double b, double& hi, double& lo) {
  hi = a * b;
  double ahi, alo, bhi, blo;
  split(a, ahi, alo);
  split(b, bhi, blo);
  double err1 = hi - ahi * bhi;
  double err2 = err1 - alo * bhi;
  double err3 = err2 - ahi * blo;
  lo = alo * blo - err3;
}

inline void two_product_presplit(double a, double b, double bhi, double blo,
                                 double& hi, double& lo) {
  hi = a * b;
  double ahi, alo;
  split(a, ahi, alo);
  double err1 = hi - ahi * bhi;
  double err2 = err1 - alo * bhi;
  double err3 = err2 - ahi * blo;
  lo = alo * blo - err3;
}

inline void two_one_diff(double a1, double a0, double b, double& x2,
                         double& x1, double& x0) {
  double i;
  two_diff(a0, b, i, x0);
  two_sum(a1, i, x2, x1);
}

// (a1,a0) - (b1,b0) as a four-component expansion x3..x0.
inline void two_two_diff(double a1, double a0, double b1, double b0,
                         double& x3, double& x2, double& x1, double& x0) {
  double j, r0;
  two_one_diff(a1, a0, b0, j, r0, x0);
  two_one_diff(j, r0, b1, x3, x2, x1);
}

// Sum of two nonoverlapping expansions, zero components elided.
inline int sum_zeroelim(int elen, const double* e, int flen, const double* f,
                        double* h) {
  double q, qnew, hh;
  double enow = e[0];
  double fnow = f[0];
  int eindex = 0, findex = 0;
  if ((fnow > enow) == (fnow > -enow)) {
    q = enow;
    if (++eindex < elen) enow = e[eindex];
  } else {
    q = fnow;
    if (++findex < flen) fnow = f[findex];
  }
  int hindex = 0;
  if ((eindex < elen) && (findex < flen)) {
    if ((fnow > enow) == (fnow > -enow)) {
      fast_two_sum(enow, q, qnew, hh);
      if (++eindex < elen) enow = e[eindex];
    } else {
      fast_two_sum(fnow, q, qnew, hh);
      if (++findex < flen) fnow = f[findex];
    }
    q = qnew;
    if (hh != 0.0) h[hindex++] = hh;
    while ((eindex < elen) && (findex < flen)) {
      if ((fnow > enow) == (fnow > -enow)) {
        two_sum(q, enow, qnew, hh);
        if (++eindex < elen) enow = e[eindex];
      } else {
        two_sum(q, fnow, qnew, hh);
        if (++findex < flen) fnow = f[findex];
      }
      q = qnew;
      if (hh != 0.0) h[hindex++] = hh;
    }
  }
  while (eindex < elen) {
    two_sum(q, enow, qnew, hh);
    if (++eindex < elen) enow = e[eindex];
    q = qnew;
    if (hh != 0.0) h[hindex++] = hh;
  }
  while (findex < flen) {
    two_sum(q, fnow, qnew, hh);
    if (++findex < flen) fnow = f[findex];
    q = qnew;
    if (hh != 0.0) h[hindex++] = hh;
  }
  if ((q != 0.0) || (hindex == 0)) h[hindex++] = q;
  return hindex;
}

// e scaled by b, zero components elided.
inline int scale_zeroelim(int elen, const double* e, double b, double* h) {
  double bhi, blo;
  split(b, bhi, blo);
  double q, hh;
  two_product_presplit(e[0], b, bhi, blo, q, hh);
  int hindex = 0;
  if (hh != 0.0) h[hindex++] = hh;
  for (int eindex = 1; eindex < elen; eindex++) {
    double product1, product0, sum;
    two_product_presplit(e[eindex], b, bhi, blo, product1, product0);
    two_sum(q, product0, sum, hh);
    if (hh != 0.0) h[hindex++] = hh;
    fast_two_sum(product1, sum, q, hh);
    if (hh != 0.0) h[hindex++] = hh;
  }
  if ((q != 0.0) || (hindex == 0)) h[hindex++] = q;
  return hindex;
}

inline int negate(int elen, double* e) {
  for (int i = 0; i < elen; i++) e[i] = -e[i];
  return elen;
}

inline int sign_of(double v) { return (v > 0.0) ? 1 : ((v < 0.0) ? -1 : 0); }

// Expansions are sorted by increasing magnitude, so the last nonzero
// component carries the sign.
inline int expansion_sign(int len, const double* e) {
  return sign_of(e[len - 1]);
}

}  // namespace expansion

namespace detail {

inline int orient2d_exact(const Point2& a, const Point2& b, const Point2& c) {
  using namespace expansion;
  // det = (ax by - ay bx) + (ay cx - ax cy) + (bx cy - by cx)
  double t1, t0, s1, s0;
  double aterms[4], bterms[4], cterms[4];
  two_product(a.x, b.y, t1, t0);
  two_product(a.y, b.x, s1, s0);
  two_two_diff(t1, t0, s1, s0, aterms[3], aterms[2], aterms[1], aterms[0]);
  two_product(a.y, c.x, t1, t0);
  two_product(a.x, c.y, s1, s0);
  two_two_diff(t1, t0, s1, s0, bterms[3], bterms[2], bterms[1], bterms[0]);
  two_product(b.x, c.y, t1, t0);
  two_product(b.y, c.x, s1, s0);
  two_two_diff(t1, t0, s1, s0, cterms[3], cterms[2], cterms[1], cterms[0]);

  double v[8], w[12];
  int vlen = sum_zeroelim(4, aterms, 4, bterms, v);
  int wlen = sum_zeroelim(vlen, v, 4, cterms, w);
  return expansion_sign(wlen, w);
}

inline int incircle_exact(const Point2& a, const Point2& b, const Point2& c,
                          const Point2& d) {
  using namespace expansion;
  double t1, t0, s1, s0;
  double ab[4], bc[4], cd[4], da[4], ac[4], bd[4];

  two_product(a.x, b.y, t1, t0);
  two_product(b.x, a.y, s1, s0);
  two_two_diff(t1, t0, s1, s0, ab[3], ab[2], ab[1], ab[0]);

  two_product(b.x, c.y, t1, t0);
  two_product(c.x, b.y, s1, s0);
  two_two_diff(t1, t0, s1, s0, bc[3], bc[2], bc[1], bc[0]);

  two_product(c.x, d.y, t1, t0);
  two_product(d.x, c.y, s1, s0);
  two_two_diff(t1, t0, s1, s0, cd[3], cd[2], cd[1], cd[0]);

  two_product(d.x, a.y, t1, t0);
  two_product(a.x, d.y, s1, s0);
  two_two_diff(t1, t0, s1, s0, da[3], da[2], da[1], da[0]);

  two_product(a.x, c.y, t1, t0);
  two_product(c.x, a.y, s1, s0);
  two_two_diff(t1, t0, s1, s0, ac[3], ac[2], ac[1], ac[0]);

  two_product(b.x, d.y, t1, t0);
  two_product(d.x, b.y, s1, s0);
  two_two_diff(t1, t0, s1, s0, bd[3], bd[2], bd[1], bd[0]);

  double temp8[8];
  double cda[12], dab[12], abc[12], bcd[12];
  int t8len, cdalen, dablen, abclen, bcdlen;

  t8len = sum_zeroelim(4, cd, 4, da, temp8);
  cdalen = sum_zeroelim(t8len, temp8, 4, ac, cda);

  t8len = sum_zeroelim(4, da, 4, ab, temp8);
  dablen = sum_zeroelim(t8len, temp8, 4, bd, dab);

  negate(4, ac);
  negate(4, bd);

  t8len = sum_zeroelim(4, ab, 4, bc, temp8);
  abclen = sum_zeroelim(t8len, temp8, 4, ac, abc);

  t8len = sum_zeroelim(4, bc, 4, cd, temp8);
  bcdlen = sum_zeroelim(t8len, temp8, 4, bd, bcd);

  // det = alift*bcd - blift*cda + clift*dab - dlift*abc
  double tmp24[24], tmp48x[48], tmp48y[48];
  double adet[96], bdet[96], cdet[96], ddet[96];
  int alen, blen, clen, dlen, xlen, ylen, t24len;

  t24len = scale_zeroelim(bcdlen, bcd, a.x, tmp24);
  xlen = scale_zeroelim(t24len, tmp24, a.x, tmp48x);
  t24len = scale_zeroelim(bcdlen, bcd, a.y, tmp24);
  ylen = scale_zeroelim(t24len, tmp24, a.y, tmp48y);
  alen = sum_zeroelim(xlen, tmp48x, ylen, tmp48y, adet);

  t24len = scale_zeroelim(cdalen, cda, b.x, tmp24);
  xlen = scale_zeroelim(t24len, tmp24, -b.x, tmp48x);
  t24len = scale_zeroelim(cdalen, cda, b.y, tmp24);
  ylen = scale_zeroelim(t24len, tmp24, -b.y, tmp48y);
  blen = sum_zeroelim(xlen, tmp48x, ylen, tmp48y, bdet);

  t24len = scale_zeroelim(dablen, dab, c.x, tmp24);
  xlen = scale_zeroelim(t24len, tmp24, c.x, tmp48x);
  t24len = scale_zeroelim(dablen, dab, c.y, tmp24);
  ylen = scale_zeroelim(t24len, tmp24, c.y, tmp48y);
  clen = sum_zeroelim(xlen, tmp48x, ylen, tmp48y, cdet);

  t24len = scale_zeroelim(abclen, abc, d.x, tmp24);
  xlen = scale_zeroelim(t24len, tmp24, -d.x, tmp48x);
  t24len = scale_zeroelim(abclen, abc, d.y, tmp24);
  ylen = scale_zeroelim(t24len, tmp24, -d.y, tmp48y);
  dlen = sum_zeroelim(xlen, tmp48x, ylen, tmp48y, ddet);

  double abdet[192], cddet[192], deter[384];
  int ablen2 = sum_zeroelim(alen, adet, blen, bdet, abdet);
  int cdlen2 = sum_zeroelim(clen, cdet, dlen, ddet, cddet);
  int deterlen = sum_zeroelim(ablen2, abdet, cdlen2, cddet, deter);
  return expansion_sign(deterlen, deter);
}

}  // namespace detail

// Sign of the signed area of triangle (a, b, c): +1 counterclockwise,
// -1 clockwise, 0 exactly collinear.
inline int orient2d(const Point2& a, const Point2& b, const Point2& c) {
  using namespace expansion;
  double detleft = (a.x - c.x) * (b.y - c.y);
  double detright = (a.y - c.y) * (b.x - c.x);
  double det = detleft - detright;
  double detsum;
  if (detleft > 0.0) {
    if (detright <= 0.0) return sign_of(det);
    detsum = detleft + detright;
  } else if (detleft < 0.0) {
    if (detright >= 0.0) return sign_of(det);
    detsum = -detleft - detright;
  } else {
    // detleft is exactly zero, so the sign of det is the sign of -detright,
    // which floating arithmetic gets right.
    return sign_of(det);
  }
  double errbound = kCcwErrBound * detsum;
  if ((det >= errbound) || (-det >= errbound)) return sign_of(det);
  return detail::orient2d_exact(a, b, c);
}

// +1 iff d lies strictly inside the circumcircle of (a, b, c), which must be
// in counterclockwise order; 0 on the circle, -1 outside.
inline int incircle(const Point2& a, const Point2& b, const Point2& c,
                    const Point2& d) {
  if (orient2d(a, b, c) != 1) {
    throw std::invalid_argument(
        "incircle: triangle (a, b, c) must be counterclockwise");
  }
  using namespace expansion;
  double adx = a.x - d.x, bdx = b.x - d.x, cdx = c.x - d.x;
  double ady = a.y - d.y, bdy = b.y - d.y, cdy = c.y - d.y;

  double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  double alift = adx * adx + ady * ady;
  double cdxady = cdx * ady, adxcdy = adx * cdy;
  double blift = bdx * bdx + bdy * bdy;
  double adxbdy = adx * bdy, bdxady = bdx * ady;
  double clift = cdx * cdx + cdy * cdy;

  double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) +
               clift * (adxbdy - bdxady);
  double permanent = (std::fabs(bdxcdy) + std::fabs(cdxbdy)) * alift +
                     (std::fabs(cdxady) + std::fabs(adxcdy)) * blift +
                     (std::fabs(adxbdy) + std::fabs(bdxady)) * clift;
  double errbound = kIccErrBound * permanent;
  if ((det > errbound) || (-det > errbound)) return sign_of(det);
  return detail::incircle_exact(a, b, c, d);
}

}  // namespace medial
