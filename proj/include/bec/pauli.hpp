#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <ostream>

namespace bec {

using cplx = std::complex<double>;

inline constexpr cplx I_UNIT{0.0, 1.0};

// Complex 2x2 matrix stored in the Pauli basis,
//   A = cI*1 + c1*s1 + c2*s2 + c3*s3,
// with s1 = [[0,1],[1,0]], s2 = [[0,-i],[i,0]], s3 = [[1,0],[0,-1]].
// The field-space propagator blocks only ever populate the {1, s2, s3}
// channels; keeping coefficients explicit makes that structure testable.
struct Mat2C {
  cplx cI{}, c1{}, c2{}, c3{};

  static Mat2C identity() { return {1.0, 0.0, 0.0, 0.0}; }
  static Mat2C sigma1() { return {0.0, 1.0, 0.0, 0.0}; }
  static Mat2C sigma2() { return {0.0, 0.0, 1.0, 0.0}; }
  static Mat2C sigma3() { return {0.0, 0.0, 0.0, 1.0}; }

  static Mat2C from_entries(cplx a11, cplx a12, cplx a21, cplx a22) {
    return {0.5 * (a11 + a22), 0.5 * (a12 + a21), 0.5 * I_UNIT * (a12 - a21),
            0.5 * (a11 - a22)};
  }

  cplx e11() const { return cI + c3; }
  cplx e12() const { return c1 - I_UNIT * c2; }
  cplx e21() const { return c1 + I_UNIT * c2; }
  cplx e22() const { return cI - c3; }

  cplx entry(int i, int j) const {
    if (i == 0) return j == 0 ? e11() : e12();
    return j == 0 ? e21() : e22();
  }

  cplx trace() const { return 2.0 * cI; }

  // det(cI + c.s) = cI^2 - c.c; exact in the Pauli parametrization.
  cplx det() const { return cI * cI - c1 * c1 - c2 * c2 - c3 * c3; }

  Mat2C adjoint() const {
    using std::conj;
    return {conj(cI), conj(c1), conj(c2), conj(c3)};
  }

  Mat2C transpose() const { return {cI, c1, -c2, c3}; }

  double frobenius_norm() const {
    // Pauli components are orthogonal: |A|_F^2 = 2(|cI|^2 + |c1|^2 + ...).
    return std::sqrt(2.0 * (std::norm(cI) + std::norm(c1) + std::norm(c2) +
                            std::norm(c3)));
  }

  double max_abs_entry() const {
    return std::max(std::max(std::abs(e11()), std::abs(e12())),
                    std::max(std::abs(e21()), std::abs(e22())));
  }

  bool is_hermitian(double atol) const {
    return std::abs(cI.imag()) <= atol && std::abs(c1.imag()) <= atol &&
           std::abs(c2.imag()) <= atol && std::abs(c3.imag()) <= atol;
  }

  std::array<cplx, 2> apply(const std::array<cplx, 2>& v) const {
    return {e11() * v[0] + e12() * v[1], e21() * v[0] + e22() * v[1]};
  }

  Mat2C& operator+=(const Mat2C& o) {
    cI += o.cI;
    c1 += o.c1;
    c2 += o.c2;
    c3 += o.c3;
    return *this;
  }
  Mat2C& operator-=(const Mat2C& o) {
    cI -= o.cI;
    c1 -= o.c1;
    c2 -= o.c2;
    c3 -= o.c3;
    return *this;
  }
  Mat2C& operator*=(cplx s) {
    cI *= s;
    c1 *= s;
    c2 *= s;
    c3 *= s;
    return *this;
  }
};

inline Mat2C operator+(Mat2C a, const Mat2C& b) { return a += b; }
inline Mat2C operator-(Mat2C a, const Mat2C& b) { return a -= b; }
inline Mat2C operator-(const Mat2C& a) { return {-a.cI, -a.c1, -a.c2, -a.c3}; }
inline Mat2C operator*(Mat2C a, cplx s) { return a *= s; }
inline Mat2C operator*(cplx s, Mat2C a) { return a *= s; }
inline Mat2C operator*(Mat2C a, double s) { return a *= cplx(s, 0.0); }
inline Mat2C operator*(double s, Mat2C a) { return a *= cplx(s, 0.0); }

// (a0 + a.s)(b0 + b.s) = (a0 b0 + a.b) + (a0 b + b0 a + i a x b).s
inline Mat2C operator*(const Mat2C& a, const Mat2C& b) {
  Mat2C r;
  r.cI = a.cI * b.cI + a.c1 * b.c1 + a.c2 * b.c2 + a.c3 * b.c3;
  r.c1 = a.cI * b.c1 + b.cI * a.c1 + I_UNIT * (a.c2 * b.c3 - a.c3 * b.c2);
  r.c2 = a.cI * b.c2 + b.cI * a.c2 + I_UNIT * (a.c3 * b.c1 - a.c1 * b.c3);
  r.c3 = a.cI * b.c3 + b.cI * a.c3 + I_UNIT * (a.c1 * b.c2 - a.c2 * b.c1);
  return r;
}

inline std::ostream& operator<<(std::ostream& os, const Mat2C& a) {
  return os << "[[" << a.e11() << ", " << a.e12() << "], [" << a.e21() << ", "
            << a.e22() << "]]";
}

}  // namespace bec
