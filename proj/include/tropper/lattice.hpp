#pragma once
// Exact integer linear algebra. Every value here is an arbitrary-precision
// integer or rational; nothing in this header touches floating point.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tropper {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct LatticeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shared storage for vectors and covectors; the tag keeps them from mixing.
template <class Tag>
class IntTuple {
 public:
  IntTuple() = default;
  explicit IntTuple(std::size_t n) : e_(n) {}
  IntTuple(std::initializer_list<long long> xs) {
    e_.reserve(xs.size());
    for (long long x : xs) e_.emplace_back(x);
  }
  explicit IntTuple(std::vector<Int> xs) : e_(std::move(xs)) {}

  std::size_t size() const { return e_.size(); }
  const Int& operator[](std::size_t i) const { return e_[i]; }
  Int& operator[](std::size_t i) { return e_[i]; }
  std::span<const Int> entries() const { return e_; }
  bool is_zero() const {
    for (const auto& x : e_)
      if (x != 0) return false;
    return true;
  }

  IntTuple& operator+=(const IntTuple& o) {
    check(o);
    for (std::size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
    return *this;
  }
  IntTuple& operator-=(const IntTuple& o) {
    check(o);
    for (std::size_t i = 0; i < e_.size(); ++i) e_[i] -= o.e_[i];
    return *this;
  }
  IntTuple& operator*=(const Int& s) {
    for (auto& x : e_) x *= s;
    return *this;
  }
  friend IntTuple operator+(IntTuple a, const IntTuple& b) { return a += b; }
  friend IntTuple operator-(IntTuple a, const IntTuple& b) { return a -= b; }
  friend IntTuple operator-(IntTuple a) { return a *= Int(-1); }
  friend IntTuple operator*(const Int& s, IntTuple a) { return a *= s; }
  friend bool operator==(const IntTuple&, const IntTuple&) = default;
  friend auto operator<=>(const IntTuple& a, const IntTuple& b) { return a.e_ <=> b.e_; }

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < e_.size(); ++i) {
      if (i) s += ",";
      s += e_[i].str();
    }
    return s + ")";
  }

 private:
  void check(const IntTuple& o) const {
    if (o.size() != size()) throw LatticeError("length mismatch");
  }
  std::vector<Int> e_;
};

struct VectorTag {};
struct CovectorTag {};
using IntVector = IntTuple<VectorTag>;
using IntCovector = IntTuple<CovectorTag>;

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long long>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_columns(std::span<const IntVector> cols, std::size_t rows);

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  const Int& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }
  Int& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }

  IntVector column(std::size_t j) const;
  IntCovector row(std::size_t i) const;
  IntMatrix transpose() const;
  bool is_zero() const;
  bool is_square() const { return r_ == c_; }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend IntVector operator*(const IntMatrix& a, const IntVector& v);
  // Covectors transform by right multiplication: (c·M)(v) = c(M v).
  friend IntCovector operator*(const IntCovector& c, const IntMatrix& m);
  friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator*(const Int& s, IntMatrix m);
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

  // Horizontal and vertical concatenation.
  static IntMatrix hcat(const IntMatrix& a, const IntMatrix& b);
  static IntMatrix vcat(const IntMatrix& a, const IntMatrix& b);
  IntMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;

  std::string str() const;

 private:
  std::size_t r_ = 0, c_ = 0;
  std::vector<Int> a_;
};

Int pairing(const IntCovector& c, const IntVector& v);

struct PrimitivePart {
  IntVector primitive;
  Int multiplier;  // always > 0
};
PrimitivePart primitive_part(const IntVector& v);
Int gcd_of(std::span<const Int> xs);

struct SNFResult {
  IntMatrix U, D, V;  // U·M·V = D
};
SNFResult smith_normal_form(const IntMatrix& m);
// Diagonal of the Smith form without computing transforms; zeros dropped.
std::vector<Int> invariant_factors(const IntMatrix& m);
std::size_t rank(const IntMatrix& m);

// Saturated basis of {v : M v = 0}.
std::vector<IntVector> integer_kernel(const IntMatrix& m);

Int determinant(const IntMatrix& m);
IntMatrix unimodular_inverse(const IntMatrix& m);
// Unique integral x with A x = b, if one exists. A must have full column rank.
std::optional<IntVector> solve_integral(const IntMatrix& a, const IntVector& b);
// Same for a matrix right-hand side, column by column.
std::optional<IntMatrix> solve_integral(const IntMatrix& a, const IntMatrix& b);

// Greatest common divisor with Bezout coefficients: g = x·a + y·b, g ≥ 0.
struct Bezout {
  Int g, x, y;
};
Bezout extended_gcd(const Int& a, const Int& b);

inline long long to_ll(const Int& x) { return static_cast<long long>(x); }

}  // namespace tropper
