#pragma once
// Gluing data, slab constants and the period h_β of a tropical 1-cycle as a
// product over its piece crossings, together with a piecewise assembly of
// ∫_β Ω that is kept symbolic in log t, the logarithms of the complex data and
// the logarithms of the endpoint radii.

#include "tropper/cycles.hpp"
#include "tropper/series.hpp"

#include <random>

namespace tropper {

struct PeriodError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// s_{ρ̲,σ}: Λ_σ → ℂ^× given by its values on the frame basis of σ. Pieces
// without a declaration carry the trivial homomorphism.
class GluingData {
 public:
  GluingData() = default;
  explicit GluingData(int rank) : rank_(rank) {}
  void set(std::size_t piece, int side, std::vector<Complex> values);
  bool has(std::size_t piece, int side) const { return values_.count({piece, side}) > 0; }
  std::vector<Complex> values(std::size_t piece, int side) const;  // all ones when undeclared
  // s(m) = ∏ s_j^{m_j}.
  Complex evaluate(std::size_t piece, int side, const IntVector& m) const;
  int rank() const { return rank_; }

 private:
  int rank_ = 0;
  std::map<std::pair<std::size_t, int>, std::vector<Complex>> values_;
};

// f_ρ̲ = a·(1 + f̃) on one piece.
struct SlabFunction {
  std::size_t piece;
  Complex constant{1, 0};
  std::optional<ExactSeries> exact;  // present when all coefficients are rational
  std::optional<FloatSeries> terms;
};

struct PeriodData {
  GluingData gluing;
  std::map<std::size_t, SlabFunction> slabs;  // by piece
  Complex slab_constant(std::size_t piece) const;
};

struct CrossingFactor {
  Crossing crossing;
  Complex s_p;
  Int t_exponent;  // κ_p⟨ξ,d_p⟩
};

struct PeriodProduct {
  int sign = 1;
  Complex constant{1, 0};
  Int t_exponent = 0;
  std::vector<CrossingFactor> breakdown;
  bool odd_valency = false;  // ν odd: unreachable for admissible cycles
  std::string str() const;
};

// s_p = a^{⟨d_p,ξ⟩}·s_arrival(ξ')/s_departure(ξ), ξ' the transported section.
Complex s_p(const TropicalManifold& m, const Crossing& c, const PeriodData& data);

PeriodProduct compute_period(const TropicalManifold& m, const TropicalOneCycle& c, const PeriodData& data);

bool same_period(const PeriodProduct& a, const PeriodProduct& b, long double tolerance = 1e-12L);
PeriodProduct inverse(const PeriodProduct& p);
PeriodProduct operator*(const PeriodProduct& a, const PeriodProduct& b);

// Symbolic value of ∫_β Ω / (2πi)^{n−1}: log_t·log t + Σ c·log(atom) +
// Σ c·log(radius) + half_units·(πi). The logarithm of a complex atom uses the
// branch with imaginary part in [0, 2π).
struct LogAtom {
  enum Kind { SlabConstant, Gluing } kind;
  std::size_t piece;
  int side;  // gluing only
  std::size_t coordinate;
  friend auto operator<=>(const LogAtom&, const LogAtom&) = default;
};

struct LogTValue {
  Int log_t = 0;
  std::map<LogAtom, Int> logs;
  std::map<Rational, Int> radii;  // log of a positive rational radius
  Int half_units = 0;             // vertex terms, each (2πi)·½ after division
  friend bool operator==(const LogTValue&, const LogTValue&) = default;
  LogTValue& operator+=(const LogTValue& o);
  std::string str() const;
};

Complex principal_log(Complex z);

// h = exp(−2πi·∫_βΩ/(2πi)^n) read off a LogTValue.
PeriodProduct exponentiate(const LogTValue& v, const PeriodData& data);

// Closed-form slab add-in for one crossing; r and r' are the log-radius
// endpoints (departure and arrival frames).
LogTValue slab_integral_closed_form(const TropicalManifold& m, const Crossing& c, const PeriodData& data,
                                    std::span<const Rational> r, std::span<const Rational> r_prime);

// Log-radius lifts of the cycle: one point per vertex (frame of its cell) and,
// for every crossing, the point where the incoming segment ends (departure
// frame) and the point where the outgoing one starts (arrival frame).
struct RadiusAssignment {
  std::vector<std::vector<Rational>> vertex;
  std::vector<std::vector<std::pair<std::vector<Rational>, std::vector<Rational>>>> crossing;  // [edge][step]
};
RadiusAssignment random_radii(const TropicalManifold& m, const TropicalOneCycle& c, std::uint64_t seed);

struct Assembly {
  LogTValue value;
  std::size_t radius_terms = 0;  // radius logarithms entered before cancellation
  PeriodProduct exponentiated;
  bool radii_cancel = false;
};
Assembly assemble_integral(const TropicalManifold& m, const TropicalOneCycle& c, const PeriodData& data, const RadiusAssignment& radii);

}  // namespace tropper
