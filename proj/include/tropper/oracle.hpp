#pragma once
// Numeric cross-checks of the period computation, independent of the
// symbolic engine: torus quadrature, the two-chart Tate integral, wall
// integrals of log(1+f̃), degrees of codimension-one subtori, vertex add-in
// measures and toric moment maps.

#include "tropper/series.hpp"

#include <random>
#include <span>
#include <string>
#include <vector>

namespace tropper {

struct OracleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadratureConfig {
  std::size_t samples = 0;         // per angular dimension; 0 picks the default for the dimension
  std::vector<Complex> t_samples;  // empty picks the default 3×3 grid
  long double tolerance = 1e-10L;

  std::size_t samples_for(std::size_t dim) const;  // ≥ 64
  std::vector<Complex> t_grid() const;
  void validate() const;
};

// ∫ over (S¹)^n of dlog z₁∧…∧dlog z_n on |z_j| = r_j.
Complex integrate_alpha(int n, const QuadratureConfig& cfg = {});

// ∫_β dz/z on E_t = ℂ^×/t^{kℤ}, patched from the smooth chart u ∈ [ε̂, 1/ε̂']
// and the node chart z ∈ [t^k/ε̂', ε̂] with z = t^k/w. arg t is taken in [0, 2π).
struct TatePatch {
  Complex g1, g2;
  Complex total() const { return g1 + g2; }
  long double winding = 0;  // turns accumulated by arg z along the node chart
};
TatePatch tate_patches(Complex t, int k, const QuadratureConfig& cfg = {});
Complex tate_period(Complex t, int k, const QuadratureConfig& cfg = {});

// ∫ over (ℝ/2πℤ)^{n−1} of log(1 + f̃(t, r_j e^{iθ_j})) dθ for f̃ without a
// constant term; the rank of f̃ is n−1.
Complex wall_integral(const FloatSeries& f_tilde, std::span<const long double> radii, Complex t, const QuadratureConfig& cfg = {});

// ∫_T dθ₁…d̂θ_j…dθ_n over T = {φ : φ(ξ) = 0} ⊂ Hom(ℤ^n, ℝ/ℤ), j one-based.
Int torus_degree(const IntVector& xi, std::size_t j);
long double torus_degree_numeric(const IntVector& xi, std::size_t j, std::size_t samples = 16);

// Edges at a vertex as ε·ξ; the vectors are nonzero and sum to zero.
struct VertexStar {
  std::size_t dim = 1;
  std::vector<IntVector> vectors;
  void validate() const;
};
// Signed measure of Γ_v over (2π)^dim, reduced to [0, 1). Γ_v is the level
// function Σ_j ⌊⟨φ, ξ_j⟩⌋ on Hom(Λ_v, ℝ/ℤ), integrated cell by cell.
long double vertex_measure(const VertexStar& star);
Rational vertex_measure_exact(const VertexStar& star);  // before reduction
// Chain of trivalent stars w₁, …, w_{V−2}: f_j carries ξ₁ + … + ξ_{j+1}.
std::vector<VertexStar> make_trivalent(const VertexStar& star);
// Balanced star with entries in [−3, 3].
VertexStar random_star(std::mt19937_64& rng, std::size_t dim, std::size_t valency);

// μ(z) = Σ|z^m|²·m / Σ|z^m|² over the lattice points m of σ.
std::vector<long double> moment_map(std::span<const IntVector> points, std::span<const Complex> z);
// Positive real point with μ(S(b)) = b, by Newton's method in log |z|; rank one.
std::vector<long double> canonical_section(std::span<const IntVector> points, std::span<const long double> b);

// 1 + f̃ with two t-order-0 terms in the half-space m₀ > 0 and two t-terms,
// then normalized to order `order`.
ExactSeries random_normalized_slab(std::mt19937_64& rng, std::size_t rank, int order);

struct OracleRow {
  std::string quantity;
  Complex closed_form;
  Complex numeric;
  long double error = 0;
  bool pass = false;
};
// Fixed check table; `seed` drives the random stars and slab functions.
std::vector<OracleRow> verification_suite(const QuadratureConfig& cfg, std::uint64_t seed);

}  // namespace tropper
