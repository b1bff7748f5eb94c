#ifndef TOEPMG_SYMBOL_HPP
#define TOEPMG_SYMBOL_HPP

#include <complex>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace toepmg {

using Complex = std::complex<double>;
using MultiIndex = std::vector<int>;
using Point = std::vector<double>;

inline constexpr double pi = 3.14159265358979323846;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct UnsupportedAnalysis : Error {
  using Error::Error;
};
struct AnalysisError : Error {
  using Error::Error;
};

/// A d-variate trigonometric polynomial
///
///   s(x) = sum_j a_j exp(-i <j|x>),   j in Z^d,
///
/// stored through its finitely many nonzero Fourier coefficients. The
/// coefficient a_j is the stencil entry at offset j, so a Toeplitz matrix
/// generated by s has entry a_{s-t} at position (s,t).
///
/// Symbols built with tensor() remember their 1-D factors; that is the only
/// case in which multivariate zero-order analysis is available.
class Symbol {
 public:
  using Coefficients = std::map<MultiIndex, Complex>;

  explicit Symbol(int dim = 1);
  Symbol(int dim, Coefficients coeffs);

  static Symbol constant(Complex c, int dim = 1);
  /// 1-D symbol from a stencil row whose first entry sits at `first_index`.
  static Symbol stencil(std::span<const double> row, int first_index);
  static Symbol stencil(std::initializer_list<double> row, int first_index);
  /// Separable product s(x) = prod_k factors[k](x_k) of 1-D symbols.
  static Symbol tensor(std::span<const Symbol> factors);

  int dim() const { return dim_; }
  const Coefficients& coefficients() const { return coeffs_; }
  Complex coefficient(const MultiIndex& j) const;
  bool empty() const { return coeffs_.empty(); }

  /// Per-dimension max |j| over stored coefficients.
  MultiIndex support_radius() const;
  /// Number of diagonals of the generated banded Toeplitz matrix (d = 1).
  int bandwidth() const;

  Complex operator()(std::span<const double> x) const;
  Complex operator()(double x) const;

  /// Sum of |a_j|.
  double norm1() const;
  bool real_coefficients(double tol = 1e-14) const;
  /// a_{-j} == conj(a_j) for every stored j.
  bool real_valued(double tol = 1e-14) const;

  bool separable() const { return !factors_.empty(); }
  const std::vector<Symbol>& factors() const { return factors_; }

  Symbol& operator+=(const Symbol& other);
  Symbol& operator-=(const Symbol& other);
  Symbol& operator*=(Complex scale);

  friend Symbol operator+(Symbol a, const Symbol& b) { return a += b; }
  friend Symbol operator-(Symbol a, const Symbol& b) { return a -= b; }
  friend Symbol operator*(Symbol a, Complex s) { return a *= s; }
  friend Symbol operator*(Complex s, Symbol a) { return a *= s; }
  friend Symbol operator*(const Symbol& a, const Symbol& b);

  /// Coefficientwise equality within `tol`.
  bool approx_equal(const Symbol& other, double tol = 1e-12) const;

  std::string to_string() const;

 private:
  void normalize();

  int dim_;
  Coefficients coeffs_;
  std::vector<Symbol> factors_;
};

Complex eval(const Symbol& s, std::span<const double> x);
Symbol mul(const Symbol& s, const Symbol& t);
Symbol add(const Symbol& s, const Symbol& t);
Symbol scale(const Symbol& s, Complex c);

/// m-th partial derivative along dimension k: a_j -> a_j (-i j_k)^m.
Symbol derivative(const Symbol& s, int k, int m);

struct ZeroInfo {
  Point location;
  /// Per-dimension orders for separable symbols, a single entry at d = 1.
  std::vector<int> orders;

  int order() const;
};

struct OrderReport {
  int lf = 0;
  int hf = 0;
};

/// Zero detection threshold relative to the symbol's coefficient scale.
inline constexpr double zero_tolerance = 1e-9;

bool vanishes_at(const Symbol& s, std::span<const double> x0);

/// Order of the zero of `s` at `x0`, 0 when s(x0) != 0.
///
/// For separable d > 1 symbols this is the sum of the factor orders; general
/// multivariate symbols throw UnsupportedAnalysis.
int zero_order_at(const Symbol& s, std::span<const double> x0);
int zero_order_at(const Symbol& s, double x0);
/// Per-dimension factor orders (d = 1 gives a single entry).
std::vector<int> zero_orders_at(const Symbol& s, std::span<const double> x0);

/// Reduces an angle into [-pi, pi).
double wrap_angle(double x);

/// Omega(x): all 2^d corners y with y_j in {x_j, x_j + pi}; x comes first.
std::vector<Point> corner_points(std::span<const double> x);
/// M(x) = Omega(x) \ {x}.
std::vector<Point> mirror_points(std::span<const double> x);

/// How a transfer symbol enters the LF/HF analysis. A prolongation with
/// symbol p is analyzed as g = p / 2^d.
enum class TransferRole { normalized, restriction, prolongation };

int lf_order(const Symbol& g, TransferRole role = TransferRole::normalized);
int hf_order(const Symbol& g, TransferRole role = TransferRole::normalized);
OrderReport orders(const Symbol& g, TransferRole role = TransferRole::normalized);

/// phi_m(x) = prod_j ((1 + e^{-i x_j}) / 2)^m, shifted by e^{i x_j floor(m/2)}
/// when `centered`.
Symbol bspline_symbol(int m, int dim = 1, bool centered = true);
/// Cubic interpolation g_c = phi_4 (2 - cos x), stencil (1/32)[-1 0 9 16 9 0 -1].
Symbol cubic_interp_symbol(int dim = 1);
/// (2 + sign 2cos x)^s in every dimension (sign = +1 or -1).
Symbol power_symbol(int sign, int s, int dim = 1);
/// mu_q(x) = 2^{-dq} prod_j (1 - e^{-i x_j})^{floor(q/2)} e^{i x_j floor(q/2)}.
Symbol high_pass_symbol(int q, int dim = 1);

/// Galerkin coarse symbol: 2^{-d} sum_{y in Omega(x/2)} r(y) f(y) p(y).
/// Coefficient k of the result is coefficient 2k of r f p.
Symbol coarsen_symbol(const Symbol& f, const Symbol& r, const Symbol& p);

/// Candidate zeros of `s` on the lattice {0, +-pi/2, pi}^d plus `extra`,
/// refined locally (d = 1) and deduplicated.
std::vector<Point> find_zeros(const Symbol& s, std::span<const Point> extra = {});

/// Coarse-level image of the zero z of f: location 2 x0 mod 2pi, same order.
/// Throws AnalysisError when (r, p) break the order condition at z.
ZeroInfo track_zero(const Symbol& f, const ZeroInfo& z, const Symbol& r, const Symbol& p);

}  // namespace toepmg

#endif  // TOEPMG_SYMBOL_HPP
