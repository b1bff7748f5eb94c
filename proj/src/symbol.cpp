#include "toepmg/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace toepmg {

namespace {

void require_same_dim(const Symbol& a, const Symbol& b, const char* what) {
  if (a.dim() != b.dim())
    throw DimensionMismatch(std::string(what) + ": symbols of dimension " + std::to_string(a.dim()) +
                            " and " + std::to_string(b.dim()));
}

Complex ipow(Complex base, int m) {
  Complex out{1.0, 0.0};
  for (int i = 0; i < m; ++i) out *= base;
  return out;
}

double binomial(int m, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (m - k + i) / i;
  return c;
}

Symbol power(const Symbol& base, int s) {
  Symbol out = Symbol::constant(1.0, base.dim());
  for (int i = 0; i < s; ++i) out = out * base;
  return out;
}

Symbol replicate(const Symbol& factor, int dim) {
  if (dim == 1) return factor;
  std::vector<Symbol> factors(static_cast<std::size_t>(dim), factor);
  return Symbol::tensor(factors);
}

// Scale of the m-th derivative used to decide whether its value is zero.
double derivative_scale(const Symbol& s, int k, int m) {
  double scale = 0.0;
  for (const auto& [j, a] : s.coefficients()) scale += std::abs(a) * std::pow(std::abs(j[k]), m);
  return scale;
}

int zero_order_1d(const Symbol& s, double x0) {
  if (s.empty()) throw AnalysisError("zero order of the zero symbol is undefined");
  const double x[] = {x0};
  if (!vanishes_at(s, x)) return 0;
  const int degree = s.support_radius()[0];
  // A nonzero trigonometric polynomial of degree D has zeros of order <= 2D.
  for (int m = 1; m <= 2 * degree + 1; ++m) {
    Complex value{0.0, 0.0};
    for (const auto& [j, a] : s.coefficients())
      value += a * ipow(Complex(0.0, -j[0]), m) * std::exp(Complex(0.0, -j[0] * x0));
    if (std::abs(value) > zero_tolerance * derivative_scale(s, 0, m)) return m;
  }
  throw AnalysisError("symbol vanishes identically");
}

}  // namespace

Symbol::Symbol(int dim) : dim_(dim) {
  if (dim < 1) throw DimensionMismatch("symbol dimension must be positive");
}

Symbol::Symbol(int dim, Coefficients coeffs) : Symbol(dim) {
  for (const auto& [j, a] : coeffs) {
    if (static_cast<int>(j.size()) != dim) throw DimensionMismatch("multi-index length differs from dimension");
  }
  coeffs_ = std::move(coeffs);
  normalize();
}

Symbol Symbol::constant(Complex c, int dim) {
  return Symbol(dim, {{MultiIndex(static_cast<std::size_t>(dim), 0), c}});
}

Symbol Symbol::stencil(std::span<const double> row, int first_index) {
  Coefficients c;
  for (std::size_t i = 0; i < row.size(); ++i) c[{first_index + static_cast<int>(i)}] += row[i];
  return Symbol(1, std::move(c));
}

Symbol Symbol::stencil(std::initializer_list<double> row, int first_index) {
  return stencil(std::span<const double>(row.begin(), row.size()), first_index);
}

Symbol Symbol::tensor(std::span<const Symbol> factors) {
  if (factors.empty()) throw DimensionMismatch("tensor product of zero factors");
  Coefficients acc{{MultiIndex{}, Complex(1.0)}};
  for (const auto& f : factors) {
    if (f.dim() != 1) throw DimensionMismatch("tensor factors must be one-dimensional");
    Coefficients next;
    for (const auto& [j, a] : acc) {
      for (const auto& [k, b] : f.coefficients()) {
        MultiIndex jk = j;
        jk.push_back(k[0]);
        next[jk] += a * b;
      }
    }
    acc = std::move(next);
  }
  Symbol out(static_cast<int>(factors.size()), std::move(acc));
  if (factors.size() > 1) out.factors_.assign(factors.begin(), factors.end());
  return out;
}

Complex Symbol::coefficient(const MultiIndex& j) const {
  auto it = coeffs_.find(j);
  return it == coeffs_.end() ? Complex{} : it->second;
}

MultiIndex Symbol::support_radius() const {
  MultiIndex radius(static_cast<std::size_t>(dim_), 0);
  for (const auto& [j, a] : coeffs_)
    for (int k = 0; k < dim_; ++k) radius[k] = std::max(radius[k], std::abs(j[k]));
  return radius;
}

int Symbol::bandwidth() const { return 2 * support_radius()[0] + 1; }

Complex Symbol::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) throw DimensionMismatch("evaluation point has wrong dimension");
  Complex sum{0.0, 0.0};
  for (const auto& [j, a] : coeffs_) {
    double phase = 0.0;
    for (int k = 0; k < dim_; ++k) phase += j[k] * x[k];
    sum += a * Complex(std::cos(phase), -std::sin(phase));
  }
  return sum;
}

Complex Symbol::operator()(double x) const {
  const double p[] = {x};
  return (*this)(p);
}

double Symbol::norm1() const {
  double n = 0.0;
  for (const auto& [j, a] : coeffs_) n += std::abs(a);
  return n;
}

bool Symbol::real_coefficients(double tol) const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [tol](const auto& kv) { return std::abs(kv.second.imag()) <= tol; });
}

bool Symbol::real_valued(double tol) const {
  for (const auto& [j, a] : coeffs_) {
    MultiIndex neg = j;
    for (auto& v : neg) v = -v;
    if (std::abs(coefficient(neg) - std::conj(a)) > tol) return false;
  }
  return true;
}

Symbol& Symbol::operator+=(const Symbol& other) {
  require_same_dim(*this, other, "add");
  for (const auto& [j, a] : other.coeffs_) coeffs_[j] += a;
  factors_.clear();
  normalize();
  return *this;
}

Symbol& Symbol::operator-=(const Symbol& other) {
  require_same_dim(*this, other, "subtract");
  for (const auto& [j, a] : other.coeffs_) coeffs_[j] -= a;
  factors_.clear();
  normalize();
  return *this;
}

Symbol& Symbol::operator*=(Complex scale) {
  for (auto& [j, a] : coeffs_) a *= scale;
  if (!factors_.empty()) factors_.front() *= scale;
  normalize();
  return *this;
}

Symbol operator*(const Symbol& a, const Symbol& b) {
  require_same_dim(a, b, "mul");
  Symbol::Coefficients c;
  for (const auto& [j, x] : a.coeffs_) {
    for (const auto& [k, y] : b.coeffs_) {
      MultiIndex jk(j.size());
      for (std::size_t i = 0; i < j.size(); ++i) jk[i] = j[i] + k[i];
      c[jk] += x * y;
    }
  }
  Symbol out(a.dim(), std::move(c));
  if (a.separable() && b.separable()) {
    for (std::size_t i = 0; i < a.factors_.size(); ++i) out.factors_.push_back(a.factors_[i] * b.factors_[i]);
  }
  return out;
}

bool Symbol::approx_equal(const Symbol& other, double tol) const {
  if (dim_ != other.dim_) return false;
  for (const auto& [j, a] : coeffs_)
    if (std::abs(a - other.coefficient(j)) > tol) return false;
  for (const auto& [j, a] : other.coeffs_)
    if (std::abs(a - coefficient(j)) > tol) return false;
  return true;
}

std::string Symbol::to_string() const {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [j, a] : coeffs_) {
    if (!first) os << ", ";
    first = false;
    if (dim_ == 1) {
      os << j[0];
    } else {
      os << "(";
      for (std::size_t i = 0; i < j.size(); ++i) os << (i ? "," : "") << j[i];
      os << ")";
    }
    os << ": " << a.real();
    if (a.imag() != 0.0) os << (a.imag() < 0 ? "-" : "+") << std::abs(a.imag()) << "i";
  }
  os << "}";
  return os.str();
}

void Symbol::normalize() {
  double scale = 0.0;
  for (const auto& [j, a] : coeffs_) scale = std::max(scale, std::abs(a));
  const double cut = 4.0 * std::numeric_limits<double>::epsilon() * scale;
  std::erase_if(coeffs_, [cut](const auto& kv) { return std::abs(kv.second) <= cut; });
}

Complex eval(const Symbol& s, std::span<const double> x) { return s(x); }
Symbol mul(const Symbol& s, const Symbol& t) { return s * t; }
Symbol add(const Symbol& s, const Symbol& t) { return s + t; }
Symbol scale(const Symbol& s, Complex c) { return s * c; }

Symbol derivative(const Symbol& s, int k, int m) {
  if (m < 0) throw std::invalid_argument("derivative order must be nonnegative");
  if (k < 0 || k >= s.dim()) throw DimensionMismatch("derivative dimension out of range");
  if (m == 0) return s;
  Symbol::Coefficients c;
  for (const auto& [j, a] : s.coefficients()) c[j] = a * ipow(Complex(0.0, -j[k]), m);
  return Symbol(s.dim(), std::move(c));
}

int ZeroInfo::order() const { return std::accumulate(orders.begin(), orders.end(), 0); }

bool vanishes_at(const Symbol& s, std::span<const double> x0) {
  return std::abs(s(x0)) <= zero_tolerance * s.norm1();
}

std::vector<int> zero_orders_at(const Symbol& s, std::span<const double> x0) {
  if (static_cast<int>(x0.size()) != s.dim()) throw DimensionMismatch("point has wrong dimension");
  if (s.dim() == 1) return {zero_order_1d(s, x0[0])};
  if (!s.separable()) throw UnsupportedAnalysis("zero order of a non-separable multivariate symbol");
  std::vector<int> out;
  for (int k = 0; k < s.dim(); ++k) out.push_back(zero_order_1d(s.factors()[k], x0[k]));
  return out;
}

int zero_order_at(const Symbol& s, std::span<const double> x0) {
  auto o = zero_orders_at(s, x0);
  return std::accumulate(o.begin(), o.end(), 0);
}

int zero_order_at(const Symbol& s, double x0) {
  const double x[] = {x0};
  return zero_order_at(s, x);
}

double wrap_angle(double x) {
  double y = std::fmod(x + pi, 2.0 * pi);
  if (y < 0) y += 2.0 * pi;
  y -= pi;
  // fmod rounding can land exactly on +pi
  if (y >= pi) y -= 2.0 * pi;
  return y;
}

std::vector<Point> corner_points(std::span<const double> x) {
  const std::size_t d = x.size();
  std::vector<Point> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    Point y(d);
    for (std::size_t j = 0; j < d; ++j) y[j] = wrap_angle((mask >> j) & 1u ? x[j] + pi : x[j]);
    out.push_back(std::move(y));
  }
  return out;
}

std::vector<Point> mirror_points(std::span<const double> x) {
  auto all = corner_points(x);
  all.erase(all.begin());
  return all;
}

namespace {

Symbol normalized_for(const Symbol& g, TransferRole role) {
  if (role != TransferRole::prolongation) return g;
  return g * Complex(std::ldexp(1.0, -g.dim()));
}

int lf_1d(const Symbol& g) {
  if (std::abs(g(0.0) - 1.0) > zero_tolerance * std::max(1.0, g.norm1())) return 0;
  Symbol shifted = g - Symbol::constant(1.0);
  if (shifted.empty()) return std::numeric_limits<int>::max();
  return zero_order_at(shifted, 0.0);
}

}  // namespace

int lf_order(const Symbol& g0, TransferRole role) {
  Symbol g = normalized_for(g0, role);
  if (g.dim() == 1) return lf_1d(g);
  if (!g.separable()) throw UnsupportedAnalysis("LF order of a non-separable multivariate symbol");
  // g - 1 ~ sum_k (g_k - 1) near the origin
  int lf = std::numeric_limits<int>::max();
  for (const auto& f : g.factors()) lf = std::min(lf, lf_1d(f));
  return lf;
}

int hf_order(const Symbol& g0, TransferRole role) {
  Symbol g = normalized_for(g0, role);
  if (g.dim() > 1 && !g.separable()) throw UnsupportedAnalysis("HF order of a non-separable multivariate symbol");
  const Point origin(static_cast<std::size_t>(g.dim()), 0.0);
  int hf = std::numeric_limits<int>::max();
  for (const auto& y : mirror_points(origin)) hf = std::min(hf, zero_order_at(g, y));
  return hf;
}

OrderReport orders(const Symbol& g, TransferRole role) { return {lf_order(g, role), hf_order(g, role)}; }

Symbol bspline_symbol(int m, int dim, bool centered) {
  if (m < 1) throw std::invalid_argument("B-spline order must be positive");
  std::vector<double> row(static_cast<std::size_t>(m) + 1);
  for (int k = 0; k <= m; ++k) row[k] = std::ldexp(binomial(m, k), -m);
  return replicate(Symbol::stencil(row, centered ? -(m / 2) : 0), dim);
}

Symbol cubic_interp_symbol(int dim) {
  Symbol g = bspline_symbol(4, 1, true) * Symbol::stencil({-0.5, 2.0, -0.5}, -1);
  return replicate(g, dim);
}

Symbol power_symbol(int sign, int s, int dim) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("power symbol sign must be +1 or -1");
  if (s < 1) throw std::invalid_argument("power symbol exponent must be positive");
  const double c = sign;
  return replicate(power(Symbol::stencil({c, 2.0, c}, -1), s), dim);
}

Symbol high_pass_symbol(int q, int dim) {
  if (q < 1) throw std::invalid_argument("high-pass order must be positive");
  const int e = q / 2;
  Symbol f = power(Symbol::stencil({1.0, -1.0}, 0), e);
  Symbol::Coefficients shifted;
  for (const auto& [j, a] : f.coefficients()) shifted[{j[0] - e}] = a * std::ldexp(1.0, -q);
  return replicate(Symbol(1, std::move(shifted)), dim);
}

Symbol coarsen_symbol(const Symbol& f, const Symbol& r, const Symbol& p) {
  require_same_dim(f, r, "coarsen_symbol");
  require_same_dim(f, p, "coarsen_symbol");
  const Symbol rfp = r * f * p;
  Symbol::Coefficients c;
  for (const auto& [j, a] : rfp.coefficients()) {
    if (std::all_of(j.begin(), j.end(), [](int v) { return v % 2 == 0; })) {
      MultiIndex half(j.size());
      for (std::size_t i = 0; i < j.size(); ++i) half[i] = j[i] / 2;
      c[half] = a;
    }
  }
  Symbol out(f.dim(), std::move(c));
  if (rfp.separable()) {
    std::vector<Symbol> factors;
    for (const auto& g : rfp.factors()) factors.push_back(coarsen_symbol(g, Symbol::constant(1.0), Symbol::constant(1.0)));
    return Symbol::tensor(factors);
  }
  return out;
}

namespace {

double golden_min_abs(const Symbol& s, double lo, double hi) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - ratio * (b - a), d = a + ratio * (b - a);
  for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
    if (std::abs(s(c)) < std::abs(s(d))) {
      b = d;
    } else {
      a = c;
    }
    c = b - ratio * (b - a);
    d = a + ratio * (b - a);
  }
  return 0.5 * (a + b);
}

bool same_point(const Point& a, const Point& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(wrap_angle(a[i] - b[i])) > 1e-6) return false;
  return true;
}

}  // namespace

std::vector<Point> find_zeros(const Symbol& s, std::span<const Point> extra) {
  const std::size_t d = static_cast<std::size_t>(s.dim());
  const double lattice[] = {-pi, -pi / 2, 0.0, pi / 2};
  std::vector<Point> candidates;
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= 4;
  for (std::size_t idx = 0; idx < total; ++idx) {
    Point x(d);
    std::size_t rest = idx;
    for (std::size_t i = 0; i < d; ++i, rest /= 4) x[i] = lattice[rest % 4];
    candidates.push_back(std::move(x));
  }
  for (const auto& e : extra) {
    if (e.size() != d) throw DimensionMismatch("candidate zero has wrong dimension");
    candidates.push_back(e);
  }

  std::vector<Point> zeros;
  auto accept = [&](Point x) {
    for (auto& v : x) v = wrap_angle(v);
    for (const auto& z : zeros)
      if (same_point(z, x)) return;
    zeros.push_back(std::move(x));
  };
  for (const auto& c : candidates) {
    if (vanishes_at(s, c)) {
      accept(c);
    } else if (d == 1) {
      Point refined{golden_min_abs(s, c[0] - pi / 4, c[0] + pi / 4)};
      if (vanishes_at(s, refined)) accept(refined);
    }
  }
  return zeros;
}

ZeroInfo track_zero(const Symbol& f, const ZeroInfo& z, const Symbol& r, const Symbol& p) {
  require_same_dim(f, r, "track_zero");
  require_same_dim(f, p, "track_zero");
  if (!vanishes_at(f, z.location)) throw AnalysisError("tracked point is not a zero of f");
  const int order = z.order();
  for (const auto& y : mirror_points(z.location)) {
    if (zero_order_at(r, y) + zero_order_at(p, y) < order)
      throw AnalysisError("transfer symbols do not vanish fast enough at a mirror point");
  }
  Complex sum{};
  for (const auto& y : corner_points(z.location)) sum += r(y) * p(y);
  if (std::abs(sum) <= zero_tolerance * r.norm1() * p.norm1())
    throw AnalysisError("sum of r p over the corner set vanishes at the zero");

  ZeroInfo out;
  for (double v : z.location) out.location.push_back(wrap_angle(2.0 * v));
  const Symbol coarse = coarsen_symbol(f, r, p);
  out.orders = zero_orders_at(coarse, out.location);
  if (out.order() != order) throw AnalysisError("coarse symbol zero order differs from the fine one");
  return out;
}

}  // namespace toepmg
