#pragma once

// Phase spaces, inverse branches and the skew-product (natural extension)
// dynamics used everywhere else in the library.
//
// Points of the Bernoulli space are truncated words. Interval points are
// doubles in [0,1]; the two representations interconvert through the
// dyadic embedding sum_i w_i 2^{-(i+1)}.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace ergo {

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Ordering { Less, Equal, Greater };

/// Truncated point of {0,1}^N.
class SymbolWord {
 public:
  static constexpr int kDefaultDepth = 24;

  SymbolWord() = default;
  explicit SymbolWord(std::vector<std::uint8_t> symbols);
  SymbolWord(std::initializer_list<int> symbols);

  /// Binary digits of x in [0,1), truncated to `depth` symbols.
  static SymbolWord from_real(double x, int depth = kDefaultDepth);
  /// Periodic word (w w w ...) truncated to `depth`.
  static SymbolWord periodic(std::span<const int> period, int depth = kDefaultDepth);

  int depth() const { return static_cast<int>(symbols_.size()); }
  int operator[](int i) const { return symbols_[static_cast<std::size_t>(i)]; }
  std::span<const std::uint8_t> symbols() const { return symbols_; }
  double to_real() const;

  bool operator==(const SymbolWord&) const = default;

 private:
  std::vector<std::uint8_t> symbols_;
};

Ordering lex_compare(const SymbolWord& a, const SymbolWord& b);

enum class SystemKind { FullShift2, DoublingMap, MinusDoublingMap, GaussMap };

/// Inverse branch x -> (a x + b) / (c x + d), stored as a 2x2 matrix so that
/// compositions are matrix products.
struct Branch {
  int index = 0;
  Eigen::Matrix2d mobius = Eigen::Matrix2d::Identity();

  double operator()(double x) const {
    return (mobius(0, 0) * x + mobius(0, 1)) / (mobius(1, 0) * x + mobius(1, 1));
  }
};

struct System {
  SystemKind kind = SystemKind::MinusDoublingMap;
  int branch_cap = 30;         // Gauss only
  double metric_lambda = 0.5;  // shift metric d(x,y) = lambda^n

  static System full_shift() { return {SystemKind::FullShift2}; }
  static System doubling() { return {SystemKind::DoublingMap}; }
  static System minus_doubling() { return {SystemKind::MinusDoublingMap}; }
  static System gauss(int branch_cap = 30) { return {SystemKind::GaussMap, branch_cap}; }

  std::string name() const;
  int branch_count() const;
  /// Branch indices are 0,1 for the binary systems and 1..branch_cap for Gauss.
  int first_branch() const { return kind == SystemKind::GaussMap ? 1 : 0; }
  Branch branch(int index) const;
  std::vector<Branch> branches() const;
  /// Uniform contraction bound of the inverse branches.
  double contraction() const;
};

System system_from_name(const std::string& name);

struct Preimage {
  int branch = 0;
  double point = 0.0;
};

double apply_map(const System& sys, double x);
/// Left shift of a word, padding on the right with 0. Binary systems only.
SymbolWord apply_map(const System& sys, const SymbolWord& x);

std::vector<Preimage> inverse_branches(const System& sys, double x);

/// Index of the inverse branch whose image contains y (the "leading symbol").
int leading_symbol(const System& sys, double y);
/// sigma*(y): the point y' with branch(leading_symbol(y))(y') == y.
double dual_shift(const System& sys, double y);

/// tau_y(x): the inverse branch of x selected by the leading symbol of y.
double tau_push(const System& sys, double y, double x);
SymbolWord tau_push(const SymbolWord& y, const SymbolWord& x);

/// <y, x>: x is the future coordinate, y the past.
struct ExtensionPoint {
  double x = 0.0;
  double y = 0.0;
};

struct WordExtensionPoint {
  SymbolWord x;
  SymbolWord y;
};

ExtensionPoint extension_backward(const System& sys, const ExtensionPoint& p);
ExtensionPoint extension_forward(const System& sys, const ExtensionPoint& p);
WordExtensionPoint extension_backward(const WordExtensionPoint& p);
WordExtensionPoint extension_forward(const WordExtensionPoint& p);

struct PeriodicOrbit {
  /// itinerary[i] is the leading symbol of points[i]; points[i+1] = T(points[i]).
  std::vector<int> itinerary;
  std::vector<double> points;
  /// Filled for FullShift2 only.
  std::vector<SymbolWord> words;
  double birkhoff_average = 0.0;

  int period() const { return static_cast<int>(points.size()); }
};

/// Fixed point in [0,1] of branch(word[0]) o ... o branch(word[p-1]).
double periodic_point(const System& sys, std::span<const int> word);

constexpr int kMaxPeriodCap = 20;

/// All periodic orbits of minimal period <= max_period, each listed once,
/// sorted by (period, smallest point). Throws if max_period is out of range
/// (or, for Gauss, if the word count exceeds 4'000'000).
std::vector<PeriodicOrbit> periodic_orbits(const System& sys, int max_period);

/// The points together with all their images under up to `depth` inverse
/// branches, without repeats (points within 1e-13 count as one), in
/// breadth-first order.
std::vector<double> backward_images(const System& sys, const std::vector<double>& points, int depth);

}  // namespace ergo
