#include "ergo/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>

namespace ergo {

SymbolWord::SymbolWord(std::vector<std::uint8_t> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw std::invalid_argument("SymbolWord: depth must be >= 1");
  for (auto s : symbols_)
    if (s > 1) throw std::invalid_argument("SymbolWord: symbols must be 0 or 1");
}

SymbolWord::SymbolWord(std::initializer_list<int> symbols)
    : SymbolWord(std::vector<std::uint8_t>(symbols.begin(), symbols.end())) {}

SymbolWord SymbolWord::from_real(double x, int depth) {
  if (depth < 1) throw std::invalid_argument("SymbolWord: depth must be >= 1");
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("SymbolWord: x outside [0,1]");
  std::vector<std::uint8_t> s(static_cast<std::size_t>(depth));
  double r = x;
  for (auto& d : s) {
    r *= 2.0;
    d = r >= 1.0 ? 1 : 0;
    r -= d;
  }
  return SymbolWord(std::move(s));
}

SymbolWord SymbolWord::periodic(std::span<const int> period, int depth) {
  if (period.empty()) throw std::invalid_argument("SymbolWord: empty period");
  std::vector<std::uint8_t> s(static_cast<std::size_t>(depth));
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<std::uint8_t>(period[i % period.size()]);
  return SymbolWord(std::move(s));
}

double SymbolWord::to_real() const {
  double v = 0.0;
  for (int i = depth() - 1; i >= 0; --i) v = 0.5 * (v + symbols_[static_cast<std::size_t>(i)]);
  return v;
}

Ordering lex_compare(const SymbolWord& a, const SymbolWord& b) {
  if (a.depth() != b.depth())
    throw DimensionMismatch("lex_compare: words of depth " + std::to_string(a.depth()) + " and " +
                            std::to_string(b.depth()));
  for (int i = 0; i < a.depth(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i] ? Ordering::Less : Ordering::Greater;
  }
  return Ordering::Equal;
}

std::string System::name() const {
  switch (kind) {
    case SystemKind::FullShift2: return "full-shift";
    case SystemKind::DoublingMap: return "doubling";
    case SystemKind::MinusDoublingMap: return "minus-doubling";
    case SystemKind::GaussMap: return "gauss";
  }
  return "unknown";
}

System system_from_name(const std::string& name) {
  if (name == "full-shift") return System::full_shift();
  if (name == "doubling") return System::doubling();
  if (name == "minus-doubling") return System::minus_doubling();
  if (name == "gauss") return System::gauss();
  throw std::invalid_argument("unknown system '" + name + "'");
}

int System::branch_count() const { return kind == SystemKind::GaussMap ? branch_cap : 2; }

Branch System::branch(int index) const {
  Branch b;
  b.index = index;
  switch (kind) {
    case SystemKind::FullShift2:
    case SystemKind::DoublingMap:
      if (index < 0 || index > 1) throw std::out_of_range("branch index");
      b.mobius << 0.5, 0.5 * index, 0.0, 1.0;
      break;
    case SystemKind::MinusDoublingMap:
      if (index < 0 || index > 1) throw std::out_of_range("branch index");
      b.mobius << -0.5, 0.5 * (index + 1), 0.0, 1.0;
      break;
    case SystemKind::GaussMap:
      if (index < 1 || index > branch_cap) throw std::out_of_range("branch index");
      b.mobius << 0.0, 1.0, 1.0, static_cast<double>(index);
      break;
  }
  return b;
}

std::vector<Branch> System::branches() const {
  std::vector<Branch> out;
  out.reserve(static_cast<std::size_t>(branch_count()));
  for (int k = 0; k < branch_count(); ++k) out.push_back(branch(first_branch() + k));
  return out;
}

double System::contraction() const {
  // |tau_k'(x)| = 1/(k+x)^2 reaches 1 at x = 0 for k = 1; two-step compositions
  // contract by at most 1/4 on [0,1], so sqrt(1/4) is the effective rate.
  return 0.5;
}

double apply_map(const System& sys, double x) {
  switch (sys.kind) {
    case SystemKind::FullShift2:
    case SystemKind::DoublingMap: {
      const double r = 2.0 * x;
      return r - std::floor(r);
    }
    case SystemKind::MinusDoublingMap: {
      const double r = -2.0 * x;
      return r - std::floor(r);
    }
    case SystemKind::GaussMap: {
      if (x <= 0.0) return 0.0;
      const double r = 1.0 / x;
      return r - std::floor(r);
    }
  }
  return x;
}

SymbolWord apply_map(const System& sys, const SymbolWord& x) {
  if (sys.kind != SystemKind::FullShift2 && sys.kind != SystemKind::DoublingMap)
    throw std::invalid_argument("apply_map: words are only defined for binary shifts");
  std::vector<std::uint8_t> s(x.symbols().begin() + 1, x.symbols().end());
  s.push_back(0);
  return SymbolWord(std::move(s));
}

std::vector<Preimage> inverse_branches(const System& sys, double x) {
  std::vector<Preimage> out;
  out.reserve(static_cast<std::size_t>(sys.branch_count()));
  for (const auto& b : sys.branches()) out.push_back({b.index, b(x)});
  return out;
}

int leading_symbol(const System& sys, double y) {
  switch (sys.kind) {
    case SystemKind::FullShift2:
    case SystemKind::DoublingMap:
      return y < 0.5 ? 0 : 1;
    case SystemKind::MinusDoublingMap:
      return y <= 0.5 ? 0 : 1;
    case SystemKind::GaussMap: {
      if (y <= 0.0) return sys.branch_cap;
      const double k = std::floor(1.0 / y);
      return static_cast<int>(std::clamp(k, 1.0, static_cast<double>(sys.branch_cap)));
    }
  }
  return 0;
}

double dual_shift(const System& sys, double y) {
  const int s = leading_symbol(sys, y);
  switch (sys.kind) {
    case SystemKind::FullShift2:
    case SystemKind::DoublingMap:
      return 2.0 * y - s;
    case SystemKind::MinusDoublingMap:
      return 2.0 * (0.5 * (s + 1) - y);
    case SystemKind::GaussMap:
      return y <= 0.0 ? 0.0 : 1.0 / y - s;
  }
  return y;
}

double tau_push(const System& sys, double y, double x) { return sys.branch(leading_symbol(sys, y))(x); }

SymbolWord tau_push(const SymbolWord& y, const SymbolWord& x) {
  std::vector<std::uint8_t> s;
  s.reserve(static_cast<std::size_t>(x.depth()));
  s.push_back(static_cast<std::uint8_t>(y[0]));
  s.insert(s.end(), x.symbols().begin(), x.symbols().end() - 1);
  return SymbolWord(std::move(s));
}

ExtensionPoint extension_backward(const System& sys, const ExtensionPoint& p) {
  return {tau_push(sys, p.y, p.x), dual_shift(sys, p.y)};
}

ExtensionPoint extension_forward(const System& sys, const ExtensionPoint& p) {
  return {dual_shift(sys, p.x), tau_push(sys, p.x, p.y)};
}

WordExtensionPoint extension_backward(const WordExtensionPoint& p) {
  return {tau_push(p.y, p.x), apply_map(System::full_shift(), p.y)};
}

WordExtensionPoint extension_forward(const WordExtensionPoint& p) {
  return {apply_map(System::full_shift(), p.x), tau_push(p.x, p.y)};
}

double periodic_point(const System& sys, std::span<const int> word) {
  if (word.empty()) throw std::invalid_argument("periodic_point: empty word");
  Eigen::Matrix2d m = Eigen::Matrix2d::Identity();
  for (int s : word) m = m * sys.branch(s).mobius;
  const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  if (c == 0.0) return b / (d - a);
  // c x^2 + (d - a) x - b = 0; the attracting root lies in [0,1].
  const double B = d - a;
  const double disc = std::sqrt(B * B + 4.0 * c * b);
  const double q = -0.5 * (B + std::copysign(disc, B));
  const double r1 = q / c;
  const double r2 = q != 0.0 ? -b / q : r1;
  auto inside = [](double r) { return r >= -1e-15 && r <= 1.0 + 1e-15; };
  if (inside(r1) && !inside(r2)) return std::clamp(r1, 0.0, 1.0);
  if (inside(r2) && !inside(r1)) return std::clamp(r2, 0.0, 1.0);
  // Both inside: pick the attracting one, |derivative| = det / (c x + d)^2 < 1.
  const double det = std::abs(a * d - b * c);
  auto deriv = [&](double r) { return det / ((c * r + d) * (c * r + d)); };
  return std::clamp(deriv(r1) <= deriv(r2) ? r1 : r2, 0.0, 1.0);
}

namespace {

bool is_primitive(std::span<const int> w) {
  const std::size_t p = w.size();
  for (std::size_t q = 1; q < p; ++q) {
    if (p % q != 0) continue;
    bool repeats = true;
    for (std::size_t i = q; i < p && repeats; ++i) repeats = w[i] == w[i - q];
    if (repeats) return false;
  }
  return true;
}

bool is_minimal_rotation(std::span<const int> w) {
  const std::size_t p = w.size();
  for (std::size_t r = 1; r < p; ++r) {
    for (std::size_t i = 0; i < p; ++i) {
      const int a = w[(i + r) % p], b = w[i];
      if (a != b) {
        if (a < b) return false;
        break;
      }
    }
  }
  return true;
}

// Calls f(word) for every primitive minimal-rotation word of length p over
// the alphabet [lo, hi].
template <typename F>
void for_each_necklace(int p, int lo, int hi, F&& f) {
  std::vector<int> w(static_cast<std::size_t>(p), lo);
  while (true) {
    if (is_primitive(w) && is_minimal_rotation(w)) f(std::span<const int>(w));
    int i = p - 1;
    while (i >= 0 && w[static_cast<std::size_t>(i)] == hi) w[static_cast<std::size_t>(i--)] = lo;
    if (i < 0) break;
    ++w[static_cast<std::size_t>(i)];
  }
}

std::vector<PeriodicOrbit> shift_orbits(int max_period) {
  std::vector<PeriodicOrbit> out;
  for (int p = 1; p <= max_period; ++p) {
    for_each_necklace(p, 0, 1, [&](std::span<const int> w) {
      PeriodicOrbit orb;
      for (int i = 0; i < p; ++i) {
        std::vector<int> rot(static_cast<std::size_t>(p));
        for (int j = 0; j < p; ++j) rot[static_cast<std::size_t>(j)] = w[static_cast<std::size_t>((i + j) % p)];
        orb.itinerary.push_back(rot[0]);
        orb.words.push_back(SymbolWord::periodic(rot));
        orb.points.push_back(periodic_point(System::full_shift(), rot));
      }
      out.push_back(std::move(orb));
    });
  }
  return out;
}

// Periodic points of x -> s x mod 1 (s = +-2) are exactly k / |s^p - 1|;
// orbits are traced in integer arithmetic.
std::vector<PeriodicOrbit> affine_orbits(const System& sys, int max_period) {
  const std::int64_t slope = sys.kind == SystemKind::MinusDoublingMap ? -2 : 2;
  std::vector<PeriodicOrbit> out;
  std::int64_t sp = 1;
  for (int p = 1; p <= max_period; ++p) {
    sp *= slope;
    const std::int64_t den = std::llabs(sp - 1);
    auto step = [&](std::int64_t k) { return ((slope * k) % den + den) % den; };
    for (std::int64_t k = 0; k < den; ++k) {
      std::vector<std::int64_t> ks{k};
      std::int64_t cur = step(k);
      while (cur != k && static_cast<int>(ks.size()) <= p) {
        ks.push_back(cur);
        cur = step(cur);
      }
      if (cur != k || static_cast<int>(ks.size()) != p) continue;
      if (*std::min_element(ks.begin(), ks.end()) != k) continue;
      PeriodicOrbit orb;
      for (auto q : ks) {
        const double x = static_cast<double>(q) / static_cast<double>(den);
        orb.points.push_back(x);
        orb.itinerary.push_back(leading_symbol(sys, x));
      }
      out.push_back(std::move(orb));
    }
  }
  return out;
}

std::vector<PeriodicOrbit> gauss_orbits(const System& sys, int max_period) {
  double words = 0.0;
  for (int p = 1; p <= max_period; ++p) words += std::pow(sys.branch_cap, p);
  if (words > 4.0e6)
    throw std::invalid_argument("periodic_orbits: " + std::to_string(static_cast<long long>(words)) +
                                " Gauss words exceed the enumeration cap");
  std::vector<PeriodicOrbit> out;
  for (int p = 1; p <= max_period; ++p) {
    for_each_necklace(p, 1, sys.branch_cap, [&](std::span<const int> w) {
      PeriodicOrbit orb;
      orb.points.resize(static_cast<std::size_t>(p));
      orb.itinerary.assign(w.begin(), w.end());
      orb.points[0] = periodic_point(sys, w);
      for (int i = p - 1; i >= 1; --i) {
        const double next = orb.points[static_cast<std::size_t>((i + 1) % p)];
        orb.points[static_cast<std::size_t>(i)] = sys.branch(w[static_cast<std::size_t>(i)])(next);
      }
      out.push_back(std::move(orb));
    });
  }
  return out;
}

}  // namespace

std::vector<PeriodicOrbit> periodic_orbits(const System& sys, int max_period) {
  if (max_period < 1 || max_period > kMaxPeriodCap)
    throw std::invalid_argument("periodic_orbits: max_period must lie in [1, " + std::to_string(kMaxPeriodCap) + "]");
  std::vector<PeriodicOrbit> out;
  switch (sys.kind) {
    case SystemKind::FullShift2: out = shift_orbits(max_period); break;
    case SystemKind::DoublingMap:
    case SystemKind::MinusDoublingMap: out = affine_orbits(sys, max_period); break;
    case SystemKind::GaussMap: out = gauss_orbits(sys, max_period); break;
  }
  std::stable_sort(out.begin(), out.end(), [](const PeriodicOrbit& a, const PeriodicOrbit& b) {
    if (a.period() != b.period()) return a.period() < b.period();
    return *std::min_element(a.points.begin(), a.points.end()) < *std::min_element(b.points.begin(), b.points.end());
  });
  return out;
}

std::vector<double> backward_images(const System& sys, const std::vector<double>& points, int depth) {
  if (depth < 0) throw std::invalid_argument("backward_images: depth must be >= 0");
  std::vector<double> out;
  auto add = [&out](double z) {
    // branch images of exact rationals land within an ulp or two of each other
    for (double p : out)
      if (std::abs(p - z) <= 1e-13) return;
    out.push_back(z);
  };
  for (double x : points) add(x);
  const auto branches = sys.branches();
  std::size_t from = 0;
  for (int d = 0; d < depth; ++d) {
    const std::size_t to = out.size();
    for (std::size_t k = from; k < to; ++k)
      for (const auto& br : branches) add(br(out[k]));
    from = to;
  }
  return out;
}

}  // namespace ergo
