#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace ergo {

enum class PotentialForm { Polynomial, LogGauss, Custom };

/// Evaluable potential A on [0,1] with the regularity data used by series
/// truncation bounds. `holder_constant` is a Lipschitz constant on [0,1]
/// (Holder exponent 1 for every form shipped here).
struct Potential {
  PotentialForm form = PotentialForm::Polynomial;
  Eigen::VectorXd coeffs;  // Polynomial: sum_k coeffs[k] x^k
  double log_scale = 2.0;  // LogGauss: log_scale * log x
  std::function<double(double)> custom;
  double holder_constant = 0.0;
  double contraction = 0.5;
  std::string label;

  static Potential polynomial(std::vector<double> coeffs);
  static Potential constant(double c) { return polynomial({c}); }
  static Potential zero() { return polynomial({0.0}); }
  /// scale * log x; the Gauss potential -log|T'| is scale = 2.
  static Potential log_gauss(double scale = 2.0);
  static Potential from_function(std::function<double(double)> f, double holder_constant, std::string label);

  double operator()(double x) const;

  template <typename Derived>
  Eigen::ArrayXd operator()(const Eigen::ArrayBase<Derived>& x) const {
    if (form == PotentialForm::Polynomial) {
      // Horner, coefficient-wise
      Eigen::ArrayXd r = Eigen::ArrayXd::Constant(x.size(), coeffs.size() ? coeffs(coeffs.size() - 1) : 0.0);
      for (Eigen::Index k = coeffs.size() - 2; k >= 0; --k) r = r * x.derived() + coeffs(k);
      return r;
    }
    if (form == PotentialForm::LogGauss) return log_scale * x.derived().log();
    return x.derived().unaryExpr([this](double t) { return custom(t); });
  }

  /// A + k.
  Potential shifted(double k) const;
};

/// p + eps * r, as used by the twist stability probe.
Potential sum(const Potential& p, double eps, const Potential& r);

}  // namespace ergo
