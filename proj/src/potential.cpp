#include "ergo/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ergo {

Potential Potential::polynomial(std::vector<double> c) {
  if (c.empty()) c.push_back(0.0);
  Potential p;
  p.form = PotentialForm::Polynomial;
  p.coeffs = Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
  // sup |A'| on [0,1] <= sum k |c_k|
  for (std::size_t k = 1; k < c.size(); ++k) p.holder_constant += static_cast<double>(k) * std::abs(c[k]);
  std::ostringstream os;
  os.precision(17);
  os << "poly:";
  for (std::size_t k = 0; k < c.size(); ++k) os << (k ? "," : "") << c[k];
  p.label = os.str();
  return p;
}

Potential Potential::log_gauss(double scale) {
  Potential p;
  p.form = PotentialForm::LogGauss;
  p.log_scale = scale;
  // Only evaluated on images of Gauss branches, where x >= 1/(cap+1); the
  // relevant Lipschitz bound along backward orbits is |scale| / inf x.
  p.holder_constant = std::abs(scale);
  std::ostringstream os;
  os.precision(17);
  os << "log:" << scale;
  p.label = os.str();
  return p;
}

Potential Potential::from_function(std::function<double(double)> f, double holder, std::string label) {
  Potential p;
  p.form = PotentialForm::Custom;
  p.custom = std::move(f);
  p.holder_constant = holder;
  p.label = std::move(label);
  return p;
}

double Potential::operator()(double x) const {
  switch (form) {
    case PotentialForm::Polynomial: {
      double r = 0.0;
      for (Eigen::Index k = coeffs.size() - 1; k >= 0; --k) r = r * x + coeffs(k);
      return r;
    }
    case PotentialForm::LogGauss:
      return log_scale * std::log(x);
    case PotentialForm::Custom:
      if (!custom) throw std::logic_error("Potential: empty custom evaluator");
      return custom(x);
  }
  return 0.0;
}

Potential Potential::shifted(double k) const {
  if (form == PotentialForm::Polynomial) {
    Potential p = *this;
    p.coeffs(0) += k;
    std::vector<double> c(p.coeffs.data(), p.coeffs.data() + p.coeffs.size());
    return polynomial(c);
  }
  Potential base = *this;
  Potential p = from_function([base, k](double x) { return base(x) + k; }, holder_constant, label + "+const");
  p.contraction = contraction;
  return p;
}

Potential sum(const Potential& p, double eps, const Potential& r) {
  if (p.form == PotentialForm::Polynomial && r.form == PotentialForm::Polynomial) {
    const Eigen::Index n = std::max(p.coeffs.size(), r.coeffs.size());
    std::vector<double> c(static_cast<std::size_t>(n), 0.0);
    for (Eigen::Index k = 0; k < p.coeffs.size(); ++k) c[static_cast<std::size_t>(k)] += p.coeffs(k);
    for (Eigen::Index k = 0; k < r.coeffs.size(); ++k) c[static_cast<std::size_t>(k)] += eps * r.coeffs(k);
    return Potential::polynomial(c);
  }
  std::ostringstream os;
  os.precision(17);
  os << p.label << "+" << eps << "*(" << r.label << ")";
  Potential out = Potential::from_function([p, eps, r](double x) { return p(x) + eps * r(x); },
                                           p.holder_constant + std::abs(eps) * r.holder_constant, os.str());
  out.contraction = std::max(p.contraction, r.contraction);
  return out;
}

}  // namespace ergo
