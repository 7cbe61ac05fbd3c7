#include "tubespec/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace tubespec {

namespace {

GaussRule make_rule(int n) {
  // Nodes/weights on [-1,1], mapped to [0,1].
  GaussRule r{};
  r.npts = n;
  switch (n) {
    case 1:
      r.x = {0.5};
      r.w = {1.0};
      break;
    case 2: {
      const double c = 1.0 / std::sqrt(3.0);
      r.x = {0.5 * (1.0 - c), 0.5 * (1.0 + c)};
      r.w = {0.5, 0.5};
      break;
    }
    case 3: {
      const double c = std::sqrt(3.0 / 5.0);
      r.x = {0.5 * (1.0 - c), 0.5, 0.5 * (1.0 + c)};
      r.w = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
      break;
    }
    case 4: {
      const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
      const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
      const double wa = (18.0 + std::sqrt(30.0)) / 72.0;
      const double wb = (18.0 - std::sqrt(30.0)) / 72.0;
      r.x = {0.5 * (1.0 - b), 0.5 * (1.0 - a), 0.5 * (1.0 + a), 0.5 * (1.0 + b)};
      r.w = {wb, wa, wa, wb};
      break;
    }
    case 5: {
      const double a = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
      const double b = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
      const double wa = (322.0 + 13.0 * std::sqrt(70.0)) / 1800.0;
      const double wb = (322.0 - 13.0 * std::sqrt(70.0)) / 1800.0;
      r.x = {0.5 * (1.0 - b), 0.5 * (1.0 - a), 0.5, 0.5 * (1.0 + a), 0.5 * (1.0 + b)};
      r.w = {wb, wa, 128.0 / 450.0, wa, wb};
      break;
    }
    default:
      throw std::invalid_argument("gauss_rule: unsupported point count");
  }
  return r;
}

}  // namespace

const GaussRule& gauss_rule(int npts) {
  static const GaussRule rules[5] = {make_rule(1), make_rule(2), make_rule(3),
                                     make_rule(4), make_rule(5)};
  if (npts < 1 || npts > 5) throw std::invalid_argument("gauss_rule: unsupported point count");
  return rules[npts - 1];
}

}  // namespace tubespec
