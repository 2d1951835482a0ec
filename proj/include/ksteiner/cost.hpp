#pragma once

// Symmetric l1-optimisable cost functions over edge-length vectors:
// sum, power-p, and bottleneck.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace ksteiner {

struct CostFunction {
  enum class Kind { sum, power, bottleneck };
  Kind kind = Kind::sum;
  double p = 1.0;  // used by power

  static CostFunction sum() { return {Kind::sum, 1.0}; }
  static CostFunction power(double p) {
    if (!(p > 0)) throw std::invalid_argument("power cost: p must be positive");
    return {Kind::power, p};
  }
  static CostFunction bottleneck() { return {Kind::bottleneck, 0.0}; }

  std::string name() const {
    switch (kind) {
      case Kind::sum: return "sum";
      case Kind::power: return "power";
      case Kind::bottleneck: return "bottleneck";
    }
    return "?";
  }
};

inline double evaluate_cost(const CostFunction& cf,
                            const std::vector<double>& lengths) {
  for (double l : lengths)
    if (l < 0 || !std::isfinite(l))
      throw std::invalid_argument("evaluate_cost: negative or non-finite length");
  switch (cf.kind) {
    case CostFunction::Kind::sum: {
      std::vector<double> ls = lengths;
      std::sort(ls.begin(), ls.end());
      double s = 0;
      for (double l : ls) s += l;
      return s;
    }
    case CostFunction::Kind::power: {
      std::vector<double> ls;
      ls.reserve(lengths.size());
      for (double l : lengths) ls.push_back(std::pow(l, cf.p));
      std::sort(ls.begin(), ls.end());
      double s = 0;
      for (double l : ls) s += l;
      return s;
    }
    case CostFunction::Kind::bottleneck: {
      double m = 0;
      for (double l : lengths) m = std::max(m, l);
      return m;
    }
  }
  return 0;
}

}  // namespace ksteiner
