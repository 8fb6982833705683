#include "ivpi/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ivpi {

ValidationReport validate_counts(const TrialCounts& counts) {
  ValidationReport report;
  for (int z = 0; z < 2; ++z) {
    for (int x = 0; x < 2; ++x) {
      for (int y = 0; y < 2; ++y) {
        if (counts.at(z, x, y) < 0) {
          std::ostringstream msg;
          msg << "negative count at cell z=" << z << " x=" << x << " y=" << y;
          report.add(true, msg.str());
        }
      }
    }
    if (counts.arm_total(z) <= 0) {
      std::ostringstream msg;
      msg << "instrument arm z=" << z << " has zero total";
      report.add(true, msg.str());
    }
  }
  return report;
}

ObservedLaw law_from_counts(const TrialCounts& counts) {
  ValidationReport report = validate_counts(counts);
  if (!report.ok()) throw std::invalid_argument(report.findings.front().message);
  ObservedLaw law;
  for (int z = 0; z < 2; ++z) {
    const double total = static_cast<double>(counts.arm_total(z));
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        law.at(z, x, y) = static_cast<double>(counts.at(z, x, y)) / total;
  }
  return law;
}

ValidationReport validate_law(const ObservedLaw& law, double tol) {
  ValidationReport report;
  for (int z = 0; z < 2; ++z) {
    double sum = 0.0;
    for (int x = 0; x < 2; ++x) {
      for (int y = 0; y < 2; ++y) {
        const double v = law.at(z, x, y);
        if (!std::isfinite(v) || v < -tol || v > 1.0 + tol) {
          std::ostringstream msg;
          msg << "probability out of range at z=" << z << " x=" << x << " y=" << y << ": " << v;
          report.add(true, msg.str());
        }
        sum += v;
      }
    }
    if (std::abs(sum - 1.0) > tol) {
      std::ostringstream msg;
      msg << "arm z=" << z << " sums to " << sum << " (expected 1 within " << tol << ")";
      report.add(true, msg.str());
    }
  }
  return report;
}

}  // namespace ivpi
