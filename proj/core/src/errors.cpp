#include "mccm/errors.hpp"

#include <sstream>

namespace mccm {

std::string ConditionalBuildError::compose(const std::vector<std::string>& missing,
                                           const std::vector<std::string>& zero_denominator) {
  std::ostringstream os;
  os << "conditional table build failed:";
  if (!missing.empty()) {
    os << " missing assortments for";
    for (const auto& m : missing) os << ' ' << m << ';';
  }
  if (!zero_denominator.empty()) {
    os << " zero denominators for";
    for (const auto& z : zero_denominator) os << ' ' << z << ';';
  }
  return os.str();
}

ConditionalBuildError::ConditionalBuildError(std::vector<std::string> missing,
                                             std::vector<std::string> zero_denominator)
    : Error(compose(missing, zero_denominator)),
      missing_(std::move(missing)),
      zero_denominator_(std::move(zero_denominator)) {}

}  // namespace mccm
