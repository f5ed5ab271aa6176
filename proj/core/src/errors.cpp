#include "tvl/errors.hpp"

#include <sstream>

namespace tvl {

namespace {

std::string singular_message(double sigma_min, double threshold) {
  std::ostringstream os;
  os << "constraint Jacobian is singular: sigma_min = " << sigma_min << " < " << threshold;
  return os.str();
}

}  // namespace

SingularConstraintError::SingularConstraintError(double sigma_min, double threshold)
    : NumericalError(singular_message(sigma_min, threshold)), sigma_min_(sigma_min) {}

}  // namespace tvl
