#include "ginlab/errors.hpp"

#include <cmath>

namespace ginlab {

void ensure_finite(double x, const char* context) {
  if (!std::isfinite(x))
    throw Error(std::string("non-finite value in ") + context);
}

}  // namespace ginlab
