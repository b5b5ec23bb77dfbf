#ifndef CHOILAB_ERRORS_HPP
#define CHOILAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace choilab {

// Base class for every failure this library reports deliberately.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

#define CHOILAB_DEFINE_ERROR(Name)                                            \
  class Name : public Error {                                                 \
  public:                                                                     \
    using Error::Error;                                                       \
  }

CHOILAB_DEFINE_ERROR(ShapeMismatch);
CHOILAB_DEFINE_ERROR(NotHermitian);
CHOILAB_DEFINE_ERROR(NumericalFailure);
CHOILAB_DEFINE_ERROR(BadK);
CHOILAB_DEFINE_ERROR(NegativeLambda);
CHOILAB_DEFINE_ERROR(DimensionOverflow);
CHOILAB_DEFINE_ERROR(NonLinearInput);
CHOILAB_DEFINE_ERROR(NotProjection);
CHOILAB_DEFINE_ERROR(ConeContainsCP);
CHOILAB_DEFINE_ERROR(Degenerate);
CHOILAB_DEFINE_ERROR(UnsupportedCone);
CHOILAB_DEFINE_ERROR(NotNormalized);

#undef CHOILAB_DEFINE_ERROR

} // namespace choilab

#endif
