#pragma once

// Typed domain errors. Every error carries a stable name that the CLI
// prints verbatim, so tests and scripts can match on it.

#include <stdexcept>
#include <string>

namespace qgt {

class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(what), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

#define QGT_DEFINE_ERROR(Type)                                  \
  class Type : public Error {                                   \
   public:                                                      \
    explicit Type(const std::string& what) : Error(#Type, what) {} \
  };

QGT_DEFINE_ERROR(ParseError)
QGT_DEFINE_ERROR(PreconditionViolation)
QGT_DEFINE_ERROR(PrimeMismatch)
QGT_DEFINE_ERROR(DivisionByZero)
QGT_DEFINE_ERROR(PrecisionLoss)
QGT_DEFINE_ERROR(UnboundedSet)
QGT_DEFINE_ERROR(ResolutionTooFine)
QGT_DEFINE_ERROR(NotInvariant)
QGT_DEFINE_ERROR(MixedSphere)
QGT_DEFINE_ERROR(SingularPair)
QGT_DEFINE_ERROR(NullSetElement)
QGT_DEFINE_ERROR(NotNormalized)
QGT_DEFINE_ERROR(TailBlowup)
QGT_DEFINE_ERROR(NullProjection)
QGT_DEFINE_ERROR(GrammarEscape)
QGT_DEFINE_ERROR(DeltaViolated)
QGT_DEFINE_ERROR(IndeterminateInput)
QGT_DEFINE_ERROR(BudgetExhausted)

#undef QGT_DEFINE_ERROR

}  // namespace qgt
