#pragma once

#include <stdexcept>
#include <string>

namespace ompkit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define OMPKIT_DEFINE_ERROR(Name)          \
  class Name : public Error {              \
   public:                                 \
    explicit Name(const std::string& what) \
        : Error(#Name ": " + what) {}      \
  }

OMPKIT_DEFINE_ERROR(BlochOutOfBall);
OMPKIT_DEFINE_ERROR(BadPriors);
OMPKIT_DEFINE_ERROR(TooFewStates);
OMPKIT_DEFINE_ERROR(IndexOutOfRange);
OMPKIT_DEFINE_ERROR(WrongArity);
OMPKIT_DEFINE_ERROR(WrongLength);
OMPKIT_DEFINE_ERROR(BadParameter);
OMPKIT_DEFINE_ERROR(ConvergenceFailure);
OMPKIT_DEFINE_ERROR(InfeasibleCompleteness);
OMPKIT_DEFINE_ERROR(PairSetTooSmall);
OMPKIT_DEFINE_ERROR(ChannelNotCPTP);
OMPKIT_DEFINE_ERROR(NotEquiprobable);
OMPKIT_DEFINE_ERROR(DominatedState);
OMPKIT_DEFINE_ERROR(NotUnitary);
OMPKIT_DEFINE_ERROR(NotOmpInputs);
OMPKIT_DEFINE_ERROR(MissingComplementaryState);
OMPKIT_DEFINE_ERROR(DeltaUnreachable);

#undef OMPKIT_DEFINE_ERROR

}  // namespace ompkit
