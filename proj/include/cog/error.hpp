#pragma once

#include <stdexcept>
#include <string>

namespace cog {

/// Base of every error raised by the library. `name()` is the stable error
/// class identifier used in CLI messages and by the Python bindings.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* name() const noexcept = 0;
};

#define COG_DEFINE_ERROR(Type, Base)                                  \
  class Type : public Base {                                          \
   public:                                                            \
    using Base::Base;                                                 \
    const char* name() const noexcept override { return #Type; }      \
  }

COG_DEFINE_ERROR(InvalidArgument, Error);
COG_DEFINE_ERROR(DimensionMismatch, Error);
COG_DEFINE_ERROR(NonFinite, Error);
COG_DEFINE_ERROR(DegenerateWeights, Error);
COG_DEFINE_ERROR(RankDeficient, Error);
COG_DEFINE_ERROR(NotInSubspace, Error);
COG_DEFINE_ERROR(SpecConfigError, Error);

/// Errors raised while reading or writing COGL latent files.
class FormatError : public Error {
 public:
  using Error::Error;
};

COG_DEFINE_ERROR(IoError, FormatError);
COG_DEFINE_ERROR(BadMagic, FormatError);
COG_DEFINE_ERROR(BadVersion, FormatError);
COG_DEFINE_ERROR(BadDtype, FormatError);
COG_DEFINE_ERROR(BadFlags, FormatError);
COG_DEFINE_ERROR(BadReserved, FormatError);
COG_DEFINE_ERROR(Truncated, FormatError);
COG_DEFINE_ERROR(TrailingBytes, FormatError);
COG_DEFINE_ERROR(DimensionOverflow, FormatError);

#undef COG_DEFINE_ERROR

}  // namespace cog
