// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace blochnls
{

// Input that violates a documented precondition. The CLI maps these to exit code 2.
class ValidationError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// A computation that started from valid input but failed numerically (exit code 3).
class NumericalError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

#define BLOCHNLS_DEFINE_ERROR(Name, Base) \
  class Name : public Base                \
  {                                       \
  public:                                 \
    using Base::Base;                     \
  }

BLOCHNLS_DEFINE_ERROR(AliasError, ValidationError);
BLOCHNLS_DEFINE_ERROR(RealityError, ValidationError);
BLOCHNLS_DEFINE_ERROR(ShapeError, ValidationError);
BLOCHNLS_DEFINE_ERROR(EllipticityError, ValidationError);
BLOCHNLS_DEFINE_ERROR(TruncationError, ValidationError);
BLOCHNLS_DEFINE_ERROR(ConfigError, ValidationError);
BLOCHNLS_DEFINE_ERROR(DomainError, ValidationError);
BLOCHNLS_DEFINE_ERROR(NormalizationError, ValidationError);
BLOCHNLS_DEFINE_ERROR(ProfileRangeError, ValidationError);

BLOCHNLS_DEFINE_ERROR(DegenerateWarning, NumericalError);
BLOCHNLS_DEFINE_ERROR(SimplenessError, NumericalError);
BLOCHNLS_DEFINE_ERROR(StepError, NumericalError);
BLOCHNLS_DEFINE_ERROR(ResonanceError, NumericalError);
BLOCHNLS_DEFINE_ERROR(BracketError, NumericalError);
BLOCHNLS_DEFINE_ERROR(StiffnessError, NumericalError);
BLOCHNLS_DEFINE_ERROR(NanError, NumericalError);
BLOCHNLS_DEFINE_ERROR(IsotropyError, NumericalError);

#undef BLOCHNLS_DEFINE_ERROR

// Exit code convention shared by the CLI: 2 for validation, 3 for numerical failure.
int exit_code_for(const std::exception &e) noexcept;

}  // namespace blochnls
