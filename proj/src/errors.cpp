// SPDX-License-Identifier: Apache-2.0
#include "blochnls/errors.hpp"

namespace blochnls
{

int exit_code_for(const std::exception &e) noexcept
{
  if (dynamic_cast<const ValidationError *>(&e) != nullptr)
  {
    return 2;
  }
  if (dynamic_cast<const NumericalError *>(&e) != nullptr)
  {
    return 3;
  }
  // I/O and anything unclassified count as validation problems with the request.
  return 2;
}

}  // namespace blochnls
