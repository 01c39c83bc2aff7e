// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace coorbit {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define COORBIT_DEFINE_ERROR(Name) \
  class Name : public Error {      \
   public:                         \
    using Error::Error;            \
  }

COORBIT_DEFINE_ERROR(InvalidParameter);
COORBIT_DEFINE_ERROR(InvalidWeight);
COORBIT_DEFINE_ERROR(InvalidPoint);
COORBIT_DEFINE_ERROR(IncompatibleOperands);
COORBIT_DEFINE_ERROR(NotDense);
COORBIT_DEFINE_ERROR(InvalidWindow);
COORBIT_DEFINE_ERROR(ReducibilityWarning);
COORBIT_DEFINE_ERROR(NotContractive);
COORBIT_DEFINE_ERROR(NotAFrame);
COORBIT_DEFINE_ERROR(NotRiesz);
COORBIT_DEFINE_ERROR(NoCertificate);
COORBIT_DEFINE_ERROR(CoverageWarning);
COORBIT_DEFINE_ERROR(TruncationError);
COORBIT_DEFINE_ERROR(ResolutionError);
COORBIT_DEFINE_ERROR(IoError);

#undef COORBIT_DEFINE_ERROR

}  // namespace coorbit
