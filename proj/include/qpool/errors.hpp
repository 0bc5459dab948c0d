// Copyright 2026 The qpool Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qpool {

/// Base of every error thrown by the library. `name()` is the stable
/// identifier written into CLI reports.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* name() const noexcept { return "Error"; }
};

#define QPOOL_DEFINE_ERROR(Name)                                    \
  class Name : public Error {                                       \
   public:                                                          \
    using Error::Error;                                             \
    const char* name() const noexcept override { return #Name; }    \
  }

QPOOL_DEFINE_ERROR(ShapeError);
QPOOL_DEFINE_ERROR(IndexError);
QPOOL_DEFINE_ERROR(HermiticityError);
QPOOL_DEFINE_ERROR(PositivityError);
QPOOL_DEFINE_ERROR(NormalizationError);
QPOOL_DEFINE_ERROR(ImpossibleOutcomeError);
QPOOL_DEFINE_ERROR(IncompatibleKnowledgeError);
QPOOL_DEFINE_ERROR(NoncommutingError);
QPOOL_DEFINE_ERROR(DegenerateConstructionError);
QPOOL_DEFINE_ERROR(LemmaPreconditionError);
QPOOL_DEFINE_ERROR(InconsistentStatesError);
QPOOL_DEFINE_ERROR(DimensionGuardError);
QPOOL_DEFINE_ERROR(SingularConstraintError);
QPOOL_DEFINE_ERROR(InvalidEffectError);

#undef QPOOL_DEFINE_ERROR

}  // namespace qpool
