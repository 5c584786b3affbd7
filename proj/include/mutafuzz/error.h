// Copyright 2026 The Mutafuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MUTAFUZZ_ERROR_H_
#define MUTAFUZZ_ERROR_H_

#include <stdexcept>

namespace mutafuzz {

// Base class for all errors raised by the library. Every error condition has
// its own type so that callers (and tests) can distinguish failure modes
// without parsing messages.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A mutation was requested at a position where its operand does not fit.
struct PositionOutOfRange : Error {
  using Error::Error;
};

// An operation that needs at least one input byte got an empty buffer.
struct EmptyInput : Error {
  using Error::Error;
};

// Mutation parameters are outside their documented domain.
struct InvalidParams : Error {
  using Error::Error;
};

// Two coverage maps of different sizes were combined.
struct SizeMismatch : Error {
  using Error::Error;
};

// A seed was requested from a corpus with an empty queue.
struct EmptyQueue : Error {
  using Error::Error;
};

// The remote model endpoint could not be reached or returned a non-OK status.
struct RemoteUnavailable : Error {
  using Error::Error;
};

// The remote model replied with a body that does not match the protocol.
struct MalformedResponse : Error {
  using Error::Error;
};

// Training was requested on an empty record set.
struct NoRecords : Error {
  using Error::Error;
};

// A dataset split needs at least one sample on each side.
struct TooFewSamples : Error {
  using Error::Error;
};

// Edge-accounting was requested for a target without a known edge universe.
struct NotInstrumented : Error {
  using Error::Error;
};

// The campaign or CLI configuration is unusable.
struct InvalidConfig : Error {
  using Error::Error;
};

// An external target process could not be started at all.
struct TargetSpawnFailure : Error {
  using Error::Error;
};

}  // namespace mutafuzz

#endif  // MUTAFUZZ_ERROR_H_
