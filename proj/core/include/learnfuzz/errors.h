// Copyright 2026 The learnfuzz Authors
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

#ifndef LEARNFUZZ_ERRORS_H_
#define LEARNFUZZ_ERRORS_H_

#include <stdexcept>
#include <string>

namespace learnfuzz {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define LEARNFUZZ_DEFINE_ERROR(Name)   \
  class Name : public Error {          \
   public:                             \
    using Error::Error;                \
  }

// A tuple whose value kinds do not match the operator's parameter space.
LEARNFUZZ_DEFINE_ERROR(SpecError);
LEARNFUZZ_DEFINE_ERROR(RegistryError);
LEARNFUZZ_DEFINE_ERROR(EncodingError);
LEARNFUZZ_DEFINE_ERROR(TrainError);
LEARNFUZZ_DEFINE_ERROR(PredictError);
LEARNFUZZ_DEFINE_ERROR(CVError);
LEARNFUZZ_DEFINE_ERROR(LeaderboardError);
LEARNFUZZ_DEFINE_ERROR(ModelIOError);
LEARNFUZZ_DEFINE_ERROR(DatasetIOError);
LEARNFUZZ_DEFINE_ERROR(UnsatisfiableError);
LEARNFUZZ_DEFINE_ERROR(DegenerateSplitError);
LEARNFUZZ_DEFINE_ERROR(DegenerateSampleError);
LEARNFUZZ_DEFINE_ERROR(InsufficientTriggersError);
LEARNFUZZ_DEFINE_ERROR(PipelineError);
LEARNFUZZ_DEFINE_ERROR(BridgeError);

#undef LEARNFUZZ_DEFINE_ERROR

}  // namespace learnfuzz

#endif  // LEARNFUZZ_ERRORS_H_
