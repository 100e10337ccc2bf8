// Copyright 2026 The Detfair Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DETFAIR_CLI_H_
#define DETFAIR_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace detfair {

// Runs the `detfair` command line. `args` excludes the program name.
// Reports go to --out or `out`; failures are written to `err` as
//   {"error": {"code": "validation"|"io"|"numerical"|"internal", "message"}}
// and the return value is the exit status (0, 2 validation, 3 IO,
// 4 numerical/internal).
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace detfair

#endif  // DETFAIR_CLI_H_
