// Copyright 2026 The modone Authors
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

#include <iostream>

#include "cli_args.hpp"

int main(int argc, char** argv) {
  const modone::cli::ParseOutcome p = modone::cli::parse_args(argc, argv);
  if (p.exit_code >= 0) {
    (p.exit_code == 0 ? std::cout : std::cerr) << p.message;
    return p.exit_code;
  }
  const modone::RunOutcome r = modone::run(p.config);
  if (r.exit_code != 0) {
    std::cerr << "modone: " << r.error << "\n";
    return r.exit_code;
  }
  if (p.config.out.empty()) std::cout << r.document;
  return 0;
}
