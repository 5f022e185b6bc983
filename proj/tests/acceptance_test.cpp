// Copyright 2026 The Carrier Authors
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

#include <cstdlib>
#include <iostream>

#include "carrier/selftest.hpp"

int main(int argc, char** argv) {
  carrier::selftest::Config cfg;
  cfg.corpus_dir = CARRIER_CORPUS_DIR;
  if (argc > 1) cfg.seed = std::strtoull(argv[1], nullptr, 10);
  int failed = 0;
  for (const auto& o : carrier::selftest::run_all(cfg)) {
    std::cout << carrier::selftest::format_outcome(o) << std::endl;
    failed += !o.pass;
  }
  std::cout << (failed ? std::to_string(failed) + " of 9 criteria failed" : "all 9 criteria passed")
            << std::endl;
  return failed ? 1 : 0;
}
