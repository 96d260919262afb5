// Copyright 2026 The lpx Authors
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

// lpx-synth: writes a seeded synthetic snapshot history as JSON Lines.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "lpx/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic controller snapshot history", "lpx-synth"};
  lpx::SyntheticOptions o;
  std::int64_t count = 1000;
  std::string output;
  app.add_option("-n,--count", count, "Number of intervals")->check(CLI::PositiveNumber);
  app.add_option("--mvs", o.n)->check(CLI::Range(1, 1000));
  app.add_option("--cvs", o.m)->check(CLI::Range(1, 1000));
  app.add_option("--seed", o.seed);
  app.add_option("--interval", o.interval_seconds, "Seconds between snapshots");
  app.add_option("-o,--output", output, "Output path (default stdout)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    if (output.empty() || output == "-") {
      lpx::WriteSyntheticHistory(std::cout, o, count);
    } else {
      std::ofstream out(output, std::ios::binary);
      if (!out) {
        std::cerr << "lpx-synth: cannot write " << output << "\n";
        return 2;
      }
      lpx::WriteSyntheticHistory(out, o, count);
    }
  } catch (const std::exception& e) {
    std::cerr << "lpx-synth: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
