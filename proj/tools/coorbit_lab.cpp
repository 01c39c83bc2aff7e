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

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "coorbit/experiments.hpp"

namespace {

nlohmann::json load_config(const std::string& path) {
  if (path.empty()) return nlohmann::json::object();
  std::ifstream in(path);
  if (!in) throw coorbit::IoError("cannot open config '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw coorbit::IoError("config '" + path + "': " + e.what());
  }
}

void print_summary(const coorbit::Report& r) {
  for (const auto& m : r.metrics) {
    std::cout << (m.pass ? (*m.pass ? "PASS " : "FAIL ") : "     ") << m.name << " = " << m.value;
    if (m.bound) std::cout << "  (" << m.relation << ' ' << *m.bound << ')';
    std::cout << '\n';
  }
  std::cout << (r.all_pass() ? "all checks passed" : "some checks failed") << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coorbit experiment driver"};
  app.require_subcommand(1);

  std::string config_path, out_dir, format = "both";
  std::string group, name;
  const std::map<std::string, std::vector<std::string>> commands = {
      {"counterexample", {"realline", "affine"}},
      {"gabor", {"frame", "riesz"}},
      {"diagnostic", {"in-group"}},
      {"coorbit", {"norm", "embed"}},
  };
  for (const auto& [g, names] : commands) {
    CLI::App* sub = app.add_subcommand(g, g + " experiments");
    sub->require_subcommand(1);
    for (const auto& n : names) {
      CLI::App* leaf = sub->add_subcommand(n, g + " " + n);
      leaf->add_option("--config", config_path, "JSON config file");
      leaf->add_option("--out", out_dir, "output directory")->required();
      leaf->add_option("--format", format, "json, csv or both")->check(CLI::IsMember({"json", "csv", "both"}));
      leaf->callback([&group, &name, g, n] {
        group = g;
        name = n;
      });
    }
  }
  CLI11_PARSE(app, argc, argv);

  try {
    const auto fmt = format == "json" ? coorbit::ReportFormat::json
                     : format == "csv" ? coorbit::ReportFormat::csv
                                       : coorbit::ReportFormat::both;
    const coorbit::Report report = coorbit::emit_report(
        coorbit::run_command(group, name, load_config(config_path)), out_dir, fmt);
    print_summary(report);
    return report.all_pass() ? 0 : 1;
  } catch (const coorbit::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
