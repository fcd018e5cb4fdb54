// Copyright 2026 The graphcode authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GRAPHCODE_REPORT_HPP
#define GRAPHCODE_REPORT_HPP

/// Machine-readable run reports for the command-line tools. Wall time is
/// tracked for the human-readable log but deliberately kept out of the
/// JSON payload so reports with identical inputs are byte-identical.

#include <string>
#include <vector>

#include <json.hpp>

#include "fp.hpp"

namespace graphcode {

struct CheckResult {
    std::string name;
    double deviation = 0;
    double tolerance = 0;
    bool pass = false;
};

struct RunReport {
    std::string command;
    std::string inputs_hash;
    std::vector<CheckResult> checks;
    nlohmann::ordered_json extra = nlohmann::ordered_json::object();
    double wall_time_s = 0;

    void add_check(const std::string &name, double deviation, double tolerance) {
        checks.push_back({name, deviation, tolerance, deviation <= tolerance});
    }

    bool pass() const {
        for (const auto &c : checks) {
            if (!c.pass) {
                return false;
            }
        }
        return true;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["command"] = command;
        j["inputs_hash"] = inputs_hash;
        auto arr = nlohmann::ordered_json::array();
        for (const auto &c : checks) {
            arr.push_back({{"name", c.name}, {"deviation", c.deviation}, {"tolerance", c.tolerance}, {"pass", c.pass}});
        }
        j["checks"] = arr;
        for (auto it = extra.begin(); it != extra.end(); ++it) {
            j[it.key()] = it.value();
        }
        j["pass"] = pass();
        return j;
    }
};

}  // namespace graphcode

#endif
