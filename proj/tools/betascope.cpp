// Copyright 2026-present the betascope project
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

#include <exception>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "betascope/config.hpp"
#include "betascope/error.hpp"
#include "betascope/runner.hpp"

namespace {

int run_command(betascope::Command command, const std::string& config_path,
                const std::string& out_override) {
    using namespace betascope;
    try {
        AnalysisConfig cfg =
            config_path.empty() ? AnalysisConfig{} : AnalysisConfig::parse_file(config_path);
        cfg.command = command;
        if (!out_override.empty()) cfg.output_dir = out_override;
        return run(cfg);
    } catch (const CostGuardError& e) {
        std::cerr << "betascope: cost guard: " << e.what() << "\n";
        return kExitCostGuard;
    } catch (const IoError& e) {
        std::cerr << "betascope: io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const InputError& e) {
        std::cerr << "betascope: invalid input: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const DegenerateInputError& e) {
        std::cerr << "betascope: degenerate input: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const std::exception& e) {
        std::cerr << "betascope: internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"betascope: multiscale beta-number analysis of atomic measures"};
    app.require_subcommand(1);

    struct SubSpec {
        const char* name;
        const char* help;
        betascope::Command command;
    };
    const SubSpec specs[] = {
        {"generate", "write a synthetic measure (and curve) from a generator",
         betascope::Command::generate},
        {"analyze", "per-cube betas and per-atom Jones profiles", betascope::Command::analyze},
        {"certify", "numeric certificate of the curve splitting estimate",
         betascope::Command::certify},
        {"whitney", "Whitney decomposition of a box minus a curve",
         betascope::Command::whitney},
        {"curvature", "Menger curvature energy of a measure", betascope::Command::curvature},
        {"report", "re-aggregate a previous run's tables", betascope::Command::report},
    };

    struct SubState {
        betascope::Command command{};
        std::string config_path;
        std::string out_dir;
    };
    std::vector<std::unique_ptr<SubState>> states;
    int exit_code = 0;
    for (const SubSpec& spec : specs) {
        auto state = std::make_unique<SubState>();
        state->command = spec.command;
        CLI::App* sub = app.add_subcommand(spec.name, spec.help);
        sub->add_option("--config", state->config_path, "configuration file (key = value)");
        sub->add_option("--out", state->out_dir, "output directory override");
        SubState* raw = state.get();
        sub->callback([raw, &exit_code] {
            exit_code = run_command(raw->command, raw->config_path, raw->out_dir);
        });
        states.push_back(std::move(state));
    }

    CLI11_PARSE(app, argc, argv);
    return exit_code;
}
