#pragma once
// Subcommands of the ribbonlab executable. Each writes its artifacts, prints a
// short summary to `log` and returns the process exit code.

#include "ribbonlab/errors.hpp"
#include "ribbonlab/tools/config.hpp"

#include <json.hpp>

#include <functional>
#include <ostream>
#include <string>

namespace ribbonlab::tools {

enum ExitCode : int {
    kExitOk = 0,
    kExitIo = 1,
    kExitConfig = 2,
    kExitNumeric = 3,
    kExitAcceptance = 4,
};

int exit_code_for(ErrorKind kind);

inline constexpr const char *kReportSchema = "ribbonlab.report/1";

// {"value": v, "units": u}
nlohmann::json quantity(double value, const std::string &units);
nlohmann::json quantity(const Mat2 &value, const std::string &units);

// Report skeleton: schema, version, command, timestamp and config echo.
nlohmann::json report_header(const std::string &command, const RunConfig &config);

int cmd_derive(const RunConfig &config, std::ostream &log);
int cmd_rod(const RunConfig &config, std::ostream &log);
int cmd_shape(const RunConfig &config, std::ostream &log);
int cmd_gamma_check(const RunConfig &config, std::ostream &log);
int cmd_verify(const RunConfig &config, std::ostream &log);

// Runs `command`, mapping ribbonlab::Error to its exit code with a message on `err`.
int guarded(const std::function<int()> &command, std::ostream &err);

} // namespace ribbonlab::tools
