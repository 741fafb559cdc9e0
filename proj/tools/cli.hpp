#pragma once

namespace phystrack::cli {

enum ExitCode { kOk = 0, kUsage = 1, kIo = 2, kNumerical = 3 };

/// Runs the phystrack command line. Parse errors and bad configuration
/// return kUsage, unreadable or malformed files kIo, solver and
/// calibration failures kNumerical.
int run(int argc, const char* const* argv);

}  // namespace phystrack::cli
