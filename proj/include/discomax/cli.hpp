#pragma once

namespace discomax {

/// Entry point for the command-line tool. Returns the process exit status:
/// 0 on success, 2 on usage errors, 1 on runtime errors. Errors are printed
/// to stderr as a single line `ERROR <CODE>: <message>`.
int run_cli(int argc, const char* const* argv);

}  // namespace discomax
