#pragma once

namespace amp {

/// Entry point of the `ampsim` command-line tool. Returns 0 on success,
/// 2 on usage errors and 1 on runtime failures.
int run_cli(int argc, char** argv);

}  // namespace amp
