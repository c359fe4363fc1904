#pragma once

namespace nematic::app {

/// Entry point of the command-line tool; returns the process exit status.
int run_cli(int argc, char** argv);

}  // namespace nematic::app
