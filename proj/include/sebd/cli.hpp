#pragma once

#include <iosfwd>

namespace sebd {

// Subcommands: run, sweep, analyze, predict, validate.  Values resolve as
// defaults, then command-line flags, then --config file entries (the config
// file wins); SEBD_THREADS overrides any thread-count setting.  Returns 0 on
// success, nonzero on usage or runtime errors (message on err).
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int cli_main(int argc, const char* const* argv);  // std::cout / std::cerr

}  // namespace sebd
