#pragma once

namespace ovp {

// Entry point of the command-line tool; also called directly by tests.
// Exit codes: 0 ok, 1 usage/parameter error, 2 malformed input file,
// 3 invariant violation (failed audit or internal assertion).
int cli_main(int argc, const char* const* argv);

}  // namespace ovp
