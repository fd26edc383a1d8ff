#pragma once

namespace anisofield::cli {

/// Exit codes: 0 success, 1 validation error, 2 numerical failure (including
/// a failed `verify`), 3 I/O error.
int run(int argc, char** argv);

}  // namespace anisofield::cli
