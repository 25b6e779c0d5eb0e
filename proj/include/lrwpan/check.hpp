#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace lrwpan {

/// Extra text printed with a failed check, e.g. the run being simulated.
inline std::string& check_context() {
  thread_local std::string context;
  return context;
}

}  // namespace lrwpan

// Fatal invariant check. Violations are programming errors in the MAC or
// the harness, never recoverable runtime conditions.
#define LRWPAN_CHECK(cond, msg)                                                        \
  do {                                                                                 \
    if (!(cond)) {                                                                     \
      std::fprintf(stderr, "%s:%d: check failed: %s (%s)\n", __FILE__, __LINE__, #cond, \
                   msg);                                                               \
      if (!::lrwpan::check_context().empty()) {                                        \
        std::fprintf(stderr, "  while running %s\n", ::lrwpan::check_context().c_str()); \
      }                                                                                \
      std::abort();                                                                    \
    }                                                                                  \
  } while (0)
