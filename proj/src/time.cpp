#include "lrwpan/time.hpp"

#include <cmath>
#include <cstdio>

#include "lrwpan/check.hpp"

namespace lrwpan {

SymbolTime SymbolTime::from_seconds(double seconds) {
  LRWPAN_CHECK(seconds >= 0.0, "negative time");
  return SymbolTime(static_cast<std::uint64_t>(std::llround(seconds * kSymbolRate)));
}

Symbols operator-(SymbolTime later, SymbolTime earlier) {
  LRWPAN_CHECK(later >= earlier, "negative duration");
  return later.symbols() - earlier.symbols();
}

std::string format_seconds(SymbolTime t) {
  // 1 symbol = 160 units of 1e-7 s.
  const std::uint64_t whole = t.symbols() / kSymbolRate;
  const std::uint64_t frac = (t.symbols() % kSymbolRate) * 160;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%llu.%07llu", static_cast<unsigned long long>(whole),
                static_cast<unsigned long long>(frac));
  return buf;
}

}  // namespace lrwpan
