#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace lrwpan {

/// 2.4 GHz O-QPSK PHY: 250 kbps carried as 4-bit symbols.
inline constexpr std::uint64_t kSymbolRate = 62500;
inline constexpr std::uint64_t kBitRate = 250000;
inline constexpr std::uint64_t kBitsPerSymbol = 4;

/// A duration expressed in PHY symbol periods (16 us each).
using Symbols = std::uint64_t;

/// An instant on the simulation clock, counted in symbols since start.
class SymbolTime {
 public:
  constexpr SymbolTime() = default;
  constexpr explicit SymbolTime(std::uint64_t symbols) : symbols_(symbols) {}

  constexpr std::uint64_t symbols() const { return symbols_; }
  constexpr double seconds() const { return static_cast<double>(symbols_) / kSymbolRate; }

  /// Nearest symbol to a duration given in seconds.
  static SymbolTime from_seconds(double seconds);

  constexpr auto operator<=>(const SymbolTime&) const = default;

  constexpr SymbolTime& operator+=(Symbols d) {
    symbols_ += d;
    return *this;
  }
  friend constexpr SymbolTime operator+(SymbolTime t, Symbols d) { return t += d; }
  friend constexpr SymbolTime operator+(Symbols d, SymbolTime t) { return t += d; }

 private:
  std::uint64_t symbols_ = 0;
};

/// Distance between two instants; `later` must not precede `earlier`.
Symbols operator-(SymbolTime later, SymbolTime earlier);

/// Seconds with exactly seven fractional digits, e.g. "27.0016000".
/// One symbol is 16 us, so the representation is exact.
std::string format_seconds(SymbolTime t);

/// Air time of `bytes` octets at the 2.4 GHz PHY rate.
constexpr Symbols airtime(std::uint64_t bytes) {
  return (bytes * 8 + kBitsPerSymbol - 1) / kBitsPerSymbol;
}

}  // namespace lrwpan
