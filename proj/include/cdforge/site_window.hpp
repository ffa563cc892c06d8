#pragma once

#include <algorithm>
#include <optional>
#include <string>

#include "cdforge/errors.hpp"

namespace cdforge {

// Half-open interval [lo, hi) of sites on an open 1D chain.
struct SiteWindow {
  int lo = 0;
  int hi = 0;

  SiteWindow() = default;
  SiteWindow(int lo_, int hi_) : lo(lo_), hi(hi_) {
    if (lo >= hi) throw DomainError("SiteWindow: need lo < hi");
  }

  int width() const { return hi - lo; }

  bool contains(int site) const { return site >= lo && site < hi; }
  bool contains(const SiteWindow& other) const {
    return other.lo >= lo && other.hi <= hi;
  }
  bool overlaps(const SiteWindow& other) const {
    return lo < other.hi && other.lo < hi;
  }

  friend bool operator==(const SiteWindow& a, const SiteWindow& b) {
    return a.lo == b.lo && a.hi == b.hi;
  }
  friend bool operator!=(const SiteWindow& a, const SiteWindow& b) {
    return !(a == b);
  }
  friend bool operator<(const SiteWindow& a, const SiteWindow& b) {
    return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi;
  }
};

// Interval hull of two windows.
inline SiteWindow join(const SiteWindow& a, const SiteWindow& b) {
  return SiteWindow(std::min(a.lo, b.lo), std::max(a.hi, b.hi));
}

inline std::optional<SiteWindow> intersect(const SiteWindow& a, const SiteWindow& b) {
  int lo = std::max(a.lo, b.lo);
  int hi = std::min(a.hi, b.hi);
  if (lo >= hi) return std::nullopt;
  return SiteWindow(lo, hi);
}

inline std::string to_string(const SiteWindow& w) {
  return "[" + std::to_string(w.lo) + "," + std::to_string(w.hi) + ")";
}

}  // namespace cdforge
