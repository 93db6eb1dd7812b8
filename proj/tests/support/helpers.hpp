#pragma once

#include <algorithm>
#include <cstddef>
#include <string_view>
#include <vector>

#include "grp/diagnostic.hpp"

namespace grptest {

inline std::size_t count_code(const std::vector<grp::Diagnostic>& diags,
                              std::string_view code) {
  return static_cast<std::size_t>(
      std::count_if(diags.begin(), diags.end(),
                    [&](const grp::Diagnostic& d) { return d.code == code; }));
}

inline bool has_code(const std::vector<grp::Diagnostic>& diags, std::string_view code) {
  return count_code(diags, code) > 0;
}

inline bool all_severity(const std::vector<grp::Diagnostic>& diags, grp::Severity s) {
  return std::all_of(diags.begin(), diags.end(),
                     [&](const grp::Diagnostic& d) { return d.severity == s; });
}

}  // namespace grptest
