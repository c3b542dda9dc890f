#pragma once

#include <iosfwd>

namespace daat::cli {

inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kDataError = 2;
inline constexpr int kCheckFailed = 3;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace daat::cli
