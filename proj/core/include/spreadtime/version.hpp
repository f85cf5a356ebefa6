#ifndef SPREADTIME_VERSION_HPP
#define SPREADTIME_VERSION_HPP

namespace spreadtime {

inline constexpr const char* kVersion = "0.1.0";

} // namespace spreadtime

#endif
