#ifndef CRITEX_VERSION_HPP
#define CRITEX_VERSION_HPP

namespace critex {

inline constexpr const char* tool_name    = "critex";
inline constexpr const char* tool_version = "0.1.0";

} // namespace critex

#endif // CRITEX_VERSION_HPP
