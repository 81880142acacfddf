#ifndef FLOWDEP_VERSION_HPP
#define FLOWDEP_VERSION_HPP

namespace flowdep {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace flowdep

#endif
